#pragma once

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"

namespace warpgraph {

// Dense Cholesky reference solve. Guarded to n <= 5000; throws NotSPD when
// the factorization fails.
Eigen::VectorXd dense_direct_solve(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b);
Eigen::VectorXd dense_direct_solve(const BlockSparseMatrix& a,
                                   const Eigen::VectorXd& b);

// Lower Cholesky factor of A^{-1} (the perfect preconditioner factor).
Eigen::MatrixXd cholesky_of_inverse(const Eigen::MatrixXd& a);

}  // namespace warpgraph
