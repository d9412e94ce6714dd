#include "warpgraph/dense_oracle.hpp"

#include <Eigen/Dense>

#include "warpgraph/errors.hpp"

namespace warpgraph {

Eigen::VectorXd dense_direct_solve(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw DimensionMismatch("dense_direct_solve: shape mismatch");
  if (a.rows() > 5000)
    throw DimensionMismatch("dense_direct_solve: guarded to n <= 5000");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotSPD("dense_direct_solve: Cholesky failed, matrix not SPD");
  return llt.solve(b);
}

Eigen::VectorXd dense_direct_solve(const BlockSparseMatrix& a,
                                   const Eigen::VectorXd& b) {
  return dense_direct_solve(a.dense(), b);
}

Eigen::MatrixXd cholesky_of_inverse(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NotSPD("cholesky_of_inverse: matrix not SPD");
  Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  inv = 0.5 * (inv + inv.transpose().eval());  // symmetrize roundoff
  Eigen::LLT<Eigen::MatrixXd> llt_inv(inv);
  if (llt_inv.info() != Eigen::Success)
    throw NotSPD("cholesky_of_inverse: inverse not SPD");
  return llt_inv.matrixL();
}

}  // namespace warpgraph
