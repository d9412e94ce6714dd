#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"
#include "warpgraph/preconditioner.hpp"

namespace warpgraph {

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // ||b - A x_k||_2, length iterations+1
  bool converged = false;
  double wall_time = 0.0;          // seconds
  double precond_setup_time = 0.0; // seconds, filled by callers that time setup
};

// Preconditioned conjugate gradient from x0 = 0. Stops when
// ||r_k|| / ||b|| <= tol or after max_iters. Throws BreakdownError when
// p^T A p <= 0 (input not SPD), DimensionMismatch on size conflicts.
std::pair<Eigen::VectorXd, SolveReport> pcg_solve(const BlockSparseMatrix& a,
                                                  const Eigen::VectorXd& b,
                                                  const Preconditioner& m,
                                                  int max_iters, double tol);

// Iterations needed to push ||r|| below an absolute threshold, read off a
// residual history; returns history length when never reached.
int iterations_to_absolute(const std::vector<double>& residual_history,
                           double absolute_threshold);

}  // namespace warpgraph
