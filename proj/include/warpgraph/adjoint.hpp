#pragma once

#include <functional>
#include <map>
#include <utility>

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"
#include "warpgraph/pcg.hpp"
#include "warpgraph/preconditioner.hpp"

namespace warpgraph {

// Gradients of a scalar loss through a converged linear solve x = A^{-1} b.
struct SolveGradients {
  Eigen::VectorXd grad_b;  // A^{-1} grad_x

  // Pattern-restricted pullback onto the stored lower triangle of A:
  // diagonal entries g(k,k), off-pattern entries g(i,j) + g(j,i) where
  // g = -grad_b x^T (A is stored lower with implied symmetry).
  std::map<std::pair<int, int>, Mat6> grad_a_lower;

  // Free-matrix form -grad_b x^T, kept for verification.
  Eigen::MatrixXd grad_a_dense;
};

// Exact adjoint of a converged solve: grad_b solves A grad_b = grad_x (by
// PCG with the same preconditioner), grad_A = -grad_b x^T masked to A's
// pattern. PCG errors propagate.
SolveGradients solve_adjoint(const BlockSparseMatrix& a, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& grad_x, const Preconditioner& m,
                             double tol = 1e-12, int max_iters = 0 /*0: 4n*/);

// Reverse-mode sweep through exactly k recorded PCG iterations (x0 = 0).
// grad_a treats A as a free dense matrix. If the recurrence hits an exact
// zero residual before k steps, the remaining iterations are no-ops and the
// tape stops there.
struct UnrolledGradients {
  Eigen::VectorXd x;       // forward k-step result
  Eigen::VectorXd grad_b;
  Eigen::MatrixXd grad_a;
  int recorded_iterations = 0;
};
UnrolledGradients unrolled_pcg_grad(const BlockSparseMatrix& a,
                                    const Eigen::VectorXd& b,
                                    const Preconditioner& m, int k,
                                    const Eigen::VectorXd& grad_x);

// Runs the same forward recurrence without gradients (the exact k-step map
// the reverse sweep differentiates).
Eigen::VectorXd pcg_fixed_iterations(const BlockSparseMatrix& a,
                                     const Eigen::VectorXd& b,
                                     const Preconditioner& m, int k);

// Central-difference check of an analytic gradient. Returns the worst
// relative error and the coordinate where it occurs. The relative error
// denominator is max(|analytic|, |numeric|, 1e-12).
struct FiniteDiffReport {
  double max_rel_error = 0.0;
  int argmax_coord = -1;
};
FiniteDiffReport finite_diff_check(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& analytic_grad,
    double step = 1e-6);

}  // namespace warpgraph
