#include "warpgraph/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "warpgraph/errors.hpp"
#include "warpgraph/rng.hpp"

namespace warpgraph {

// Lanczos on the operator v -> A M^{-1} v, self-adjoint under the M^{-1}
// inner product; its Ritz values approximate the spectrum of M^{-1} A (the
// same spectrum as the split-preconditioned L^T A L). Keeping z_j = M^{-1} v_j
// alongside v_j makes every inner product a plain dot, so each step costs one
// A-apply and one M-apply. Full reorthogonalization keeps the extreme Ritz
// values trustworthy at desk scale.
ConditionEstimate condition_number(const BlockSparseMatrix& a,
                                   const Preconditioner& m, int max_steps,
                                   double ritz_tol, std::uint64_t seed) {
  const int n = a.dim();
  if (m.dim() != n)
    throw DimensionMismatch("condition_number: preconditioner dimension mismatch");
  const int steps_cap = std::min(max_steps, n);

  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);

  Eigen::VectorXd z = m.apply(v);
  double nrm2 = v.dot(z);
  if (!(nrm2 > 0.0))
    throw NotSPD("condition_number: preconditioner is not positive definite");
  v /= std::sqrt(nrm2);
  z /= std::sqrt(nrm2);

  std::vector<Eigen::VectorXd> vs{v}, zs{z};
  std::vector<double> alpha, beta;

  ConditionEstimate est;
  double prev_min = std::numeric_limits<double>::quiet_NaN();
  double prev_max = prev_min;
  double scale = 0.0;

  for (int j = 0; j < steps_cap; ++j) {
    Eigen::VectorXd w = a.multiply(zs.back());
    const double aj = w.dot(zs.back());
    alpha.push_back(aj);
    scale = std::max(scale, std::abs(aj));

    w -= aj * vs.back();
    if (j > 0) w -= beta.back() * vs[size_t(j) - 1];
    for (size_t i = 0; i < vs.size(); ++i) w -= w.dot(zs[i]) * vs[i];

    // Ritz values of the current tridiagonal.
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(),
                                                             Eigen::Index(alpha.size()));
    Eigen::VectorXd sub(std::max<size_t>(beta.size(), 1));
    for (size_t i = 0; i < beta.size(); ++i) sub(Eigen::Index(i)) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub.head(Eigen::Index(beta.size())),
                               Eigen::EigenvaluesOnly);
    est.lambda_min = eig.eigenvalues().minCoeff();
    est.lambda_max = eig.eigenvalues().maxCoeff();
    est.steps = j + 1;

    if (j >= 1) {
      const double dmin = std::abs(est.lambda_min - prev_min);
      const double dmax = std::abs(est.lambda_max - prev_max);
      if (dmin <= ritz_tol * std::abs(est.lambda_min) &&
          dmax <= ritz_tol * std::abs(est.lambda_max)) {
        est.converged = true;
        break;
      }
    }
    prev_min = est.lambda_min;
    prev_max = est.lambda_max;

    Eigen::VectorXd zt = m.apply(w);
    double beta2 = w.dot(zt);
    if (beta2 < 0.0) beta2 = 0.0;
    const double bj = std::sqrt(beta2);
    if (bj <= 1e-13 * std::max(scale, 1.0)) {
      est.converged = true;  // Krylov space exhausted: spectrum captured
      break;
    }
    beta.push_back(bj);
    scale = std::max(scale, bj);
    vs.push_back(w / bj);
    zs.push_back(zt / bj);
  }

  if (est.steps == steps_cap && steps_cap == n) est.converged = true;
  est.kappa = (est.lambda_min > 0.0)
                  ? est.lambda_max / est.lambda_min
                  : std::numeric_limits<double>::infinity();
  return est;
}

}  // namespace warpgraph
