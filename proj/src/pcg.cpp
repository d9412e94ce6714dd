#include "warpgraph/pcg.hpp"

#include <chrono>

#include "warpgraph/errors.hpp"

namespace warpgraph {

std::pair<Eigen::VectorXd, SolveReport> pcg_solve(const BlockSparseMatrix& a,
                                                  const Eigen::VectorXd& b,
                                                  const Preconditioner& m,
                                                  int max_iters, double tol) {
  if (b.size() != a.dim())
    throw DimensionMismatch("pcg_solve: rhs length != matrix dimension");
  if (m.dim() != a.dim())
    throw DimensionMismatch("pcg_solve: preconditioner dimension mismatch");
  if (max_iters < 1) throw DimensionMismatch("pcg_solve: max_iters must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  const double norm_b = b.norm();
  report.residual_history.push_back(r.norm());

  if (norm_b == 0.0) {
    report.converged = true;
    report.wall_time = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0).count();
    return {x, report};
  }

  Eigen::VectorXd z = m.apply(r);
  Eigen::VectorXd p = z;
  double rho = r.dot(z);
  Eigen::VectorXd q(b.size());

  const double stop = tol * norm_b;
  double res_norm = report.residual_history.back();

  while (res_norm > stop && report.iterations < max_iters) {
    a.multiply(p, q);
    const double gamma = p.dot(q);
    if (!(gamma > 0.0))
      throw BreakdownError("pcg_solve: p^T A p <= 0, matrix is not SPD");
    const double alpha = rho / gamma;
    x += alpha * p;
    r -= alpha * q;
    m.apply(r, z);
    const double rho_next = r.dot(z);
    p = z + (rho_next / rho) * p;
    rho = rho_next;

    res_norm = r.norm();
    report.residual_history.push_back(res_norm);
    ++report.iterations;
  }

  report.converged = res_norm <= stop;
  report.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0).count();
  return {x, report};
}

int iterations_to_absolute(const std::vector<double>& residual_history,
                           double absolute_threshold) {
  for (size_t k = 0; k < residual_history.size(); ++k)
    if (residual_history[k] <= absolute_threshold) return int(k);
  return int(residual_history.size());
}

}  // namespace warpgraph
