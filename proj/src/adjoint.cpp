#include "warpgraph/adjoint.hpp"

#include <cmath>
#include <vector>

#include "warpgraph/errors.hpp"

namespace warpgraph {

SolveGradients solve_adjoint(const BlockSparseMatrix& a, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& grad_x, const Preconditioner& m,
                             double tol, int max_iters) {
  if (x.size() != a.dim() || grad_x.size() != a.dim())
    throw DimensionMismatch("solve_adjoint: vector length != matrix dimension");
  if (max_iters <= 0) max_iters = 4 * a.dim();

  SolveGradients out;
  out.grad_b = pcg_solve(a, grad_x, m, max_iters, tol).first;
  out.grad_a_dense = -out.grad_b * x.transpose();

  a.for_each_lower([&](int i, int j, const Mat6&) {
    Mat6 g = out.grad_a_dense.block<6, 6>(6 * i, 6 * j);
    if (i != j)
      g += out.grad_a_dense.block<6, 6>(6 * j, 6 * i).transpose();
    else
      // Within a diagonal block the off-diagonal scalars pair up too.
      for (int r = 0; r < 6; ++r)
        for (int c = 0; c < r; ++c) {
          const double sum = g(r, c) + g(c, r);
          g(r, c) = sum;
          g(c, r) = sum;
        }
    out.grad_a_lower[{i, j}] = g;
  });
  return out;
}

namespace {

struct Tape {
  std::vector<Eigen::VectorXd> p, q, r, z;  // per iteration j
  std::vector<double> rho, gamma, alpha;    // rho_j = r_j.z_j, gamma_j = p_j.Ap_j
  std::vector<double> beta;                 // beta_j for j < m-1
  Eigen::VectorXd x;
  int m = 0;  // iterations actually executed
};

Tape run_forward(const BlockSparseMatrix& a, const Eigen::VectorXd& b,
                 const Preconditioner& m, int k) {
  Tape t;
  const Eigen::Index n = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = m.apply(r);
  Eigen::VectorXd p = z;
  double rho = r.dot(z);

  for (int j = 0; j < k; ++j) {
    if (rho == 0.0) break;  // exact convergence: later iterations are no-ops
    const Eigen::VectorXd q = a.multiply(p);
    const double gamma = p.dot(q);
    if (!(gamma > 0.0))
      throw BreakdownError("unrolled_pcg: p^T A p <= 0, matrix is not SPD");
    const double alpha = rho / gamma;

    t.p.push_back(p);
    t.q.push_back(q);
    t.r.push_back(r);
    t.z.push_back(z);
    t.rho.push_back(rho);
    t.gamma.push_back(gamma);
    t.alpha.push_back(alpha);
    ++t.m;

    x += alpha * p;
    r -= alpha * q;
    if (j + 1 < k) {
      m.apply(r, z);
      const double rho_next = r.dot(z);
      const double beta = rho_next / rho;
      t.beta.push_back(beta);
      p = z + beta * p;
      rho = rho_next;
    }
  }
  t.x = x;
  return t;
}

}  // namespace

Eigen::VectorXd pcg_fixed_iterations(const BlockSparseMatrix& a,
                                     const Eigen::VectorXd& b,
                                     const Preconditioner& m, int k) {
  if (b.size() != a.dim())
    throw DimensionMismatch("pcg_fixed_iterations: rhs length != matrix dimension");
  return run_forward(a, b, m, k).x;
}

UnrolledGradients unrolled_pcg_grad(const BlockSparseMatrix& a,
                                    const Eigen::VectorXd& b,
                                    const Preconditioner& m, int k,
                                    const Eigen::VectorXd& grad_x) {
  if (k < 1) throw DimensionMismatch("unrolled_pcg_grad: k must be >= 1");
  if (b.size() != a.dim() || grad_x.size() != a.dim())
    throw DimensionMismatch("unrolled_pcg_grad: vector length != matrix dimension");

  const Eigen::Index n = b.size();
  const Tape t = run_forward(a, b, m, k);

  UnrolledGradients out;
  out.x = t.x;
  out.recorded_iterations = t.m;
  out.grad_a = Eigen::MatrixXd::Zero(n, n);
  if (t.m == 0) {  // b was exactly 0: x == 0 identically
    out.grad_b = Eigen::VectorXd::Zero(n);
    return out;
  }

  // Adjoint accumulators carried between iterations. Names mirror the
  // forward quantities: rbar_j pairs with r_j, etc.
  Eigen::VectorXd xbar = grad_x;
  Eigen::VectorXd rbar = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd zbar = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd pbar = Eigen::VectorXd::Zero(n);
  double rhobar = 0.0;

  for (int j = t.m - 1; j >= 0; --j) {
    // Entering this scope, (rbar, zbar, pbar, rhobar) hold the adjoints of
    // (r_{j+1}, z_{j+1}, p_{j+1}, rho_{j+1}).
    if (j + 1 < t.m) {
      // p_{j+1} = z_{j+1} + beta_j p_j
      zbar += pbar;
      const double betabar = pbar.dot(t.p[size_t(j)]);
      Eigen::VectorXd pbar_j = t.beta[size_t(j)] * pbar;
      // beta_j = rho_{j+1} / rho_j
      rhobar += betabar / t.rho[size_t(j)];
      double rhobar_j = -betabar * t.beta[size_t(j)] / t.rho[size_t(j)];
      // rho_{j+1} = r_{j+1} . z_{j+1}; r_{j+1}, z_{j+1} are the forward
      // values after iteration j, i.e. r_j - alpha_j q_j and its precondition.
      const Eigen::VectorXd r_next =
          t.r[size_t(j)] - t.alpha[size_t(j)] * t.q[size_t(j)];
      const Eigen::VectorXd& z_next =
          (j + 1 < t.m) ? t.z[size_t(j) + 1] : t.z[size_t(j)];  // m>j+1 here
      rbar += rhobar * z_next;
      zbar += rhobar * r_next;
      // z_{j+1} = M^{-1} r_{j+1}
      rbar += m.apply(zbar);
      pbar = std::move(pbar_j);
      rhobar = rhobar_j;
    }
    // r_{j+1} = r_j - alpha_j q_j
    double alphabar = -rbar.dot(t.q[size_t(j)]);
    Eigen::VectorXd qbar = -t.alpha[size_t(j)] * rbar;
    // x_{j+1} = x_j + alpha_j p_j
    alphabar += xbar.dot(t.p[size_t(j)]);
    pbar += t.alpha[size_t(j)] * xbar;
    // alpha_j = rho_j / gamma_j
    rhobar += alphabar / t.gamma[size_t(j)];
    const double gammabar = -alphabar * t.alpha[size_t(j)] / t.gamma[size_t(j)];
    // gamma_j = p_j . q_j
    pbar += gammabar * t.q[size_t(j)];
    qbar += gammabar * t.p[size_t(j)];
    // q_j = A p_j
    out.grad_a += qbar * t.p[size_t(j)].transpose();
    pbar += a.multiply(qbar);
    // rbar/zbar now refer to r_j / z_j going into the next (earlier) scope.
    // r_j and z_j feed rho_j = r_j . z_j at the top of iteration j, handled
    // when that scope closes (j-1's tail or the init below).
    if (j > 0) {
      // rho_j was produced inside iteration j-1's tail as r_j . z_j; fold the
      // pending rhobar there. Also z_j = M^{-1} r_j from that tail.
      // Those are handled at the top of the previous loop pass, so just carry.
      continue;
    }
  }

  // Initialization: r_0 = b, z_0 = M^{-1} r_0, p_0 = z_0, rho_0 = r_0 . z_0.
  zbar += pbar;                       // p_0 = z_0
  rbar += rhobar * t.z[0];            // rho_0 = r_0 . z_0
  zbar += rhobar * t.r[0];
  rbar += m.apply(zbar);              // z_0 = M^{-1} r_0
  out.grad_b = rbar;
  return out;
}

FiniteDiffReport finite_diff_check(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& analytic_grad,
    double step) {
  if (analytic_grad.size() != x0.size())
    throw DimensionMismatch("finite_diff_check: gradient length mismatch");
  FiniteDiffReport report;
  Eigen::VectorXd x = x0;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    x(i) = x0(i) + step;
    const double fp = f(x);
    x(i) = x0(i) - step;
    const double fm = f(x);
    x(i) = x0(i);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NonFinite("finite_diff_check: f returned a non-finite value");
    const double numeric = (fp - fm) / (2.0 * step);
    const double denom =
        std::max({std::abs(analytic_grad(i)), std::abs(numeric), 1e-12});
    const double rel = std::abs(analytic_grad(i) - numeric) / denom;
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.argmax_coord = int(i);
    }
  }
  return report;
}

}  // namespace warpgraph
