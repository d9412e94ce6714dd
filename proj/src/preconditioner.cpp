#include "warpgraph/preconditioner.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "warpgraph/errors.hpp"
#include "warpgraph/system_io.hpp"

namespace warpgraph {

const char* precond_kind_name(PrecondKind k) {
  switch (k) {
    case PrecondKind::Identity: return "identity";
    case PrecondKind::BlockJacobi: return "block-jacobi";
    case PrecondKind::IncompleteCholesky: return "ic0";
    case PrecondKind::LoadedDense: return "loaded-dense";
    case PrecondKind::LoadedSparse: return "loaded-sparse";
    case PrecondKind::LoadedBlockDiagonal: return "loaded-blockdiag";
  }
  return "?";
}

namespace {

class IdentityPrecond final : public Preconditioner {
 public:
  explicit IdentityPrecond(int n) : n_(n) {}
  PrecondKind kind() const override { return PrecondKind::Identity; }
  int dim() const override { return n_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    if (x.size() != n_) throw DimensionMismatch("identity preconditioner: size");
    y = x;
  }

 private:
  int n_;
};

class BlockJacobiPrecond final : public Preconditioner {
 public:
  explicit BlockJacobiPrecond(const BlockSparseMatrix& a) : n_(a.dim()) {
    factors_.reserve(size_t(a.nblocks()));
    for (int i = 0; i < a.nblocks(); ++i) {
      Eigen::LLT<Mat6> llt(a.diagonal_block(i));
      if (llt.info() != Eigen::Success)
        throw SingularBlock("block_jacobi: diagonal block not SPD at node " +
                                std::to_string(i),
                            i);
      factors_.push_back(std::move(llt));
    }
  }
  PrecondKind kind() const override { return PrecondKind::BlockJacobi; }
  int dim() const override { return n_; }
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    if (x.size() != n_) throw DimensionMismatch("block_jacobi: size");
    y.resize(n_);
    for (size_t i = 0; i < factors_.size(); ++i)
      y.segment<6>(6 * Eigen::Index(i)) =
          factors_[i].solve(x.segment<6>(6 * Eigen::Index(i)));
  }

 private:
  int n_;
  std::vector<Eigen::LLT<Mat6>> factors_;
};

// Block incomplete Cholesky restricted to A's block pattern.
class Ic0Precond final : public Preconditioner {
 public:
  explicit Ic0Precond(const BlockSparseMatrix& a) : n_(a.dim()) {
    const int nb = a.nblocks();
    // Lower pattern per row (ascending, diagonal last).
    pattern_.resize(size_t(nb));
    for (int i = 0; i < nb; ++i)
      for (int j : a.row_cols(i))
        if (j <= i) pattern_[size_t(i)].push_back(j);

    double alpha = 0.0;
    for (int attempt = 0; attempt < 20; ++attempt) {
      if (try_factorize(a, alpha)) {
        build_column_index();
        return;
      }
      alpha = (alpha == 0.0) ? 1e-3 : 2.0 * alpha;
    }
    throw FactorizationFailed(
        "incomplete_cholesky: no SPD factorization after 20 diagonal boosts");
  }

  PrecondKind kind() const override { return PrecondKind::IncompleteCholesky; }
  int dim() const override { return n_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    if (x.size() != n_) throw DimensionMismatch("ic0: size");
    const int nb = n_ / 6;
    // Forward solve L y = x.
    Eigen::VectorXd w(n_);
    for (int i = 0; i < nb; ++i) {
      Eigen::Matrix<double, 6, 1> acc = x.segment<6>(6 * i);
      const auto& pat = pattern_[size_t(i)];
      for (size_t s = 0; s + 1 < pat.size(); ++s)  // all j < i
        acc -= low_[size_t(i)][s] * w.segment<6>(6 * pat[s]);
      w.segment<6>(6 * i) =
          diag_[size_t(i)].triangularView<Eigen::Lower>().solve(acc);
    }
    // Backward solve L^T y = w.
    y.resize(n_);
    for (int i = nb - 1; i >= 0; --i) {
      Eigen::Matrix<double, 6, 1> acc = w.segment<6>(6 * i);
      for (const auto& [j, blk] : above_[size_t(i)])  // rows j > i holding L_ji
        acc -= blk->transpose() * y.segment<6>(6 * j);
      y.segment<6>(6 * i) =
          diag_[size_t(i)].triangularView<Eigen::Lower>().transpose().solve(acc);
    }
  }

 private:
  bool try_factorize(const BlockSparseMatrix& a, double alpha) {
    const int nb = a.nblocks();
    low_.assign(size_t(nb), {});
    diag_.assign(size_t(nb), Mat6::Zero());
    for (int i = 0; i < nb; ++i)
      low_[size_t(i)].assign(pattern_[size_t(i)].size() - 1, Mat6::Zero());

    for (int i = 0; i < nb; ++i) {
      const auto& pi = pattern_[size_t(i)];
      for (size_t s = 0; s + 1 < pi.size(); ++s) {
        const int j = pi[s];
        Mat6 sum = *a.find_block(i, j);
        // Intersect the strict-lower patterns of rows i and j.
        const auto& pj = pattern_[size_t(j)];
        size_t si = 0, sj = 0;
        while (si < s && sj + 1 < pj.size()) {
          if (pi[si] == pj[sj]) {
            sum -= low_[size_t(i)][si] * low_[size_t(j)][sj].transpose();
            ++si;
            ++sj;
          } else if (pi[si] < pj[sj]) {
            ++si;
          } else {
            ++sj;
          }
        }
        // L_ij = sum * L_jj^{-T}
        low_[size_t(i)][s] = diag_[size_t(j)]
                                 .triangularView<Eigen::Lower>()
                                 .transpose()
                                 .solve<Eigen::OnTheRight>(sum);
      }
      Mat6 d = a.diagonal_block(i);
      if (alpha > 0.0)
        d.diagonal() += alpha * a.diagonal_block(i).diagonal();
      for (size_t s = 0; s + 1 < pi.size(); ++s)
        d -= low_[size_t(i)][s] * low_[size_t(i)][s].transpose();
      Eigen::LLT<Mat6> llt(d);
      if (llt.info() != Eigen::Success) return false;
      diag_[size_t(i)] = llt.matrixL();
    }
    return true;
  }

  void build_column_index() {
    above_.assign(low_.size(), {});
    for (size_t i = 0; i < low_.size(); ++i) {
      const auto& pat = pattern_[i];
      for (size_t s = 0; s + 1 < pat.size(); ++s)
        above_[size_t(pat[s])].push_back({int(i), &low_[i][s]});
    }
  }

  int n_;
  std::vector<std::vector<int>> pattern_;    // lower cols per row, diag last
  std::vector<std::vector<Mat6>> low_;       // strict-lower factor blocks
  std::vector<Mat6> diag_;                   // L_ii (lower triangular)
  std::vector<std::vector<std::pair<int, const Mat6*>>> above_;
};

// M^{-1} = L L^T (+ diagonal clamp) from a loaded factor.
class LoadedPrecond final : public Preconditioner {
 public:
  explicit LoadedPrecond(const LoadedFactor& f) : f_(f) {
    if (f_.n <= 0 || f_.n % 6 != 0)
      throw DimensionMismatch("loaded preconditioner: n must be a positive multiple of 6");
    switch (f_.kind) {
      case LoadedFactor::Kind::Dense:
        kind_ = PrecondKind::LoadedDense;
        if (f_.dense.rows() != f_.n || f_.dense.cols() != f_.n)
          throw DimensionMismatch("loaded dense factor: shape");
        break;
      case LoadedFactor::Kind::Sparse:
        kind_ = PrecondKind::LoadedSparse;
        for (const auto& [r, c, v] : f_.sparse)
          if (r < c || r >= f_.n || c < 0)
            throw DimensionMismatch("loaded sparse factor: entry not lower-triangular");
        break;
      case LoadedFactor::Kind::BlockDiag:
        kind_ = PrecondKind::LoadedBlockDiagonal;
        if (int(f_.blockdiag.size()) * 6 != f_.n)
          throw DimensionMismatch("loaded blockdiag factor: block count");
        break;
    }
    // (L L^T)_kk = squared norm of row k of L; clamp the operator diagonal
    // from below at tau.
    Eigen::VectorXd rowsq = Eigen::VectorXd::Zero(f_.n);
    switch (f_.kind) {
      case LoadedFactor::Kind::Dense:
        for (int r = 0; r < f_.n; ++r)
          for (int c = 0; c <= r; ++c) rowsq(r) += f_.dense(r, c) * f_.dense(r, c);
        break;
      case LoadedFactor::Kind::Sparse:
        for (const auto& [r, c, v] : f_.sparse) rowsq(r) += v * v;
        break;
      case LoadedFactor::Kind::BlockDiag:
        for (size_t b = 0; b < f_.blockdiag.size(); ++b)
          for (int r = 0; r < 6; ++r)
            for (int c = 0; c <= r; ++c)
              rowsq(6 * Eigen::Index(b) + r) +=
                  f_.blockdiag[b](r, c) * f_.blockdiag[b](r, c);
        break;
    }
    dfix_ = (kDiagonalClampTau - rowsq.array()).max(0.0);
  }

  PrecondKind kind() const override { return kind_; }
  int dim() const override { return f_.n; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
    if (x.size() != f_.n) throw DimensionMismatch("loaded preconditioner: size");
    switch (f_.kind) {
      case LoadedFactor::Kind::Dense: {
        const Eigen::VectorXd t =
            f_.dense.triangularView<Eigen::Lower>().transpose() * x;
        y = f_.dense.triangularView<Eigen::Lower>() * t;
        break;
      }
      case LoadedFactor::Kind::Sparse: {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(f_.n);
        for (const auto& [r, c, v] : f_.sparse) t(c) += v * x(r);
        y.setZero(f_.n);
        for (const auto& [r, c, v] : f_.sparse) y(r) += v * t(c);
        break;
      }
      case LoadedFactor::Kind::BlockDiag: {
        y.resize(f_.n);
        for (size_t b = 0; b < f_.blockdiag.size(); ++b) {
          const auto xb = x.segment<6>(6 * Eigen::Index(b));
          const Eigen::Matrix<double, 6, 1> t =
              f_.blockdiag[b].triangularView<Eigen::Lower>().transpose() * xb;
          y.segment<6>(6 * Eigen::Index(b)) =
              f_.blockdiag[b].triangularView<Eigen::Lower>() * t;
        }
        break;
      }
    }
    y.array() += dfix_.array() * x.array();
  }

 private:
  LoadedFactor f_;
  PrecondKind kind_;
  Eigen::ArrayXd dfix_;
};

}  // namespace

std::unique_ptr<Preconditioner> make_identity_preconditioner(int n) {
  return std::make_unique<IdentityPrecond>(n);
}

std::unique_ptr<Preconditioner> block_jacobi(const BlockSparseMatrix& a) {
  return std::make_unique<BlockJacobiPrecond>(a);
}

std::unique_ptr<Preconditioner> incomplete_cholesky(const BlockSparseMatrix& a) {
  return std::make_unique<Ic0Precond>(a);
}

std::unique_ptr<Preconditioner> make_loaded_preconditioner(const LoadedFactor& f) {
  return std::make_unique<LoadedPrecond>(f);
}

std::unique_ptr<Preconditioner> load_preconditioner(const std::string& path) {
  return make_loaded_preconditioner(load_factor(path));
}

}  // namespace warpgraph
