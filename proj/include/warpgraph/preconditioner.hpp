#pragma once

#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"

namespace warpgraph {

enum class PrecondKind {
  Identity,
  BlockJacobi,
  IncompleteCholesky,
  LoadedDense,
  LoadedSparse,
  LoadedBlockDiagonal,
};

const char* precond_kind_name(PrecondKind k);

// SPD linear operator y = M^{-1} x applied inside PCG. Implementations are
// immutable after construction and re-entrant.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual PrecondKind kind() const = 0;
  virtual int dim() const = 0;
  virtual void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const = 0;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
  }
};

std::unique_ptr<Preconditioner> make_identity_preconditioner(int n);

// Inverts the 6x6 diagonal blocks via Cholesky. Throws SingularBlock (with
// the node index) when a block is not positive definite.
std::unique_ptr<Preconditioner> block_jacobi(const BlockSparseMatrix& a);

// Block IC(0): lower factor restricted to A's block sparsity pattern.
// A failed pivot restarts the factorization on A + alpha*diag(A), with alpha
// doubling from 1e-3; FactorizationFailed after 20 attempts.
std::unique_ptr<Preconditioner> incomplete_cholesky(const BlockSparseMatrix& a);

// In-memory lower-triangular factor L defining M^{-1} = L L^T. Mirrors the
// NRPC payload kinds.
struct LoadedFactor {
  enum class Kind : std::uint8_t { Dense = 0, Sparse = 1, BlockDiag = 2 };

  Kind kind = Kind::Dense;
  int n = 0;
  Eigen::MatrixXd dense;  // n x n, strictly lower + diagonal used
  std::vector<std::tuple<int, int, double>> sparse;  // (row, col, v), row >= col
  std::vector<Mat6> blockdiag;  // lower triangles of 6x6 blocks
};

// Builds the operator M^{-1} = L L^T, then clamps diagonal entries of M^{-1}
// from below at tau = 1e-6 so the operator stays positive definite even for
// rank-deficient factors.
std::unique_ptr<Preconditioner> make_loaded_preconditioner(const LoadedFactor& f);

// NRPC file -> operator (load_factor + make_loaded_preconditioner).
std::unique_ptr<Preconditioner> load_preconditioner(const std::string& path);

inline constexpr double kDiagonalClampTau = 1e-6;

}  // namespace warpgraph
