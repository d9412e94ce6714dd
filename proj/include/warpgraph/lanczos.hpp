#pragma once

#include <cstdint>

#include "warpgraph/block_sparse.hpp"
#include "warpgraph/preconditioner.hpp"

namespace warpgraph {

struct ConditionEstimate {
  double kappa = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int steps = 0;
  bool converged = false;  // Ritz values stabilized (or the space was exhausted)
};

// kappa(M^{-1} A) = lambda_max / lambda_min, estimated by preconditioned
// Lanczos with full reorthogonalization. Runs until the extreme Ritz values
// stabilize to ritz_tol relative, the Krylov space is exhausted, or max_steps
// is hit; the unstabilized case returns the best estimate with
// converged = false.
ConditionEstimate condition_number(const BlockSparseMatrix& a,
                                   const Preconditioner& m, int max_steps = 200,
                                   double ritz_tol = 1e-6,
                                   std::uint64_t seed = 0x5eed);

}  // namespace warpgraph
