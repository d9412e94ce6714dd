#pragma once

#include <string>
#include <utility>

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"
#include "warpgraph/preconditioner.hpp"

namespace warpgraph {

// NRAB linear-system dump: magic "NRAB", LE u32 nblocks, u32 block_dim (6),
// u32 nnz_blocks, then nnz_blocks x (u32 row, u32 col, 36 f64 row-major)
// covering the lower triangle incl. diagonal, then n f64 for b.
// Round-trips bit-exactly.
void dump_system(const BlockSparseMatrix& a, const Eigen::VectorXd& b,
                 const std::string& path);
std::pair<BlockSparseMatrix, Eigen::VectorXd> load_system(const std::string& path);

// NRPC preconditioner factor: magic "NRPC", u8 kind (0 dense, 1 sparse,
// 2 blockdiag), u32 n, then the kind-specific payload.
void save_factor(const LoadedFactor& f, const std::string& path);
LoadedFactor load_factor(const std::string& path);

}  // namespace warpgraph
