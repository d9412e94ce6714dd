#include "warpgraph/block_sparse.hpp"

#include <algorithm>

#include "warpgraph/errors.hpp"

namespace warpgraph {

BlockSparseMatrix BlockSparseMatrix::from_lower(
    int nblocks, const std::map<std::pair<int, int>, Mat6>& lower) {
  BlockSparseMatrix a;
  a.nblocks_ = nblocks;
  a.cols_.resize(size_t(nblocks));
  a.blocks_.resize(size_t(nblocks));

  // Collect the per-row column sets (lower entry (i,j) also appears as (j,i)).
  std::vector<std::vector<int>> cols(size_t(nblocks));
  for (const auto& [key, blk] : lower) {
    const auto [i, j] = key;
    if (i < 0 || i >= nblocks || j < 0 || j > i)
      throw DimensionMismatch("from_lower: block index out of range or not lower");
    cols[size_t(i)].push_back(j);
    if (i != j) cols[size_t(j)].push_back(i);
  }
  for (int i = 0; i < nblocks; ++i) {
    auto& c = cols[size_t(i)];
    c.push_back(i);  // diagonal always present
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    a.cols_[size_t(i)] = c;
    a.blocks_[size_t(i)].assign(c.size(), Mat6::Zero());
  }
  for (const auto& [key, blk] : lower) {
    const auto [i, j] = key;
    auto& ci = a.cols_[size_t(i)];
    const auto it = std::lower_bound(ci.begin(), ci.end(), j);
    a.blocks_[size_t(i)][size_t(it - ci.begin())] = blk;
    if (i != j) {
      auto& cj = a.cols_[size_t(j)];
      const auto jt = std::lower_bound(cj.begin(), cj.end(), i);
      a.blocks_[size_t(j)][size_t(jt - cj.begin())] = blk.transpose();
    }
  }
  return a;
}

BlockSparseMatrix BlockSparseMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % kBlockDim != 0)
    throw DimensionMismatch("from_dense: matrix must be square with 6|n");
  const int nblocks = int(m.rows()) / kBlockDim;
  std::map<std::pair<int, int>, Mat6> lower;
  for (int i = 0; i < nblocks; ++i)
    for (int j = 0; j <= i; ++j)
      lower[{i, j}] = m.block<kBlockDim, kBlockDim>(kBlockDim * i, kBlockDim * j);
  return from_lower(nblocks, lower);
}

const Mat6* BlockSparseMatrix::find_block(int i, int j) const {
  if (i < 0 || i >= nblocks_ || j < 0 || j >= nblocks_) return nullptr;
  const auto& c = cols_[size_t(i)];
  const auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return nullptr;
  return &blocks_[size_t(i)][size_t(it - c.begin())];
}

const Mat6& BlockSparseMatrix::diagonal_block(int i) const {
  const Mat6* blk = find_block(i, i);
  if (!blk) throw DimensionMismatch("diagonal block missing");
  return *blk;
}

void BlockSparseMatrix::multiply(const Eigen::VectorXd& x,
                                 Eigen::VectorXd& y) const {
  if (x.size() != dim())
    throw DimensionMismatch("matvec: vector length != matrix dimension");
  y.setZero(dim());
  for (int i = 0; i < nblocks_; ++i) {
    auto yi = y.segment<kBlockDim>(kBlockDim * i);
    const auto& c = cols_[size_t(i)];
    for (size_t s = 0; s < c.size(); ++s)
      yi += blocks_[size_t(i)][s] * x.segment<kBlockDim>(kBlockDim * c[s]);
  }
}

Eigen::VectorXd BlockSparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::MatrixXd BlockSparseMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < nblocks_; ++i) {
    const auto& c = cols_[size_t(i)];
    for (size_t s = 0; s < c.size(); ++s)
      m.block<kBlockDim, kBlockDim>(kBlockDim * i, kBlockDim * c[s]) =
          blocks_[size_t(i)][s];
  }
  return m;
}

size_t BlockSparseMatrix::nnz_lower_blocks() const {
  size_t n = 0;
  for_each_lower([&](int, int, const Mat6&) { ++n; });
  return n;
}

}  // namespace warpgraph
