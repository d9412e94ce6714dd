#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace warpgraph {

using Mat6 = Eigen::Matrix<double, 6, 6>;

// Symmetric block-sparse matrix with 6x6 blocks (the Gauss-Newton normal
// matrix J^T J). Storage keeps the full structure, mirrored bit-exactly from
// the lower triangle, so matrix-vector products are plain row sweeps. Every
// block-row carries its diagonal block.
class BlockSparseMatrix {
 public:
  static constexpr int kBlockDim = 6;

  BlockSparseMatrix() = default;

  // Builds from lower-triangle blocks (keys must satisfy row >= col). Missing
  // diagonal blocks are inserted as zero. The upper triangle is the bit-exact
  // transpose of the lower.
  static BlockSparseMatrix from_lower(
      int nblocks, const std::map<std::pair<int, int>, Mat6>& lower);

  // Densifies an n x n matrix into full block structure; n must be 6*k.
  static BlockSparseMatrix from_dense(const Eigen::MatrixXd& a);

  int nblocks() const { return nblocks_; }
  int dim() const { return kBlockDim * nblocks_; }

  const std::vector<int>& row_cols(int block_row) const {
    return cols_[size_t(block_row)];
  }
  const Mat6& block_at(int block_row, int idx_in_row) const {
    return blocks_[size_t(block_row)][size_t(idx_in_row)];
  }

  // nullptr when (i, j) is not in the pattern.
  const Mat6* find_block(int i, int j) const;
  const Mat6& diagonal_block(int i) const;

  bool has_block(int i, int j) const { return find_block(i, j) != nullptr; }

  // y = A x; deterministic accumulation order (rows ascending, cols ascending).
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd dense() const;

  size_t nnz_lower_blocks() const;

  // Visits lower-triangle blocks (row >= col) ascending by (row, col).
  template <typename Fn>
  void for_each_lower(Fn&& fn) const {
    for (int i = 0; i < nblocks_; ++i) {
      for (size_t s = 0; s < cols_[size_t(i)].size(); ++s) {
        const int j = cols_[size_t(i)][s];
        if (j > i) break;  // cols are sorted
        fn(i, j, blocks_[size_t(i)][s]);
      }
    }
  }

 private:
  int nblocks_ = 0;
  std::vector<std::vector<int>> cols_;    // sorted per block-row
  std::vector<std::vector<Mat6>> blocks_;
};

}  // namespace warpgraph
