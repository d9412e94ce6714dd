#include "warpgraph/system_io.hpp"

#include <map>

#include "binary_io.hpp"

namespace warpgraph {

void dump_system(const BlockSparseMatrix& a, const Eigen::VectorXd& b,
                 const std::string& path) {
  if (b.size() != a.dim())
    throw DimensionMismatch("dump_system: rhs length != matrix dimension");
  detail::Writer w;
  w.magic("NRAB");
  w.u32(std::uint32_t(a.nblocks()));
  w.u32(std::uint32_t(BlockSparseMatrix::kBlockDim));
  w.u32(std::uint32_t(a.nnz_lower_blocks()));
  a.for_each_lower([&](int i, int j, const Mat6& blk) {
    w.u32(std::uint32_t(i));
    w.u32(std::uint32_t(j));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) w.f64(blk(r, c));
  });
  for (Eigen::Index k = 0; k < b.size(); ++k) w.f64(b(k));
  w.write_to(path);
}

std::pair<BlockSparseMatrix, Eigen::VectorXd> load_system(const std::string& path) {
  const auto buf = detail::read_file(path);
  detail::Reader r(buf, path);
  r.expect_magic("NRAB");
  const std::uint32_t nblocks = r.u32();
  const std::uint32_t block_dim = r.u32();
  const std::uint32_t nnz = r.u32();
  if (block_dim != 6) throw FormatError(path + ": block_dim must be 6");
  if (nblocks == 0) throw FormatError(path + ": empty system");

  std::map<std::pair<int, int>, Mat6> lower;
  for (std::uint32_t e = 0; e < nnz; ++e) {
    const std::uint32_t row = r.u32();
    const std::uint32_t col = r.u32();
    if (row >= nblocks || col > row)
      throw FormatError(path + ": block index outside the lower triangle");
    Mat6 blk;
    for (int rr = 0; rr < 6; ++rr)
      for (int cc = 0; cc < 6; ++cc) blk(rr, cc) = r.f64();
    if (!lower.emplace(std::make_pair(int(row), int(col)), blk).second)
      throw FormatError(path + ": duplicate block entry");
  }
  for (std::uint32_t i = 0; i < nblocks; ++i)
    if (!lower.count({int(i), int(i)}))
      throw FormatError(path + ": missing diagonal block");

  Eigen::VectorXd b(6 * Eigen::Index(nblocks));
  for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = r.f64();
  r.expect_end();
  return {BlockSparseMatrix::from_lower(int(nblocks), lower), std::move(b)};
}

void save_factor(const LoadedFactor& f, const std::string& path) {
  if (f.n <= 0 || f.n % 6 != 0)
    throw DimensionMismatch("save_factor: n must be a positive multiple of 6");
  detail::Writer w;
  w.magic("NRPC");
  w.u8(std::uint8_t(f.kind));
  w.u32(std::uint32_t(f.n));
  switch (f.kind) {
    case LoadedFactor::Kind::Dense:
      if (f.dense.rows() != f.n || f.dense.cols() != f.n)
        throw DimensionMismatch("save_factor: dense factor shape");
      for (int r = 0; r < f.n; ++r)
        for (int c = 0; c <= r; ++c) w.f64(f.dense(r, c));
      break;
    case LoadedFactor::Kind::Sparse:
      w.u32(std::uint32_t(f.sparse.size()));
      for (const auto& [r, c, v] : f.sparse) {
        if (r < c || c < 0 || r >= f.n)
          throw DimensionMismatch("save_factor: sparse entry not lower-triangular");
        w.u32(std::uint32_t(r));
        w.u32(std::uint32_t(c));
        w.f64(v);
      }
      break;
    case LoadedFactor::Kind::BlockDiag:
      w.u32(std::uint32_t(f.blockdiag.size()));
      if (int(f.blockdiag.size()) * 6 != f.n)
        throw DimensionMismatch("save_factor: blockdiag count");
      for (const auto& blk : f.blockdiag)
        for (int r = 0; r < 6; ++r)
          for (int c = 0; c <= r; ++c) w.f64(blk(r, c));
      break;
  }
  w.write_to(path);
}

LoadedFactor load_factor(const std::string& path) {
  const auto buf = detail::read_file(path);
  detail::Reader r(buf, path);
  r.expect_magic("NRPC");
  const std::uint8_t kind_byte = r.u8();
  if (kind_byte > 2) throw FormatError(path + ": unknown factor kind");
  LoadedFactor f;
  f.kind = LoadedFactor::Kind(kind_byte);
  f.n = int(r.u32());
  if (f.n <= 0 || f.n % 6 != 0)
    throw FormatError(path + ": n must be a positive multiple of 6");

  switch (f.kind) {
    case LoadedFactor::Kind::Dense: {
      f.dense = Eigen::MatrixXd::Zero(f.n, f.n);
      for (int row = 0; row < f.n; ++row)
        for (int col = 0; col <= row; ++col) f.dense(row, col) = r.f64();
      break;
    }
    case LoadedFactor::Kind::Sparse: {
      const std::uint32_t nnz = r.u32();
      f.sparse.reserve(nnz);
      for (std::uint32_t e = 0; e < nnz; ++e) {
        const std::uint32_t row = r.u32();
        const std::uint32_t col = r.u32();
        const double v = r.f64();
        if (row >= std::uint32_t(f.n) || col > row)
          throw FormatError(path + ": sparse entry outside the lower triangle");
        f.sparse.emplace_back(int(row), int(col), v);
      }
      break;
    }
    case LoadedFactor::Kind::BlockDiag: {
      const std::uint32_t nblocks = r.u32();
      if (int(nblocks) * 6 != f.n)
        throw FormatError(path + ": blockdiag count does not match n");
      f.blockdiag.assign(nblocks, Mat6::Zero());
      for (std::uint32_t b = 0; b < nblocks; ++b)
        for (int row = 0; row < 6; ++row)
          for (int col = 0; col <= row; ++col) f.blockdiag[b](row, col) = r.f64();
      break;
    }
  }
  r.expect_end();
  return f;
}

}  // namespace warpgraph
