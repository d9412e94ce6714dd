#include "warpgraph/energy.hpp"

#include <cmath>
#include <map>

#include "warpgraph/camera.hpp"
#include "warpgraph/errors.hpp"
#include "warpgraph/so3.hpp"

namespace warpgraph {

void Weights::validate() const {
  if (lambda_f < 0.0 || lambda_g < 0.0 || lambda_r < 0.0)
    throw FormatError("weights must be non-negative");
  if (lambda_f == 0.0 && lambda_g == 0.0 && lambda_r == 0.0)
    throw FormatError("weights must not all be zero");
}

SampleResult sample_bilinear(const Grid<double>& grid, const Eigen::Vector2d& uv,
                             bool zero_is_invalid) {
  if (grid.w < 2 || grid.h < 2)
    throw OutOfBounds("sample_bilinear: grid smaller than 2x2");
  const double u = uv.x();
  const double v = uv.y();
  if (!(u >= 0.0 && u <= grid.w - 1) || !(v >= 0.0 && v <= grid.h - 1))
    throw OutOfBounds("sample_bilinear: coordinate outside grid");

  // Clamp the base cell so uv on the far boundary stays one-sided valid.
  const int x0 = std::min(int(std::floor(u)), grid.w - 2);
  const int y0 = std::min(int(std::floor(v)), grid.h - 2);
  const double fu = u - x0;
  const double fv = v - y0;

  if (zero_is_invalid) {
    if (grid.at(x0, y0, 0) == 0.0 || grid.at(x0 + 1, y0, 0) == 0.0 ||
        grid.at(x0, y0 + 1, 0) == 0.0 || grid.at(x0 + 1, y0 + 1, 0) == 0.0)
      throw InvalidCorner("sample_bilinear: invalid corner cell");
  }

  SampleResult out;
  out.value.resize(grid.c);
  out.jac.resize(grid.c, 2);
  for (int ch = 0; ch < grid.c; ++ch) {
    const double c00 = grid.at(x0, y0, ch);
    const double c10 = grid.at(x0 + 1, y0, ch);
    const double c01 = grid.at(x0, y0 + 1, ch);
    const double c11 = grid.at(x0 + 1, y0 + 1, ch);
    out.value(ch) = (1.0 - fu) * (1.0 - fv) * c00 + fu * (1.0 - fv) * c10 +
                    (1.0 - fu) * fv * c01 + fu * fv * c11;
    out.jac(ch, 0) = (1.0 - fv) * (c10 - c00) + fv * (c11 - c01);
    out.jac(ch, 1) = (1.0 - fu) * (c01 - c00) + fu * (c11 - c10);
  }
  return out;
}

namespace {

// Chains the projection and grid mapping for node i at its current
// translation: returns grid coords of the warped anchor plus the 2x3
// Jacobian of those coords w.r.t. the translation. False when the node
// cannot produce a row (no depth, behind camera).
bool warp_to_grid(const DeformGraph& g, int i, double depth,
                  const Intrinsics& k_src, const Intrinsics& k_tgt,
                  const GridMap& map, Eigen::Vector2d& uv,
                  Eigen::Matrix<double, 2, 3>& duv_dt, Eigen::Vector3d& moved) {
  if (!(depth > 0.0)) return false;
  const Eigen::Vector3d rest = back_project(g.node_pixel[size_t(i)], depth, k_tgt);
  moved = rest + g.trans[size_t(i)];
  if (!(moved.z() > 0.0)) return false;
  const Eigen::Vector2d px = project(moved, k_src);
  uv = map.to_grid(px);
  duv_dt = project_jacobian(moved, k_src);
  duv_dt.row(0) /= map.step.x();
  duv_dt.row(1) /= map.step.y();
  return true;
}

}  // namespace

ResidualBlock feature_residuals(const DeformGraph& g, const FeatureMap& f_src,
                                const FeatureMap& f_tgt, const Grid<double>& d_tgt,
                                const Intrinsics& k_src, const Intrinsics& k_tgt,
                                double lambda_f) {
  if (f_src.w() != g.w || f_src.h() != g.h || f_tgt.w() != g.w ||
      f_tgt.h() != g.h || d_tgt.w != g.w || d_tgt.h != g.h)
    throw ResolutionMismatch("feature_residuals: maps must match graph resolution");
  if (f_src.channels() != f_tgt.channels())
    throw ResolutionMismatch("feature_residuals: channel counts differ");

  const double s = std::sqrt(lambda_f);
  const GridMap map = GridMap::of_graph(g);
  ResidualBlock block{EnergyTerm::Feature, {}};
  if (lambda_f == 0.0) return block;

  for (int i = 0; i < g.num_nodes(); ++i) {
    if (!g.valid(i)) continue;
    Eigen::Vector2d uv;
    Eigen::Matrix<double, 2, 3> duv_dt;
    Eigen::Vector3d moved;
    if (!warp_to_grid(g, i, d_tgt.data[size_t(i)], k_src, k_tgt, map, uv, duv_dt,
                      moved))
      continue;
    SampleResult sampled;
    try {
      sampled = sample_bilinear(f_src.grid, uv);
    } catch (const OutOfBounds&) {
      continue;  // row dropped, not zeroed
    }
    const int base = 6 * i + 3;
    for (int ch = 0; ch < f_src.channels(); ++ch) {
      ResidualRow row;
      row.node = i;
      row.r = s * (sampled.value(ch) - f_tgt.at(i % g.w, i / g.w, ch));
      const Eigen::RowVector3d jt = s * (sampled.jac.row(ch) * duv_dt);
      row.jac = {{base, jt(0)}, {base + 1, jt(1)}, {base + 2, jt(2)}};
      block.rows.push_back(std::move(row));
    }
  }
  return block;
}

ResidualBlock geometric_residuals(const DeformGraph& g, const Grid<double>& d_src,
                                  const GridMap& src_map, const Grid<double>& d_tgt,
                                  const Intrinsics& k_src, const Intrinsics& k_tgt,
                                  double lambda_g) {
  if (d_tgt.w != g.w || d_tgt.h != g.h)
    throw ResolutionMismatch("geometric_residuals: d_tgt must match graph resolution");

  const double s = std::sqrt(lambda_g);
  ResidualBlock block{EnergyTerm::Geometric, {}};
  if (lambda_g == 0.0) return block;

  for (int i = 0; i < g.num_nodes(); ++i) {
    if (!g.valid(i)) continue;
    Eigen::Vector2d uv;
    Eigen::Matrix<double, 2, 3> duv_dt;
    Eigen::Vector3d moved;
    if (!warp_to_grid(g, i, d_tgt.data[size_t(i)], k_src, k_tgt, src_map, uv,
                      duv_dt, moved))
      continue;
    SampleResult sampled;
    try {
      sampled = sample_bilinear(d_src, uv, /*zero_is_invalid=*/true);
    } catch (const OutOfBounds&) {
      continue;
    } catch (const InvalidCorner&) {
      continue;
    }
    ResidualRow row;
    row.node = i;
    row.r = s * (sampled.value(0) - moved.z());
    // Two coupled paths: the resampled source depth through the warp, and
    // the moved point's own z.
    Eigen::RowVector3d jt = s * (sampled.jac.row(0) * duv_dt);
    jt(2) -= s;
    const int base = 6 * i + 3;
    row.jac = {{base, jt(0)}, {base + 1, jt(1)}, {base + 2, jt(2)}};
    block.rows.push_back(std::move(row));
  }
  return block;
}

ResidualBlock arap_residuals(const DeformGraph& g, double lambda_r) {
  const double s = std::sqrt(lambda_r);
  ResidualBlock block{EnergyTerm::Arap, {}};
  if (lambda_r == 0.0) return block;

  for (int gy = 0; gy < g.h; ++gy) {
    for (int gx = 0; gx < g.w; ++gx) {
      const int i = g.node_index(gx, gy);
      for (int k = 0; k < 8; ++k) {
        if (!g.edge_mask[size_t(i)][size_t(k)]) continue;
        const int j = g.node_index(gx + kNeighborDx[size_t(k)],
                                   gy + kNeighborDy[size_t(k)]);
        const Eigen::Vector3d d = g.node_pos[size_t(j)] - g.node_pos[size_t(i)];
        const Eigen::Vector3d rd = g.rot[size_t(i)] * d;
        const Eigen::Vector3d res =
            s * (rd - d - (g.trans[size_t(j)] - g.trans[size_t(i)]));
        const Eigen::Matrix3d domega = -s * hat(rd);
        for (int c = 0; c < 3; ++c) {
          ResidualRow row;
          row.node = i;
          row.r = res(c);
          row.jac = {{6 * i + 0, domega(c, 0)},
                     {6 * i + 1, domega(c, 1)},
                     {6 * i + 2, domega(c, 2)},
                     {6 * i + 3 + c, s},
                     {6 * j + 3 + c, -s}};
          block.rows.push_back(std::move(row));
        }
      }
    }
  }
  return block;
}

double total_energy(const std::vector<ResidualBlock>& blocks) {
  double e = 0.0;
  for (const auto& b : blocks)
    for (const auto& row : b.rows) e += row.r * row.r;
  return e;
}

std::pair<BlockSparseMatrix, Eigen::VectorXd> assemble_system(
    const std::vector<ResidualBlock>& blocks, int state_dim) {
  if (state_dim <= 0 || state_dim % BlockSparseMatrix::kBlockDim != 0)
    throw DimensionMismatch("assemble_system: state_dim must be a multiple of 6");
  const int nblocks = state_dim / BlockSparseMatrix::kBlockDim;

  Eigen::VectorXd b = Eigen::VectorXd::Zero(state_dim);
  std::vector<bool> touched(size_t(state_dim), false);
  std::map<std::pair<int, int>, Mat6> lower;

  auto lower_block = [&](int bi, int bj) -> Mat6& {
    auto [it, inserted] = lower.try_emplace({bi, bj}, Mat6::Zero());
    return it->second;
  };

  for (const auto& blk : blocks) {
    for (const auto& row : blk.rows) {
      for (const auto& e1 : row.jac) {
        if (e1.slot < 0 || e1.slot >= state_dim)
          throw DimensionMismatch("assemble_system: slot out of range");
        if (e1.value != 0.0) touched[size_t(e1.slot)] = true;
        b(e1.slot) -= e1.value * row.r;
        const int bi = e1.slot / 6;
        for (const auto& e2 : row.jac) {
          const int bj = e2.slot / 6;
          if (bi < bj) continue;  // mirrored from the lower triangle
          lower_block(bi, bj)(e1.slot % 6, e2.slot % 6) += e1.value * e2.value;
        }
      }
    }
  }

  // Freeze slots no residual references: unit diagonal, zero right-hand side.
  for (int s = 0; s < state_dim; ++s)
    if (!touched[size_t(s)]) lower_block(s / 6, s / 6)(s % 6, s % 6) = 1.0;

  return {BlockSparseMatrix::from_lower(nblocks, lower), std::move(b)};
}

}  // namespace warpgraph
