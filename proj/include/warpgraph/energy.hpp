#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "warpgraph/block_sparse.hpp"
#include "warpgraph/frame.hpp"
#include "warpgraph/graph.hpp"

namespace warpgraph {

// Energy term weights [lambda_f, lambda_g, lambda_r].
struct Weights {
  double lambda_f = 1.0;
  double lambda_g = 0.5;
  double lambda_r = 40.0;

  void validate() const;
};

// Bilinear sample of a c-channel grid at a continuous grid coordinate,
// plus the analytic c x 2 Jacobian w.r.t. uv. With zero_is_invalid, a zero
// in channel 0 of any of the 4 corner cells throws InvalidCorner (used for
// depth grids where 0 marks holes). Throws OutOfBounds outside
// [0, w-1] x [0, h-1].
struct SampleResult {
  Eigen::VectorXd value;
  Eigen::Matrix<double, Eigen::Dynamic, 2> jac;
};
SampleResult sample_bilinear(const Grid<double>& grid, const Eigen::Vector2d& uv,
                             bool zero_is_invalid = false);

enum class EnergyTerm { Feature, Geometric, Arap };

struct JacEntry {
  int slot;
  double value;
};

// One scalar residual row with its sparse Jacobian. Residual and Jacobian
// are pre-scaled by sqrt(lambda), so the energy is plainly sum r^2.
struct ResidualRow {
  double r = 0.0;
  int node = -1;  // primary node (diagnostics)
  std::vector<JacEntry> jac;
};

struct ResidualBlock {
  EnergyTerm term;
  std::vector<ResidualRow> rows;
};

// Maps full-resolution pixel coordinates onto a sampling grid:
// uv = (pixel - origin) / step. The node lattice uses the graph's own map;
// full-resolution grids use origin (0,0), step (1,1).
struct GridMap {
  Eigen::Vector2d origin{0.0, 0.0};
  Eigen::Vector2d step{1.0, 1.0};

  static GridMap identity() { return {}; }
  static GridMap of_graph(const DeformGraph& g) { return {g.origin, g.step}; }

  Eigen::Vector2d to_grid(const Eigen::Vector2d& px) const {
    return {(px.x() - origin.x()) / step.x(), (px.y() - origin.y()) / step.y()};
  }
};

// Feature-alignment rows: per valid node i and channel, sqrt(lambda_f) *
// (F_src sampled at the warped node coordinate - F_tgt(i)). Feature maps and
// d_tgt live at graph resolution (one feature per node). Rows whose warp
// leaves the grid or hits an invalid corner are dropped entirely.
ResidualBlock feature_residuals(const DeformGraph& g, const FeatureMap& f_src,
                                const FeatureMap& f_tgt, const Grid<double>& d_tgt,
                                const Intrinsics& k_src, const Intrinsics& k_tgt,
                                double lambda_f);

// Projective-depth rows: sqrt(lambda_g) * (sampled source depth at the warped
// coordinate - z of the translated node point). src_map positions d_src in
// pixel space, so the same code serves the graph-resolution term and the
// full-resolution refinement term.
ResidualBlock geometric_residuals(const DeformGraph& g, const Grid<double>& d_src,
                                  const GridMap& src_map, const Grid<double>& d_tgt,
                                  const Intrinsics& k_src, const Intrinsics& k_tgt,
                                  double lambda_g);

// Local-rigidity rows: per valid directed edge (i, j), the 3-vector
// sqrt(lambda_r) * (R_i (p_j - p_i) - ((p_j + t_j) - (p_i + t_i))).
ResidualBlock arap_residuals(const DeformGraph& g, double lambda_r);

// Sum of squared residuals over all blocks.
double total_energy(const std::vector<ResidualBlock>& blocks);

// Normal equations A = J^T J, b = -J^T r (solving A d = b and applying +d
// descends). State slots never referenced by any row are frozen with a unit
// diagonal entry, which covers invalid nodes and keeps A positive definite.
// Accumulation order is fixed (blocks in the given order, rows ascending),
// so assembly is bit-reproducible.
std::pair<BlockSparseMatrix, Eigen::VectorXd> assemble_system(
    const std::vector<ResidualBlock>& blocks, int state_dim);

}  // namespace warpgraph
