#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "warpgraph/frame.hpp"

namespace warpgraph {

// 8-connectivity neighbor order. Index k and 7-k are opposite offsets,
// which is what keeps the edge mask symmetric by construction.
inline constexpr std::array<int, 8> kNeighborDx = {-1, 0, 1, -1, 1, -1, 0, 1};
inline constexpr std::array<int, 8> kNeighborDy = {-1, -1, -1, 0, 0, 1, 1, 1};
inline constexpr int reverse_edge_slot(int k) { return 7 - k; }

struct GraphConfig {
  int w = 16;
  int h = 12;
  double max_depth = 2.0;              // meters; nodes farther away are invalid
  double discontinuity_thresh = 0.1;   // meters; 3x3 depth jump marking occlusion
  double edge_len_thresh = 0.3;        // meters; 3D edge length cutoff

  void validate() const;
};

// Uniform grid of 6-DOF nodes anchored on the target image. Node i keeps a
// rotation R_i (3x3, in SO(3)) and a translation t_i in meters; the rest
// position node_pos comes from the target depth, so the deformed position
// is node_pos + trans.
struct DeformGraph {
  int w = 0;
  int h = 0;

  // Lattice definition: anchor of node (gx, gy) sits at
  // origin + step * (gx, gy) in continuous full-resolution pixel coords.
  Eigen::Vector2d origin{0.0, 0.0};
  Eigen::Vector2d step{1.0, 1.0};

  std::vector<Eigen::Vector2d> node_pixel;
  std::vector<Eigen::Vector3d> node_pos;
  std::vector<Eigen::Matrix3d> rot;
  std::vector<Eigen::Vector3d> trans;
  std::vector<std::uint8_t> node_mask;
  std::vector<std::array<std::uint8_t, 8>> edge_mask;

  int num_nodes() const { return w * h; }
  int state_dim() const { return 6 * w * h; }
  int node_index(int gx, int gy) const { return gy * w + gx; }
  bool valid(int i) const { return node_mask[size_t(i)] != 0; }

  // Full-resolution pixel -> continuous grid coordinate on the node lattice.
  Eigen::Vector2d pixel_to_grid(const Eigen::Vector2d& px) const {
    return {(px.x() - origin.x()) / step.x(), (px.y() - origin.y()) / step.y()};
  }

  // Target depth resampled at the node lattice; 0 where the node is invalid.
  Grid<double> node_depth_grid() const;

  int valid_node_count() const;

  // Every edge_mask[i][k] has a matching edge_mask[j][7-k].
  bool edge_mask_symmetric() const;
};

// Samples a w x h lattice of cell centers on the target image, masks nodes
// that are background / have invalid or too-far depth / sit on a depth
// discontinuity (any pixel in the 3x3 around the anchor jumping by more than
// discontinuity_thresh, holes included), then keeps only edges between valid
// nodes that are shorter than edge_len_thresh in 3D. Rotations start at
// identity and translations at zero.
DeformGraph build_graph(const Frame& target, const GraphConfig& cfg,
                        const Grid<std::uint8_t>* foreground_mask = nullptr);

// State layout: node i owns slots [6i, 6i+6), rotation increment (axis-angle)
// first, then translation. Rotation slots are zero at pack time; translation
// slots carry trans[i].
Eigen::VectorXd pack_state(const DeformGraph& g);

// Retraction: R_i <- exp(hat(omega_i)) * R_i, t_i += tau_i for valid nodes.
// Invalid-node slots are ignored. Rotations are re-orthonormalized when the
// drift exceeds 1e-12.
void apply_increment(DeformGraph& g, const Eigen::VectorXd& delta);

void save_graph_json(const DeformGraph& g, const std::string& path);
DeformGraph load_graph_json(const std::string& path);

}  // namespace warpgraph
