#include "warpgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "warpgraph/camera.hpp"
#include "warpgraph/errors.hpp"
#include "warpgraph/so3.hpp"

namespace warpgraph {

void GraphConfig::validate() const {
  if (w < 2 || h < 2) throw GridTooLarge("graph grid must be at least 2x2");
  if (!(max_depth > 0.0) || !(discontinuity_thresh > 0.0) ||
      !(edge_len_thresh > 0.0))
    throw FormatError("graph thresholds must be positive");
}

Grid<double> DeformGraph::node_depth_grid() const {
  Grid<double> d(w, h, 1, 0.0);
  for (int i = 0; i < num_nodes(); ++i)
    if (valid(i)) d.data[size_t(i)] = node_pos[size_t(i)].z();
  return d;
}

int DeformGraph::valid_node_count() const {
  int n = 0;
  for (auto v : node_mask) n += (v != 0);
  return n;
}

bool DeformGraph::edge_mask_symmetric() const {
  for (int gy = 0; gy < h; ++gy) {
    for (int gx = 0; gx < w; ++gx) {
      const int i = node_index(gx, gy);
      for (int k = 0; k < 8; ++k) {
        if (!edge_mask[size_t(i)][size_t(k)]) continue;
        const int nx = gx + kNeighborDx[size_t(k)];
        const int ny = gy + kNeighborDy[size_t(k)];
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) return false;
        const int j = node_index(nx, ny);
        if (!edge_mask[size_t(j)][size_t(reverse_edge_slot(k))]) return false;
      }
    }
  }
  return true;
}

DeformGraph build_graph(const Frame& target, const GraphConfig& cfg,
                        const Grid<std::uint8_t>* foreground_mask) {
  cfg.validate();
  target.validate();
  const int W = target.width();
  const int H = target.height();
  if (cfg.w > W || cfg.h > H)
    throw GridTooLarge("graph grid exceeds the target image size");
  if (foreground_mask && (foreground_mask->w != W || foreground_mask->h != H))
    throw ResolutionMismatch("foreground mask does not match the target image");

  DeformGraph g;
  g.w = cfg.w;
  g.h = cfg.h;
  g.step = {double(W) / cfg.w, double(H) / cfg.h};
  g.origin = {0.5 * g.step.x() - 0.5, 0.5 * g.step.y() - 0.5};

  const int n = g.num_nodes();
  g.node_pixel.resize(size_t(n));
  g.node_pos.assign(size_t(n), Eigen::Vector3d::Zero());
  g.rot.assign(size_t(n), Eigen::Matrix3d::Identity());
  g.trans.assign(size_t(n), Eigen::Vector3d::Zero());
  g.node_mask.assign(size_t(n), 0);
  g.edge_mask.assign(size_t(n), {0, 0, 0, 0, 0, 0, 0, 0});

  for (int gy = 0; gy < g.h; ++gy) {
    for (int gx = 0; gx < g.w; ++gx) {
      const int i = g.node_index(gx, gy);
      const Eigen::Vector2d anchor = g.origin.array() +
                                     g.step.array() * Eigen::Array2d(gx, gy);
      g.node_pixel[size_t(i)] = anchor;

      const int px = int(std::lround(anchor.x()));
      const int py = int(std::lround(anchor.y()));
      const double d = target.depth.at(px, py);

      if (foreground_mask && foreground_mask->at(px, py) == 0) continue;
      if (!(d > 0.0) || d > cfg.max_depth) continue;

      // Occlusion-boundary test: any depth jump beyond the threshold inside
      // the 3x3 window invalidates the node; holes count as jumps.
      bool discontinuous = false;
      for (int dy = -1; dy <= 1 && !discontinuous; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int qx = px + dx;
          const int qy = py + dy;
          if (!target.depth.inside(qx, qy)) continue;
          if (std::abs(target.depth.at(qx, qy) - d) > cfg.discontinuity_thresh) {
            discontinuous = true;
            break;
          }
        }
      }
      if (discontinuous) continue;

      g.node_mask[size_t(i)] = 1;
      g.node_pos[size_t(i)] = back_project(anchor, d, target.intrinsics);
    }
  }

  for (int gy = 0; gy < g.h; ++gy) {
    for (int gx = 0; gx < g.w; ++gx) {
      const int i = g.node_index(gx, gy);
      if (!g.valid(i)) continue;
      for (int k = 0; k < 8; ++k) {
        const int nx = gx + kNeighborDx[size_t(k)];
        const int ny = gy + kNeighborDy[size_t(k)];
        if (nx < 0 || nx >= g.w || ny < 0 || ny >= g.h) continue;
        const int j = g.node_index(nx, ny);
        if (!g.valid(j)) continue;
        const double len = (g.node_pos[size_t(i)] - g.node_pos[size_t(j)]).norm();
        if (len > cfg.edge_len_thresh) continue;
        g.edge_mask[size_t(i)][size_t(k)] = 1;
      }
    }
  }
  return g;
}

Eigen::VectorXd pack_state(const DeformGraph& g) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(g.state_dim());
  for (int i = 0; i < g.num_nodes(); ++i)
    x.segment<3>(6 * i + 3) = g.trans[size_t(i)];
  return x;
}

void apply_increment(DeformGraph& g, const Eigen::VectorXd& delta) {
  if (delta.size() != g.state_dim())
    throw DimensionMismatch("apply_increment: state vector has wrong length");
  if (!delta.allFinite())
    throw NonFinite("apply_increment: non-finite increment");
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (!g.valid(i)) continue;
    const Eigen::Vector3d omega = delta.segment<3>(6 * i);
    const Eigen::Vector3d tau = delta.segment<3>(6 * i + 3);
    Eigen::Matrix3d r = so3_exp(omega) * g.rot[size_t(i)];
    if (orthonormality_drift(r) > 1e-12) r = reorthonormalize(r);
    g.rot[size_t(i)] = r;
    g.trans[size_t(i)] += tau;
  }
}

void save_graph_json(const DeformGraph& g, const std::string& path) {
  nlohmann::json j;
  j["w"] = g.w;
  j["h"] = g.h;
  j["origin"] = {g.origin.x(), g.origin.y()};
  j["step"] = {g.step.x(), g.step.y()};

  auto& rot = j["rot"] = nlohmann::json::array();
  auto& trans = j["trans"] = nlohmann::json::array();
  auto& node_mask = j["node_mask"] = nlohmann::json::array();
  auto& edge_mask = j["edge_mask"] = nlohmann::json::array();
  auto& node_pixel = j["node_pixel"] = nlohmann::json::array();
  auto& node_pos = j["node_pos"] = nlohmann::json::array();
  for (int i = 0; i < g.num_nodes(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) r.push_back(g.rot[size_t(i)](row, col));
    rot.push_back(std::move(r));
    trans.push_back({g.trans[size_t(i)].x(), g.trans[size_t(i)].y(),
                     g.trans[size_t(i)].z()});
    node_mask.push_back(int(g.node_mask[size_t(i)]));
    nlohmann::json e = nlohmann::json::array();
    for (int k = 0; k < 8; ++k) e.push_back(int(g.edge_mask[size_t(i)][size_t(k)]));
    edge_mask.push_back(std::move(e));
    node_pixel.push_back({g.node_pixel[size_t(i)].x(), g.node_pixel[size_t(i)].y()});
    node_pos.push_back({g.node_pos[size_t(i)].x(), g.node_pos[size_t(i)].y(),
                        g.node_pos[size_t(i)].z()});
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph JSON: " + path);
  out << j.dump(2) << "\n";
}

DeformGraph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph JSON: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad graph JSON in " + path + ": " + e.what());
  }

  DeformGraph g;
  try {
    g.w = j.at("w").get<int>();
    g.h = j.at("h").get<int>();
    g.origin = {j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()};
    g.step = {j.at("step")[0].get<double>(), j.at("step")[1].get<double>()};
    const int n = g.num_nodes();
    if (n <= 0) throw FormatError(path + ": empty graph");
    const auto& rot = j.at("rot");
    const auto& trans = j.at("trans");
    const auto& node_mask = j.at("node_mask");
    const auto& edge_mask = j.at("edge_mask");
    const auto& node_pixel = j.at("node_pixel");
    const auto& node_pos = j.at("node_pos");
    if (int(rot.size()) != n || int(trans.size()) != n ||
        int(node_mask.size()) != n || int(edge_mask.size()) != n ||
        int(node_pixel.size()) != n || int(node_pos.size()) != n)
      throw FormatError(path + ": array length does not match w*h");

    g.node_pixel.resize(size_t(n));
    g.node_pos.resize(size_t(n));
    g.rot.resize(size_t(n));
    g.trans.resize(size_t(n));
    g.node_mask.resize(size_t(n));
    g.edge_mask.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
      for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col)
          g.rot[size_t(i)](row, col) = rot[i][3 * row + col].get<double>();
      for (int kk = 0; kk < 3; ++kk) {
        g.trans[size_t(i)](kk) = trans[i][kk].get<double>();
        g.node_pos[size_t(i)](kk) = node_pos[i][kk].get<double>();
      }
      g.node_pixel[size_t(i)] = {node_pixel[i][0].get<double>(),
                                 node_pixel[i][1].get<double>()};
      g.node_mask[size_t(i)] = std::uint8_t(node_mask[i].get<int>() != 0);
      for (int k = 0; k < 8; ++k)
        g.edge_mask[size_t(i)][size_t(k)] = std::uint8_t(edge_mask[i][k].get<int>() != 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("graph JSON field error in " + path + ": " + e.what());
  }
  return g;
}

}  // namespace warpgraph
