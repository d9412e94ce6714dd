#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "warpgraph/errors.hpp"
#include "warpgraph/intrinsics.hpp"

namespace warpgraph {

// Dense row-major grid with a fixed channel count. Index order is
// (y, x, channel), channel fastest.
template <typename T>
struct Grid {
  int w = 0;
  int h = 0;
  int c = 1;
  std::vector<T> data;

  Grid() = default;
  Grid(int w_, int h_, int c_ = 1, T fill = T{})
      : w(w_), h(h_), c(c_), data(static_cast<size_t>(w_) * h_ * c_, fill) {}

  T& at(int x, int y, int ch = 0) {
    return data[(static_cast<size_t>(y) * w + x) * c + ch];
  }
  const T& at(int x, int y, int ch = 0) const {
    return data[(static_cast<size_t>(y) * w + x) * c + ch];
  }
  bool inside(int x, int y) const { return x >= 0 && x < w && y >= 0 && y < h; }
  size_t size() const { return data.size(); }
};

using ColorImage = Grid<std::uint8_t>;  // c = 3, RGB
using DepthImage = Grid<double>;        // c = 1, meters, 0 = invalid

// Real-valued w x h x c grid at deformation-graph resolution.
struct FeatureMap {
  Grid<double> grid;

  FeatureMap() = default;
  FeatureMap(int w, int h, int c) : grid(w, h, c) {}

  int w() const { return grid.w; }
  int h() const { return grid.h; }
  int channels() const { return grid.c; }
  double& at(int x, int y, int ch) { return grid.at(x, y, ch); }
  double at(int x, int y, int ch) const { return grid.at(x, y, ch); }
};

// Calibrated RGB-D frame. Depth lives in meters (0 marks invalid pixels);
// color and depth share the intrinsics' dimensions.
struct Frame {
  ColorImage color;
  DepthImage depth;
  Intrinsics intrinsics;
  std::string id;

  int width() const { return intrinsics.width; }
  int height() const { return intrinsics.height; }

  // Throws FormatError if image dimensions disagree with the intrinsics.
  void validate() const;
};

// Rec.601 luma in [0, 1].
double luma(const ColorImage& img, int x, int y);

}  // namespace warpgraph
