#pragma once

#include <string>

namespace warpgraph {

// Pinhole camera model. Continuous pixel coordinates put integer values
// at pixel centers; depth_scale converts stored 16-bit depth units to meters.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  double depth_scale = 0.001;

  // Throws FormatError when a field violates its range.
  void validate() const;
};

Intrinsics load_intrinsics(const std::string& path);
void save_intrinsics(const Intrinsics& k, const std::string& path);

}  // namespace warpgraph
