#pragma once

#include <cstdint>
#include <string>

#include "warpgraph/frame.hpp"

namespace warpgraph {

// 8-bit RGB PNG.
ColorImage load_color_png(const std::string& path);
void save_color_png(const ColorImage& img, const std::string& path);

// 16-bit grayscale PNG holding depth in units of depth_scale meters.
Grid<std::uint16_t> load_depth_png_raw(const std::string& path);
void save_depth_png_raw(const Grid<std::uint16_t>& img, const std::string& path);

DepthImage load_depth_png(const std::string& path, double depth_scale);
void save_depth_png(const DepthImage& depth, double depth_scale,
                    const std::string& path);

// Assembles a frame from its three on-disk artifacts. Depth is converted
// to meters via the intrinsics' depth_scale. Throws IoError / FormatError.
Frame load_frame(const std::string& color_path, const std::string& depth_path,
                 const std::string& intrinsics_path, const std::string& id = "");

// "NRFM": u32 w, u32 h, u32 c (little-endian), then w*h*c float32,
// row-major, channel fastest. Round-trips bit-exactly.
FeatureMap load_feature_map(const std::string& path);
void save_feature_map(const FeatureMap& fm, const std::string& path);

}  // namespace warpgraph
