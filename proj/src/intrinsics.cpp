#include "warpgraph/intrinsics.hpp"

#include <fstream>

#include <json.hpp>

#include "warpgraph/errors.hpp"

namespace warpgraph {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw FormatError("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0)
    throw FormatError("intrinsics: image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw FormatError("intrinsics: principal point outside the image");
  if (!(depth_scale > 0.0))
    throw FormatError("intrinsics: depth_scale must be positive");
}

Intrinsics load_intrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open intrinsics file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad intrinsics JSON in " + path + ": " + e.what());
  }
  Intrinsics k;
  try {
    k.fx = j.at("fx").get<double>();
    k.fy = j.at("fy").get<double>();
    k.cx = j.at("cx").get<double>();
    k.cy = j.at("cy").get<double>();
    k.width = j.at("width").get<int>();
    k.height = j.at("height").get<int>();
    k.depth_scale = j.at("depth_scale").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("missing intrinsics field in " + path + ": " + e.what());
  }
  k.validate();
  return k;
}

void save_intrinsics(const Intrinsics& k, const std::string& path) {
  k.validate();
  nlohmann::json j{{"fx", k.fx},       {"fy", k.fy},
                   {"cx", k.cx},       {"cy", k.cy},
                   {"width", k.width}, {"height", k.height},
                   {"depth_scale", k.depth_scale}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write intrinsics file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace warpgraph
