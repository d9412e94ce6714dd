#include "warpgraph/frame.hpp"

namespace warpgraph {

void Frame::validate() const {
  intrinsics.validate();
  if (color.w != intrinsics.width || color.h != intrinsics.height || color.c != 3)
    throw FormatError("frame '" + id + "': color image does not match intrinsics");
  if (depth.w != intrinsics.width || depth.h != intrinsics.height || depth.c != 1)
    throw FormatError("frame '" + id + "': depth map does not match intrinsics");
  for (double d : depth.data)
    if (d < 0.0) throw FormatError("frame '" + id + "': negative depth");
}

double luma(const ColorImage& img, int x, int y) {
  return (0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
          0.114 * img.at(x, y, 2)) /
         255.0;
}

}  // namespace warpgraph
