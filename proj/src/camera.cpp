#include "warpgraph/camera.hpp"

#include "warpgraph/errors.hpp"

namespace warpgraph {

Eigen::Vector3d back_project(const Eigen::Vector2d& pixel, double depth,
                             const Intrinsics& k) {
  if (!(depth > 0.0)) throw NonPositiveDepth("back_project: depth <= 0");
  return {(pixel.x() - k.cx) * depth / k.fx, (pixel.y() - k.cy) * depth / k.fy,
          depth};
}

Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& k) {
  if (!(point.z() > 0.0)) throw BehindCamera("project: z <= 0");
  return {k.fx * point.x() / point.z() + k.cx,
          k.fy * point.y() / point.z() + k.cy};
}

Eigen::Matrix<double, 2, 3> project_jacobian(const Eigen::Vector3d& point,
                                             const Intrinsics& k) {
  if (!(point.z() > 0.0)) throw BehindCamera("project_jacobian: z <= 0");
  const double iz = 1.0 / point.z();
  Eigen::Matrix<double, 2, 3> j;
  j << k.fx * iz, 0.0, -k.fx * point.x() * iz * iz,
       0.0, k.fy * iz, -k.fy * point.y() * iz * iz;
  return j;
}

Eigen::Vector2d warp_pixel(const Eigen::Vector2d& pixel, double depth,
                           const Eigen::Vector3d& t, const Intrinsics& k_src,
                           const Intrinsics& k_tgt) {
  return project(back_project(pixel, depth, k_tgt) + t, k_src);
}

}  // namespace warpgraph
