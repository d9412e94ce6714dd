#pragma once

#include <Eigen/Core>

#include "warpgraph/intrinsics.hpp"

namespace warpgraph {

// Lift a continuous pixel coordinate with metric depth to a camera-frame
// 3D point. Throws NonPositiveDepth when depth <= 0.
Eigen::Vector3d back_project(const Eigen::Vector2d& pixel, double depth,
                             const Intrinsics& k);

// Project a camera-frame point to a continuous pixel coordinate.
// Throws BehindCamera when point.z <= 0.
Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& k);

// 2x3 Jacobian of project() w.r.t. the 3D point.
Eigen::Matrix<double, 2, 3> project_jacobian(const Eigen::Vector3d& point,
                                             const Intrinsics& k);

// pixel --back_project(k_tgt)--> +t --project(k_src)--> pixel.
// Throws NonPositiveDepth / BehindCamera as the stages do.
Eigen::Vector2d warp_pixel(const Eigen::Vector2d& pixel, double depth,
                           const Eigen::Vector3d& t, const Intrinsics& k_src,
                           const Intrinsics& k_tgt);

}  // namespace warpgraph
