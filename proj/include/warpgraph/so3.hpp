#pragma once

#include <Eigen/Core>

namespace warpgraph {

// [v]x such that hat(v) * u = v cross u.
Eigen::Matrix3d hat(const Eigen::Vector3d& v);

// Rodrigues exponential map, stable for small angles.
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega);

// ||R^T R - I||_inf.
double orthonormality_drift(const Eigen::Matrix3d& r);

// Nearest rotation in Frobenius norm (SVD polar factor, det-corrected).
Eigen::Matrix3d reorthonormalize(const Eigen::Matrix3d& r);

}  // namespace warpgraph
