// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qpmax {

using cplx = std::complex<double>;
using Vec2d = Eigen::Vector2d;
using Vec2i = Eigen::Vector2i;
using Vec3d = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
// Unit cell is (0,2pi)^2, so every cell integral carries this area factor.
inline constexpr double cell_area = 4.0 * pi * pi;
inline constexpr cplx iu{0.0, 1.0};

// Plain bilinear cross product. Eigen's cross() conjugates complex results,
// which is never what the quasi-periodic symbol algebra wants.
inline Vec3c cross3(const Vec3c& a, const Vec3c& b) {
  return Vec3c(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
               a.x() * b.y() - a.y() * b.x());
}

} // namespace qpmax
