#pragma once

#include <Eigen/Dense>

#include <array>

namespace diracgeom {

/// The three standard Pauli matrices s^1, s^2, s^3 (s_j = s^j).
struct PauliBasis {
  static const std::array<Eigen::Matrix2cd, 3>& matrices();
  static const Eigen::Matrix2cd& s(int j) { return matrices()[j]; }

  /// s^j c_j
  static Eigen::Matrix2cd combine(const Eigen::Vector3d& c);
  /// c_j = tr(s_j m)/2, the real coordinates of a trace-free Hermitian m.
  static Eigen::Vector3d decompose(const Eigen::Matrix2cd& m);
};

/// The metric spinor [[0,-1],[1,0]].
const Eigen::Matrix2cd& metric_spinor();

}  // namespace diracgeom
