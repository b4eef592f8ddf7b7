#include "diracgeom/pauli.hpp"

#include <complex>

namespace diracgeom {

const std::array<Eigen::Matrix2cd, 3>& PauliBasis::matrices() {
  static const std::array<Eigen::Matrix2cd, 3> s = [] {
    using c = std::complex<double>;
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << c(0, 0), c(1, 0), c(1, 0), c(0, 0);
    m[1] << c(0, 0), c(0, -1), c(0, 1), c(0, 0);
    m[2] << c(1, 0), c(0, 0), c(0, 0), c(-1, 0);
    return m;
  }();
  return s;
}

Eigen::Matrix2cd PauliBasis::combine(const Eigen::Vector3d& c) {
  const auto& s = matrices();
  return c[0] * s[0] + c[1] * s[1] + c[2] * s[2];
}

Eigen::Vector3d PauliBasis::decompose(const Eigen::Matrix2cd& m) {
  const auto& s = matrices();
  return {0.5 * (s[0] * m).trace().real(), 0.5 * (s[1] * m).trace().real(), 0.5 * (s[2] * m).trace().real()};
}

const Eigen::Matrix2cd& metric_spinor() {
  static const Eigen::Matrix2cd eps = [] {
    Eigen::Matrix2cd m;
    m << 0.0, -1.0, 1.0, 0.0;
    return m;
  }();
  return eps;
}

}  // namespace diracgeom
