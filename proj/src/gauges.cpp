#include "diracgeom/gauges.hpp"

#include <random>

namespace diracgeom::gauges {

namespace {

Eigen::Matrix2cd from_quaternion(const Eigen::Vector4d& q) {
  const cplx i(0.0, 1.0);
  return q[0] * Eigen::Matrix2cd::Identity() - i * (q[1] * PauliBasis::s(0) + q[2] * PauliBasis::s(1) + q[3] * PauliBasis::s(2));
}

Eigen::Matrix2cd random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d q(n(rng), n(rng), n(rng), n(rng));
  return from_quaternion(q.normalized());
}

}  // namespace

Eigen::Matrix2cd diagonal_phase(double phi) {
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = std::exp(cplx(0.0, phi));
  d(1, 1) = std::exp(cplx(0.0, -phi));
  return d;
}

GaugeField constant(const PeriodicChart& chart, const Eigen::Matrix2cd& r) { return GaugeField(MatrixField(chart, r)); }

GaugeField twist(const PeriodicChart& chart, int k3) {
  return GaugeField(MatrixField::sample(chart, [k3](const Eigen::Vector3d& x) { return diagonal_phase(0.5 * k3 * x[2]); }));
}

Eigen::Matrix2cd random_su2(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_su2(rng);
}

GaugeField random_smooth(const PeriodicChart& chart, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> unit(-1, 1);
  const Eigen::Matrix2cd q0 = random_su2(rng), q1 = random_su2(rng), q2 = random_su2(rng);
  Eigen::Vector3d m1, m2;
  do {
    m1 = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    m2 = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
  } while (m1.isZero() && m2.isZero());
  return GaugeField(MatrixField::sample(chart, [&](const Eigen::Vector3d& x) {
    return Eigen::Matrix2cd(q0 * diagonal_phase(m1.dot(x)) * q1 * diagonal_phase(m2.dot(x)) * q2);
  }));
}

}  // namespace diracgeom::gauges
