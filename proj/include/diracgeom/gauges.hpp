#pragma once

// Special unitary fields used to probe gauge covariance.

#include <cstdint>

#include "diracgeom/operator_algebra.hpp"

namespace diracgeom::gauges {

/// diag(e^{i phi}, e^{-i phi})
Eigen::Matrix2cd diagonal_phase(double phi);

/// Constant R.
GaugeField constant(const PeriodicChart& chart, const Eigen::Matrix2cd& r);

/// R(x) = diag(e^{i k x3 / 2}, e^{-i k x3 / 2}); periodic only for even k.
GaugeField twist(const PeriodicChart& chart, int k3);

/// Uniformly random constant element of SU(2).
Eigen::Matrix2cd random_su2(std::uint64_t seed);

/// Q0 D(m1.x) Q1 D(m2.x) Q2 with random constant Q_i and integer vectors m_i
/// with entries in {-1, 0, 1}; band-limited with modes |m| <= 2.
GaugeField random_smooth(const PeriodicChart& chart, std::uint64_t seed);

}  // namespace diracgeom::gauges
