#pragma once

// Frame fields used as worked examples and test beds on the torus.

#include <cstdint>

#include "diracgeom/symbol_geometry.hpp"

namespace diracgeom::frames {

/// e_j^alpha = factor * delta_j^alpha.
FrameField constant(const PeriodicChart& chart, double factor = 1.0);

/// e_1 = (cos k x3, sin k x3, 0), e_2 = (-sin k x3, cos k x3, 0), e_3 = (0, 0, 1).
FrameField twisted(const PeriodicChart& chart, int k3);

/// Linearised microrotation e_j^a = delta_j^a + eps_{jab} w^b with w = (0, 0, eps sin x1).
FrameField microrotation(const PeriodicChart& chart, double eps);

/// A fixed constant frame plus small random trigonometric polynomials with
/// modes |m_i| <= max_mode. Deterministic in the seed.
FrameField random_band_limited(const PeriodicChart& chart, std::uint64_t seed, int max_mode = 2,
                               double amplitude = 0.08);

/// Each frame vector negated.
FrameField inverted(const FrameField& frame);

/// Rotation about the 3-axis by angle theta, as a matrix acting on frame indices.
Eigen::Matrix3d rotation3(double theta);

}  // namespace diracgeom::frames
