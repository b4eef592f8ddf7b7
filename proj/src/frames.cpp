#include "diracgeom/frames.hpp"

#include <random>

namespace diracgeom::frames {

FrameField constant(const PeriodicChart& chart, double factor) {
  return FrameField{GridField<Eigen::Matrix3d>(chart, Eigen::Matrix3d(factor * Eigen::Matrix3d::Identity()))};
}

Eigen::Matrix3d rotation3(double theta) {
  Eigen::Matrix3d r;
  r << std::cos(theta), std::sin(theta), 0.0, -std::sin(theta), std::cos(theta), 0.0, 0.0, 0.0, 1.0;
  return r;
}

FrameField twisted(const PeriodicChart& chart, int k3) {
  return FrameField{GridField<Eigen::Matrix3d>::sample(chart, [k3](const Eigen::Vector3d& x) { return rotation3(k3 * x[2]); })};
}

FrameField microrotation(const PeriodicChart& chart, double eps) {
  return FrameField{GridField<Eigen::Matrix3d>::sample(chart, [eps](const Eigen::Vector3d& x) {
    const Eigen::Vector3d w(0.0, 0.0, eps * std::sin(x[0]));
    Eigen::Matrix3d cross;
    cross << 0.0, w[2], -w[1], -w[2], 0.0, w[0], w[1], -w[0], 0.0;
    return Eigen::Matrix3d(Eigen::Matrix3d::Identity() + cross);
  })};
}

FrameField random_band_limited(const PeriodicChart& chart, std::uint64_t seed, int max_mode, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);

  // Well-conditioned, non-symmetric base frame.
  Eigen::Matrix3d base = Eigen::Matrix3d::Identity();
  for (int j = 0; j < 3; ++j)
    for (int a = 0; a < 3; ++a) base(j, a) += 0.2 * unit(rng);

  struct Term {
    Eigen::Vector3d m;
    Eigen::Matrix3d cos_coef, sin_coef;
  };
  std::vector<Term> terms(4);
  for (auto& t : terms) {
    t.m = Eigen::Vector3d(mode(rng), mode(rng), mode(rng));
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a) {
        t.cos_coef(j, a) = amplitude * unit(rng);
        t.sin_coef(j, a) = amplitude * unit(rng);
      }
  }
  return FrameField{GridField<Eigen::Matrix3d>::sample(chart, [&](const Eigen::Vector3d& x) {
    Eigen::Matrix3d e = base;
    for (const auto& t : terms) {
      const double ph = t.m.dot(x);
      e += std::cos(ph) * t.cos_coef + std::sin(ph) * t.sin_coef;
    }
    return e;
  })};
}

FrameField inverted(const FrameField& frame) {
  return FrameField{frame.e.map([](const Eigen::Matrix3d& e) -> Eigen::Matrix3d { return -e; })};
}

}  // namespace diracgeom::frames
