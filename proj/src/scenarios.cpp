#include "diracgeom/scenarios.hpp"

#include <cmath>

#include "diracgeom/frames.hpp"

namespace diracgeom {

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"standard-torus",       "inverted-torus", "twisted-torus",
                                                 "dirac-plus-scalar",    "dirac-plus-traceless",
                                                 "random-band-limited", "sphere"};
  return names;
}

std::optional<SpectrumTable> Scenario::exact_spectrum(double lambda_max) const {
  if (sphere) return sphere_exact_spectrum(lambda_max);
  if (!spin) return std::nullopt;
  const double q = scalar_shift.value_or(0.0);
  SpectrumTable t = torus_exact_spectrum(*spin, lambda_max + std::abs(q));
  if (q == 0.0) return t;
  SpectrumTable out;
  out.provenance = t.provenance;
  out.coverage_min = -lambda_max;
  out.coverage_max = lambda_max;
  for (const auto& e : t.entries)
    if (std::abs(e.value + q) <= lambda_max) out.entries.push_back({e.value + q, e.multiplicity});
  return out;
}

Scenario make_scenario(const std::string& spec, int grid, std::uint64_t seed) {
  Scenario s;
  const auto colon = spec.find(':');
  s.name = spec.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string p = spec.substr(colon + 1);
    std::size_t used = 0;
    try {
      s.parameter = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw InputError("scenario parameter '" + p + "' is not a number");
  }
  if (s.name == "sphere") {
    s.sphere = true;
    return s;
  }
  const PeriodicChart chart(grid);
  const SpinStructure trivial{Eigen::Vector3d::Zero()};

  auto integer_parameter = [&](double fallback) {
    const double v = s.parameter.value_or(fallback);
    if (v != std::floor(v)) throw InputError(s.name + " takes an integer parameter");
    return static_cast<long long>(v);
  };
  auto dirac = [](const FrameField& f) { return dirac_operator(f, metric_from_frame(f)); };

  if (s.name == "standard-torus" || s.name == "inverted-torus") {
    s.frame = s.name == "standard-torus" ? frames::constant(chart) : frames::inverted(frames::constant(chart));
    s.spin = trivial;
  } else if (s.name == "twisted-torus") {
    const long long k = integer_parameter(1);
    s.parameter = static_cast<double>(k);
    s.frame = frames::twisted(chart, static_cast<int>(k));
    s.spin = SpinStructure(Eigen::Vector3d(0, 0, (k % 2 == 0) ? 0.0 : 0.5));
  } else if (s.name == "dirac-plus-scalar" || s.name == "dirac-plus-traceless") {
    s.frame = frames::constant(chart);
  } else if (s.name == "random-band-limited") {
    const long long sd = integer_parameter(static_cast<double>(seed));
    if (sd < 0) throw InputError("seed must be non-negative");
    s.parameter = static_cast<double>(sd);
    s.frame = frames::random_band_limited(chart, static_cast<std::uint64_t>(sd));
  } else {
    throw InputError("unknown scenario '" + s.name + "'");
  }

  s.op = dirac(*s.frame);
  if (s.name == "dirac-plus-scalar") {
    const double q = s.parameter.value_or(0.3);
    s.parameter = q;
    s.op = s.op->plus_potential(q * Eigen::Matrix2cd::Identity());
    s.scalar_shift = q;
    s.spin = trivial;
  } else if (s.name == "dirac-plus-traceless") {
    const double eps = s.parameter.value_or(0.1);
    s.parameter = eps;
    s.op = s.op->plus_potential(eps * PauliBasis::s(2));
  }
  return s;
}

}  // namespace diracgeom
