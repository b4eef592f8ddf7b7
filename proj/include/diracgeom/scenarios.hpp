#pragma once

// Builtin worked examples, addressed as "name" or "name:parameter":
//   standard-torus, inverted-torus, twisted-torus:k3, dirac-plus-scalar:q,
//   dirac-plus-traceless:eps (adds eps*s^3), random-band-limited:seed, sphere.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diracgeom/operator_algebra.hpp"
#include "diracgeom/spectrum_lab.hpp"

namespace diracgeom {

struct Scenario {
  std::string name;
  std::optional<double> parameter;
  std::optional<FrameField> frame;        // frame of the underlying Dirac operator
  std::optional<FirstOrderOperator> op;   // absent for the sphere (closed form only)
  std::optional<double> scalar_shift;     // eigenvalue shift of an exact torus table
  std::optional<SpinStructure> spin;      // set when the torus spectrum is known in closed form
  bool sphere = false;

  /// Closed-form spectrum on [-lambda_max, lambda_max], if one exists for this scenario.
  std::optional<SpectrumTable> exact_spectrum(double lambda_max) const;
};

const std::vector<std::string>& scenario_names();

/// Throws InputError for unknown names or malformed parameters.
Scenario make_scenario(const std::string& spec, int grid, std::uint64_t seed);

}  // namespace diracgeom
