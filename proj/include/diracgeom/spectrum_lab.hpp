#pragma once

// Exact and Galerkin spectra, counting functions and their asymptotics.

#include <optional>
#include <string>
#include <vector>

#include "diracgeom/operator_algebra.hpp"

namespace diracgeom {

/// Half-integer lattice shift labelling one of the eight torus spin structures.
class SpinStructure {
 public:
  SpinStructure() = default;
  /// Entries must be 0 or 1/2.
  explicit SpinStructure(const Eigen::Vector3d& shift);

  const Eigen::Vector3d& shift() const { return shift_; }
  /// 2 * shift as integers.
  Eigen::Vector3i doubled() const { return (2.0 * shift_).array().round().cast<int>(); }

  static std::vector<SpinStructure> all();

 private:
  Eigen::Vector3d shift_ = Eigen::Vector3d::Zero();
};

enum class Provenance { exact_torus, exact_sphere, galerkin };
std::string to_string(Provenance p);

struct SpectrumEntry {
  double value = 0.0;
  int multiplicity = 0;
};

struct GalerkinInfo {
  int mode_cutoff = 0;
  std::size_t matrix_order = 0;
  std::size_t block_count = 0;
  std::size_t largest_block = 0;
  double hermiticity_residual = 0.0;
  double cluster_tolerance = 0.0;
  std::vector<double> raw_eigenvalues;  // inside the window, before clustering
};

/// Sorted eigenvalues with multiplicities, valid on [coverage_min, coverage_max].
struct SpectrumTable {
  std::vector<SpectrumEntry> entries;
  Provenance provenance = Provenance::exact_torus;
  double coverage_min = 0.0;
  double coverage_max = 0.0;
  std::optional<GalerkinInfo> galerkin;

  /// Throws ConsistencyError unless values strictly increase and multiplicities are positive.
  void validate() const;
  bool symmetric(double tol = 1e-9) const;
  int multiplicity_of(double lambda, double tol = 1e-9) const;
};

/// 0 (multiplicity 2) and +-|m| for s = 0; +-|m - s| otherwise; all |lambda| <= lambda_max.
SpectrumTable torus_exact_spectrum(const SpinStructure& s, double lambda_max);

/// +-(k + 1/2) with multiplicity k(k + 1).
SpectrumTable sphere_exact_spectrum(double lambda_max);

/// #{m in Z^3 : |m - center| < radius}.
long long lattice_count(const Eigen::Vector3d& center, double radius);

struct GalerkinOptions {
  double window_fraction = 0.5;  // reliable zone |lambda| <= fraction * cutoff
  double cluster_tol = 1e-7;
  double hermiticity_tol = 1e-10;
  double coefficient_tol = 1e-13;  // relative threshold for keeping Fourier modes of the coefficients
};

/// Eigenvalues of op in [lo, hi] from the Fourier basis {e^{i m.x} : |m|_inf <= cutoff} (x) C^2.
SpectrumTable galerkin_spectrum(const FirstOrderOperator& op, int mode_cutoff, double lo, double hi,
                                const GalerkinOptions& opt = {});

struct CountResult {
  long long lower = 0;     // #{0 < lambda_k < lambda}
  long long upper = 0;     // #{0 < lambda_k <= lambda}, different only at spectral points
  bool ambiguous = false;  // lambda within 1e-9 of an eigenvalue
};

CountResult counting_function(const SpectrumTable& table, double lambda);

struct CountingReport {
  std::vector<double> lambda_grid;
  std::vector<long long> N_values;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> residuals;  // N - a lambda^3 - b lambda^2
  double max_scaled_residual = 0.0;  // max |r| / lambda^2
  double argmax_lambda = 0.0;
  std::vector<double> window_edges;        // dyadic windows [edge_k, edge_k+1]
  std::vector<double> window_max_scaled;   // max |r| / lambda^2 per window
  bool decreasing_trend = false;
  double fitted_exponent = 0.0;  // slope of log max|r| against log lambda
  bool sub_quadratic = false;    // fitted_exponent <= 2
};

/// Compares N(lambda) against a lambda^3 + b lambda^2 on uniform samples of [lo, hi].
CountingReport asymptotic_comparison(const SpectrumTable& table, double a, double b, double lo, double hi,
                                     std::size_t samples = 3501);

/// Least-squares b in N - a lambda^3 ~ b lambda^2 over the report's samples.
double fit_second_coefficient(const CountingReport& report);

/// Positive-eigenvalue count convolved with an even kernel rho, rho^(0) = 1,
/// rho^(t) = exp(1 - 1/(1 - (t/tau)^2)) for |t| < tau.
double mollified_count(const SpectrumTable& table, double lambda, double tau = 6.0);

/// Smoothed step: integral of rho over (-inf, y].
double mollified_step(double y, double tau = 6.0);

}  // namespace diracgeom
