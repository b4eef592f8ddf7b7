#include "doctest.h"

#include "diracgeom/errors.hpp"
#include "diracgeom/frames.hpp"
#include "diracgeom/operator_algebra.hpp"
#include "diracgeom/spectrum_lab.hpp"

using namespace diracgeom;

namespace {

const SpinStructure trivial{Eigen::Vector3d::Zero()};

FirstOrderOperator dirac_of(const FrameField& f) { return dirac_operator(f, metric_from_frame(f)); }

SpectrumTable shifted(const SpectrumTable& t, double q) {
  SpectrumTable out = t;
  for (auto& e : out.entries) e.value += q;
  out.coverage_min += q;
  out.coverage_max += q;
  return out;
}

SpectrumTable restricted(const SpectrumTable& t, double lo, double hi) {
  SpectrumTable out;
  out.coverage_min = lo;
  out.coverage_max = hi;
  for (const auto& e : t.entries)
    if (e.value >= lo && e.value <= hi) out.entries.push_back(e);
  return out;
}

void check_same_entries(const SpectrumTable& a, const SpectrumTable& b, double tol) {
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(std::abs(a.entries[i].value - b.entries[i].value) < tol);
    CHECK(a.entries[i].multiplicity == b.entries[i].multiplicity);
  }
}

}  // namespace

TEST_CASE("spin structures") {
  CHECK(SpinStructure::all().size() == 8);
  CHECK_THROWS_AS(SpinStructure(Eigen::Vector3d(0.25, 0, 0)), InputError);
}

TEST_CASE("exact torus spectrum, trivial spin structure") {
  const SpectrumTable t = torus_exact_spectrum(trivial, 3.0);
  t.validate();
  CHECK(t.symmetric(0.0));
  CHECK(t.multiplicity_of(0.0) == 2);
  CHECK(t.multiplicity_of(1.0) == 6);
  CHECK(t.multiplicity_of(-1.0) == 6);
  CHECK(t.multiplicity_of(std::sqrt(2.0)) == 12);
  CHECK(t.multiplicity_of(std::sqrt(3.0)) == 8);

  const CountResult n2 = counting_function(t, 2.0);
  CHECK(n2.ambiguous);
  CHECK(n2.lower == 26);
  CHECK(n2.upper == 32);
  const CountResult n15 = counting_function(t, 1.5);
  CHECK_FALSE(n15.ambiguous);
  CHECK(n15.lower == 18);
  CHECK(n15.upper == 18);
  CHECK_THROWS_AS(counting_function(t, 3.5), InputError);
}

TEST_CASE("torus counting equals shifted lattice counts") {
  CHECK(lattice_count(Eigen::Vector3d::Zero(), 1.01) == 7);
  CHECK(lattice_count(Eigen::Vector3d::Zero(), 1.5) == 19);
  CHECK(lattice_count(Eigen::Vector3d(0, 0, 0.5), 1.0) == 2);
  CHECK(lattice_count(Eigen::Vector3d(0.5, 0.5, 0.5), 1.0) == 8);

  for (const SpinStructure& s : SpinStructure::all()) {
    const SpectrumTable t = torus_exact_spectrum(s, 6.0);
    CHECK(t.symmetric(0.0));
    for (double lam : {0.7, 1.3, 2.9, 4.41, 5.77}) {
      const long long expect = lattice_count(s.shift(), lam) - (s.shift().isZero() ? 1 : 0);
      CHECK(counting_function(t, lam).lower == expect);
    }
  }
}

TEST_CASE("nontrivial spin structure has no zero mode") {
  const SpectrumTable t = torus_exact_spectrum(SpinStructure(Eigen::Vector3d(0, 0, 0.5)), 2.0);
  CHECK(t.multiplicity_of(0.0) == 0);
  const auto& first_positive = *std::find_if(t.entries.begin(), t.entries.end(), [](auto& e) { return e.value > 0; });
  CHECK(first_positive.value == 0.5);
  CHECK(first_positive.multiplicity == 2);
}

TEST_CASE("exact sphere spectrum") {
  const SpectrumTable t = sphere_exact_spectrum(20.0);
  t.validate();
  CHECK(t.symmetric(0.0));
  CHECK(t.multiplicity_of(1.5) == 2);
  CHECK(t.multiplicity_of(2.5) == 6);
  CHECK(t.multiplicity_of(0.5) == 0);
  CHECK(counting_function(t, 3.0).lower == 8);
  // at integers the count is exactly n^3/3 - n/3
  for (int n = 2; n <= 20; ++n) CHECK(counting_function(t, n).lower == (n * n * n - n) / 3);
  CHECK_THROWS_AS(sphere_exact_spectrum(1.5), InputError);
}

TEST_CASE("Galerkin spectrum of the standard torus operator") {
  const PeriodicChart chart(8);
  const FirstOrderOperator op = dirac_of(frames::constant(chart));
  GalerkinOptions opt;
  opt.window_fraction = 0.625;
  const SpectrumTable g = galerkin_spectrum(op, 4, -2.5, 2.5, opt);
  g.validate();
  REQUIRE(g.galerkin.has_value());
  CHECK(g.galerkin->hermiticity_residual < 1e-12);
  CHECK(g.galerkin->largest_block == 2);
  check_same_entries(g, restricted(torus_exact_spectrum(trivial, 3.0), -2.5, 2.5), 1e-10);

  CHECK_THROWS_AS(galerkin_spectrum(op, 4, -2.5, 2.5), InputError);  // default fraction 0.5
  CHECK_THROWS_AS(galerkin_spectrum(op, 4, 1.0, 1.0), InputError);
}

TEST_CASE("Galerkin spectrum of the twisted operator") {
  const PeriodicChart chart(8);
  const FirstOrderOperator op = dirac_of(frames::twisted(chart, 1));
  const SpectrumTable g = galerkin_spectrum(op, 6, -2.0, 2.0);
  CHECK(g.galerkin->block_count > 1);
  CHECK(g.symmetric(1e-8));
  for (const auto& e : g.entries) CHECK(e.multiplicity % 2 == 0);
  CHECK(g.multiplicity_of(0.0, 1e-6) == 0);
  CHECK(g.multiplicity_of(0.5, 1e-8) == 2);
  const SpectrumTable exact = torus_exact_spectrum(SpinStructure(Eigen::Vector3d(0, 0, 0.5)), 2.0);
  check_same_entries(g, exact, 1e-8);

  const SpectrumTable finer = galerkin_spectrum(op, 8, -2.0, 2.0);
  check_same_entries(g, finer, 1e-8);
}

TEST_CASE("Galerkin spectrum with a constant potential shifts by the constant") {
  const PeriodicChart chart(8);
  const FirstOrderOperator op = dirac_of(frames::constant(chart)).plus_potential(0.3 * Eigen::Matrix2cd::Identity());
  const SpectrumTable g = galerkin_spectrum(op, 5, -2.0, 2.0);
  const SpectrumTable exact = restricted(shifted(torus_exact_spectrum(trivial, 3.0), 0.3), -2.0, 2.0);
  check_same_entries(g, exact, 1e-10);
  CHECK_FALSE(g.symmetric(1e-6));
}

TEST_CASE("operators with non-Hermitian subprincipal part are rejected before assembly") {
  const PeriodicChart chart(8);
  const FirstOrderOperator op = dirac_of(frames::constant(chart));
  MatrixField bad(chart, Eigen::Matrix2cd::Identity() * std::complex<double>(0.0, 0.2));
  CHECK_THROWS_AS(FirstOrderOperator(op.sigma(), bad), InputError);
}

TEST_CASE("mollified counting") {
  CHECK(mollified_step(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mollified_step(40.5) == 1.0);
  CHECK(std::abs(mollified_step(-39.0)) < 1e-6);
  CHECK(mollified_step(25.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mollified_step(3.0) + mollified_step(-3.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mollified_step(0.0, 2 * pi), InputError);

  SpectrumTable single;
  single.coverage_min = -100;
  single.coverage_max = 100;
  single.entries = {{3.0, 2}};
  CHECK(std::abs(mollified_count(single, 30.0) - 2.0) < 1e-6);

  const SpectrumTable sphere = sphere_exact_spectrum(60.0);
  CHECK(std::abs(mollified_count(sphere, 10.0) - (1000.0 - 10.0) / 3.0) < 5.0);
  const SpectrumTable torus = torus_exact_spectrum(trivial, 51.0);
  const double smooth = mollified_count(torus, 10.0);
  CHECK(std::abs(smooth - 4.0 * pi / 3.0 * 1000.0) < 25.0);
  CHECK_THROWS_AS(mollified_count(torus, 20.0), InputError);
}

TEST_CASE("asymptotic comparison on the torus") {
  const SpectrumTable t = torus_exact_spectrum(trivial, 40.0);
  const double a = 4.0 * pi / 3.0;
  const CountingReport r = asymptotic_comparison(t, a, 0.0, 5.0, 40.0);
  CHECK(r.lambda_grid.size() == 3501);
  CHECK(r.window_max_scaled.size() == 3);
  CHECK(r.decreasing_trend);
  CHECK(r.sub_quadratic);
  CHECK(r.max_scaled_residual > 0.35);  // lattice fluctuations at the low end
  CHECK(std::abs(fit_second_coefficient(r)) < 0.5);
  CHECK_THROWS_AS(asymptotic_comparison(t, a, 0.0, 5.0, 41.0), InputError);
}

TEST_CASE("second coefficient of a shifted spectrum") {
  const double q = 0.3;
  const SpectrumTable t = shifted(torus_exact_spectrum(trivial, 41.0), q);
  const double a = 4.0 * pi / 3.0;
  const CountingReport r = asymptotic_comparison(t, a, 0.0, 5.0, 40.0);
  const double b = fit_second_coefficient(r);
  CHECK(std::abs(b + 4 * pi * q) < 0.1 * 4 * pi * q);
  const CountingReport with_b = asymptotic_comparison(t, a, -4 * pi * q, 5.0, 40.0);
  CHECK(with_b.max_scaled_residual < r.max_scaled_residual);
}
