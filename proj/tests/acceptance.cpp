// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "diracgeom/frames.hpp"
#include "diracgeom/gauges.hpp"
#include "diracgeom/scenarios.hpp"
#include "diracgeom/spectral_asymptotics.hpp"
#include "diracgeom/spectrum_lab.hpp"

using namespace diracgeom;

namespace {

constexpr int kGrid = 16;

struct NamedFrame {
  std::string name;
  FrameField frame;
};

std::vector<NamedFrame> criterion_frames(const PeriodicChart& chart) {
  std::vector<NamedFrame> out{{"constant", frames::constant(chart)},
                              {"twisted k3=1", frames::twisted(chart, 1)},
                              {"twisted k3=3", frames::twisted(chart, 3)}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    out.push_back({"random seed " + std::to_string(seed), frames::random_band_limited(chart, seed)});
  return out;
}

FirstOrderOperator dirac_of(const FrameField& f) { return dirac_operator(f, metric_from_frame(f)); }

double max_abs_diff(const GridField<double>& a, const GridField<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool same_table(const SpectrumTable& a, const SpectrumTable& b, double tol, double& gap) {
  gap = 0.0;
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].multiplicity != b.entries[i].multiplicity) return false;
    gap = std::max(gap, std::abs(a.entries[i].value - b.entries[i].value));
  }
  return gap <= tol;
}

SpectrumTable restricted(const SpectrumTable& t, double lo, double hi) {
  SpectrumTable out;
  out.provenance = t.provenance;
  out.coverage_min = lo;
  out.coverage_max = hi;
  for (const auto& e : t.entries)
    if (e.value >= lo && e.value <= hi) out.entries.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------

bool criterion_1(const std::vector<NamedFrame>& fs) {
  double worst = 0.0;
  std::string where;
  for (const auto& f : fs) {
    const double r = verify_subprincipal_lemma(f.frame, metric_from_frame(f.frame));
    if (r > worst) worst = r, where = f.name;
  }
  std::printf("    %zu frames on %d^3, max ||A_sub - (3c/4) *T^ax I|| = %.3e (%s)\n", fs.size(), kGrid, worst,
              where.empty() ? "-" : where.c_str());
  return worst <= 1e-8;
}

bool criterion_2(const std::vector<NamedFrame>& fs) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(0.0, two_pi);
  std::normal_distribution<double> nxi(0.0, 1.0);
  double worst = 0.0;
  std::size_t samples = 0;
  for (const auto& f : fs) {
    const SymbolInterpolant interp(symbol_from_frame(f.frame));
    for (int k = 0; k < 50; ++k) {
      const Eigen::Vector3d x(ux(rng), ux(rng), ux(rng));
      const Covector xi(nxi(rng), nxi(rng), nxi(rng));
      const double diff = std::abs(u1_curvature(interp, x, xi) - u1_from_torsion(interp.frame_jet(x), xi));
      worst = std::max(worst, diff);
      ++samples;
    }
  }
  std::printf("    %zu (x, xi) samples, max |u1 - torsion formula| = %.3e\n", samples, worst);
  return worst <= 1e-6;
}

bool criterion_3(int grid) {
  double worst_b2 = 0.0, worst_b1 = 0.0;
  for (const std::string& name : scenario_names()) {
    if (name == "sphere") continue;
    const Scenario s = make_scenario(name, grid, 1);
    B2Options opt;
    opt.tol = 1e-6;
    const B2Routes routes = b2_density(s.op->sigma(), opt);
    worst_b2 = std::max(worst_b2, routes.max_disagreement);
    worst_b1 = std::max(worst_b1, max_abs_diff(b1_density(*s.op, B1Route::closed_form),
                                               b1_density(*s.op, B1Route::quadrature)));
  }
  std::printf("    builtin scenarios on %d^3: b2 max route disagreement %.3e, b1 closed vs quadrature %.3e\n", grid,
              worst_b2, worst_b1);
  return worst_b2 <= 1e-6 && worst_b1 <= 1e-7;
}

bool criterion_4(const std::vector<NamedFrame>& fs, const PeriodicChart& chart) {
  double worst = 0.0;
  bool all_dirac = true;
  for (const auto& f : fs) {
    const DiracVerdict v = check_dirac(dirac_of(f.frame));
    all_dirac = all_dirac && v.is_dirac;
    worst = std::max({worst, v.cond_a_residual, v.cond_b_residual, v.reconstructed_gap});
  }
  const FirstOrderOperator standard = dirac_of(frames::constant(chart));
  const FirstOrderOperator scalar = standard.plus_potential(0.3 * Eigen::Matrix2cd::Identity());
  const DiracVerdict vs = check_dirac(scalar);
  const double b_global = b_density(scalar).b_global;
  const DiracVerdict vt = check_dirac(standard.plus_potential(0.1 * PauliBasis::s(2)));

  const double expect_b = 0.3 / (2 * pi * pi);
  std::printf("    %zu Dirac operators: all is_dirac = %s, max residual %.3e\n", fs.size(), all_dirac ? "true" : "false",
              worst);
  std::printf("    Dirac + 0.3 I: is_dirac = %s, cond_b = %.12f (expected %.12f), b_global = %.10f (expected %.10f)\n",
              vs.is_dirac ? "true" : "false", vs.cond_b_residual, expect_b, b_global, -1.2 * pi);
  std::printf("    Dirac + 0.1 s3: is_dirac = %s, cond_a = %.12f\n", vt.is_dirac ? "true" : "false", vt.cond_a_residual);
  return all_dirac && worst <= 1e-8 && !vs.is_dirac && std::abs(vs.cond_b_residual - expect_b) <= 1e-8 &&
         std::abs(b_global + 1.2 * pi) <= 1e-6 && !vt.is_dirac && std::abs(vt.cond_a_residual - 0.1) <= 1e-9;
}

bool criterion_5() {
  const SpinStructure trivial{Eigen::Vector3d::Zero()};
  const SpectrumTable t = torus_exact_spectrum(trivial, 30.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    double lam = 0.0;
    while (lam == 0.0) lam = 30.0 - u(rng);  // (0, 30]
    if (counting_function(t, lam).lower + 1 != lattice_count(Eigen::Vector3d::Zero(), lam)) ++mismatches;
  }
  const int zero_trivial = t.multiplicity_of(0.0, 0.0);
  const int zero_shifted = torus_exact_spectrum(SpinStructure(Eigen::Vector3d(0, 0, 0.5)), 3.0).multiplicity_of(0.0, 0.0);
  std::printf("    200 random lambda: %d mismatches; zero mode multiplicity s=0: %d, s=(0,0,1/2): %d\n", mismatches,
              zero_trivial, zero_shifted);
  return mismatches == 0 && zero_trivial == 2 && zero_shifted == 0;
}

bool criterion_6(const PeriodicChart& chart) {
  const auto start = std::chrono::steady_clock::now();
  const SpectrumTable twisted = galerkin_spectrum(dirac_of(frames::twisted(chart, 1)), 6, -2.0, 2.0);
  const SpectrumTable standard = galerkin_spectrum(dirac_of(frames::constant(chart)), 6, -2.0, 2.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double gap_t = 0.0, gap_s = 0.0;
  const bool ok_t = same_table(twisted, torus_exact_spectrum(SpinStructure(Eigen::Vector3d(0, 0, 0.5)), 2.0), 1e-8, gap_t);
  const bool ok_s =
      same_table(standard, restricted(torus_exact_spectrum(SpinStructure(Eigen::Vector3d::Zero()), 2.0), -2, 2), 1e-8, gap_s);
  std::printf("    matrix order %zu; twisted k3=1: %zu levels, max gap %.3e; standard: %zu levels, max gap %.3e; %.2f s\n",
              twisted.galerkin->matrix_order, twisted.entries.size(), gap_t, standard.entries.size(), gap_s, secs);
  return ok_t && ok_s && secs < 60.0;
}

bool criterion_7() {
  const SpectrumTable s = sphere_exact_spectrum(140.0);
  int mismatches = 0;
  for (long long n = 2; n <= 100; ++n)
    if (counting_function(s, static_cast<double>(n)).lower != (n * n * n - n) / 3) ++mismatches;
  const double identity = (1000.0 - 10.0) / 3.0;
  const double smooth = mollified_count(s, 10.0);
  std::printf("    integer identity mismatches on [2,100]: %d; mollified N(10) = %.4f vs %.4f\n", mismatches, smooth,
              identity);
  return mismatches == 0 && std::abs(smooth - identity) <= 5.0;
}

bool criterion_8() {
  const SpectrumTable t = torus_exact_spectrum(SpinStructure(Eigen::Vector3d::Zero()), 40.0);
  const CountingReport r = asymptotic_comparison(t, 4.0 * pi / 3.0, 0.0, 5.0, 40.0);
  std::printf("    max |N - (4/3) pi l^3| / l^2 on [5,40] = %.4f at l = %.2f (bound 0.35)\n", r.max_scaled_residual,
              r.argmax_lambda);
  std::printf("    dyadic window maxima:");
  for (double m : r.window_max_scaled) std::printf(" %.4f", m);
  std::printf(" (decreasing: %s); fitted exponent %.3f (<= 2: %s)\n", r.decreasing_trend ? "yes" : "no",
              r.fitted_exponent, r.sub_quadratic ? "yes" : "no");
  return r.max_scaled_residual <= 0.35 && r.decreasing_trend && r.sub_quadratic;
}

bool criterion_9(const PeriodicChart& chart) {
  const std::vector<FirstOrderOperator> ops = {dirac_of(frames::twisted(chart, 1)), dirac_of(frames::random_band_limited(chart, 3)),
                                               dirac_of(frames::constant(chart)).plus_potential(0.3 * Eigen::Matrix2cd::Identity())};
  bool verdicts_agree = true;
  double b_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GaugeField R = gauges::random_smooth(chart, seed);
    for (const auto& op : ops) {
      const FirstOrderOperator t = gauge_transform(op, R);
      verdicts_agree = verdicts_agree && check_dirac(op).is_dirac == check_dirac(t).is_dirac;
      b_gap = std::max(b_gap, max_abs_diff(b_density(op).b_density, b_density(t).b_density));
    }
  }
  double orth = 0.0, hom = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Eigen::Matrix2cd a = gauges::random_su2(1000 + 2 * k), b = gauges::random_su2(1001 + 2 * k);
    const Eigen::Matrix3d oa = so3_from_su2(a), ob = so3_from_su2(b);
    orth = std::max(orth, (oa.transpose() * oa - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    hom = std::max(hom, (so3_from_su2(a * b) - oa * ob).cwiseAbs().maxCoeff());
  }
  std::printf("    10 gauge fields x %zu operators: verdicts agree = %s, max b(x) change %.3e\n", ops.size(),
              verdicts_agree ? "true" : "false", b_gap);
  std::printf("    100 SU(2) pairs: orthogonality %.3e, homomorphism %.3e\n", orth, hom);
  return verdicts_agree && b_gap <= 1e-8 && orth <= 1e-12 && hom <= 1e-12;
}

bool criterion_10(const PeriodicChart& chart) {
  auto rotations = [&](int k) { return frames::twisted(chart, k).e; };
  const LiftResult even = su2_lift(rotations(2));
  const LiftResult odd = su2_lift(rotations(1));
  const bool even_ok = std::holds_alternative<GaugeField>(even);
  const bool odd_obstructed = std::holds_alternative<Obstruction>(odd);
  std::printf("    k3=2: %s; k3=1: %s", even_ok ? "lift found" : "obstructed", odd_obstructed ? "obstructed" : "lift found");
  if (odd_obstructed) std::printf(" along x%d", std::get<Obstruction>(odd).axis);
  std::printf("\n");
  return even_ok && odd_obstructed;
}

}  // namespace

int main() {
  const PeriodicChart chart(kGrid);
  const std::vector<NamedFrame> fs = criterion_frames(chart);

  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"subprincipal symbol of the Dirac operator", [&] { return criterion_1(fs); }},
      {"u1 curvature equals the torsion expression", [&] { return criterion_2(fs); }},
      {"b1, b2 cross-route agreement", [&] { return criterion_3(kGrid); }},
      {"Dirac checker", [&] { return criterion_4(fs, chart); }},
      {"exact torus spectra", criterion_5},
      {"Galerkin validation", [&] { return criterion_6(chart); }},
      {"sphere identity and mollified count", criterion_7},
      {"torus counting asymptotics", criterion_8},
      {"gauge invariance", [&] { return criterion_9(chart); }},
      {"SU(2) lift obstruction", [&] { return criterion_10(chart); }},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    bool pass = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      pass = criteria[k].second();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.1f s)\n", pass ? "PASS" : "FAIL", k + 1, criteria[k].first, secs);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
