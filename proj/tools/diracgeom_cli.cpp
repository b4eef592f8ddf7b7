// diracgeom: command-line front end.
//
//   diracgeom decode       geometry read off a principal symbol
//   diracgeom check-dirac  massless Dirac verdict
//   diracgeom asymptotics  Weyl coefficients a, b and their route residuals
//   diracgeom spectrum     exact and/or Galerkin spectrum plus counting comparison
//   diracgeom export       write a scenario's frame, symbol or operator as JSON
//
// Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
// 3 numerical consistency failure, 4 ellipticity failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

#include "diracgeom/errors.hpp"
#include "diracgeom/io.hpp"
#include "diracgeom/scenarios.hpp"
#include "diracgeom/spectral_asymptotics.hpp"

using namespace diracgeom;
using nlohmann::json;

namespace {

enum Exit : int { ok = 0, verdict_false = 1, input_error = 2, consistency_error = 3, ellipticity_error = 4 };

struct RunConfig {
  std::string scenario;
  std::string input;
  int grid = 8;
  int cutoff = 0;  // 0: no Galerkin run
  double lambda_max = 10.0;
  double window_fraction = 0.5;
  double cluster_tol = 1e-7;
  std::string format = "json";
  std::string out;
  std::string series;
  std::string kind = "operator";
  std::uint64_t seed = 1;
  std::optional<double> tol;

  json to_json(const std::string& command) const {
    json j = {{"command", command}, {"grid", grid}, {"format", format}, {"seed", seed}};
    if (!scenario.empty()) j["scenario"] = scenario;
    if (!input.empty()) j["input"] = input;
    if (command == "spectrum") {
      j["cutoff"] = cutoff;
      j["lambda_max"] = lambda_max;
      j["window_fraction"] = window_fraction;
      j["cluster_tol"] = cluster_tol;
    }
    if (tol) j["tol"] = *tol;
    return j;
  }
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario, "builtin scenario, name[:parameter]");
  cmd->add_option("--input", cfg.input, "JSON frame, symbol or operator file");
  cmd->add_option("--grid", cfg.grid, "points per axis")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "seed for random scenarios");
  cmd->add_option("--tol", cfg.tol, "command tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", cfg.out, "output file (default stdout)");
}

json stats(const GridField<double>& f) {
  const auto v = f.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return {{"min", *lo}, {"mean", mean}, {"max", *hi}};
}

json matrix_json(const Eigen::Matrix3d& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InputError("cannot write " + cfg.out);
  f << text;
}

json report(const RunConfig& cfg, const std::string& command, json result) {
  return {{"schema", "diracgeom/report@1"},
          {"version", io::library_version},
          {"config", cfg.to_json(command)},
          {"result", std::move(result)}};
}

std::optional<Scenario> scenario_of(const RunConfig& cfg) {
  if (cfg.scenario.empty() == cfg.input.empty()) throw InputError("give exactly one of --scenario and --input");
  if (cfg.scenario.empty()) return std::nullopt;
  return make_scenario(cfg.scenario, cfg.grid, cfg.seed);
}

FirstOrderOperator operator_of(const RunConfig& cfg) {
  if (auto s = scenario_of(cfg)) {
    if (!s->op) throw InputError("scenario '" + s->name + "' has no grid operator");
    return *s->op;
  }
  const io::Document doc = io::read_document(cfg.input);
  if (const auto* op = std::get_if<FirstOrderOperator>(&doc)) return *op;
  if (const auto* frame = std::get_if<FrameField>(&doc)) return dirac_operator(*frame, metric_from_frame(*frame));
  throw InputError("this command needs an operator or frame document");
}

PrincipalSymbolField symbol_of(const RunConfig& cfg) {
  if (auto s = scenario_of(cfg)) {
    if (!s->op) throw InputError("scenario '" + s->name + "' has no grid operator");
    return s->op->sigma();
  }
  const io::Document doc = io::read_document(cfg.input);
  if (const auto* f = std::get_if<FrameField>(&doc)) return symbol_from_frame(*f);
  if (const auto* p = std::get_if<PrincipalSymbolField>(&doc)) return *p;
  return std::get<FirstOrderOperator>(doc).sigma();
}

int cmd_decode(const RunConfig& cfg) {
  const PrincipalSymbolField sym = symbol_of(cfg);
  const FrameField frame = decode_frame(sym);
  const MetricField metric = decode_metric(sym);
  const TorsionBundle tb = torsion(frame, metric, cfg.tol.value_or(1e-10));
  const TeleparallelResiduals tp = teleparallel_check(frame);
  double metric_gap = 0.0;
  const MetricField from_frame = metric_from_frame(frame);
  for (std::size_t i = 0; i < sym.chart().size(); ++i)
    metric_gap = std::max(metric_gap, (from_frame.g_contra[i] - metric.g_contra[i]).cwiseAbs().maxCoeff());

  const json result = {
      {"charge", topological_charge(sym)},
      {"frame_at_origin", matrix_json(frame.e[0])},
      {"metric_at_origin", matrix_json(metric.g_contra[0])},
      {"volume_density", stats(metric.vol)},
      {"axial_dual", stats(tb.axial_dual)},
      {"residuals",
       {{"metric_polarisation_vs_frame", metric_gap},
        {"torsion_connection_vs_exterior", tb.residuals.connection_vs_exterior},
        {"torsion_star_vs_curl", tb.residuals.star_vs_curl},
        {"axial_vs_trace", tb.residuals.axial_vs_trace},
        {"axial_vs_coframe", tb.residuals.axial_vs_coframe},
        {"torsion_antisymmetry", tb.residuals.antisymmetry},
        {"frame_parallel", tp.frame_parallel},
        {"metric_compatibility", tp.metric_compatibility},
        {"contortion", tp.contortion}}}};
  emit(cfg, report(cfg, "decode", result).dump(2) + "\n");
  return ok;
}

int cmd_check_dirac(const RunConfig& cfg) {
  const DiracVerdict v = check_dirac(operator_of(cfg), cfg.tol.value_or(1e-7));
  emit(cfg, report(cfg, "check-dirac", io::verdict_json(v)).dump(2) + "\n");
  return v.is_dirac ? ok : verdict_false;
}

int cmd_asymptotics(const RunConfig& cfg) {
  const FirstOrderOperator op = operator_of(cfg);
  const AsymptoticCoefficients c = b_density(op);
  const GridField<double> b1q = b1_density(op, B1Route::quadrature);
  double b1_gap = 0.0;
  for (std::size_t i = 0; i < b1q.size(); ++i) b1_gap = std::max(b1_gap, std::abs(b1q[i] - c.b1_density[i]));
  B2Options b2opt;
  b2opt.tol = cfg.tol.value_or(1e-6);
  const B2Routes b2 = b2_density(op.sigma(), b2opt);

  const json result = {{"a_density", stats(c.a_density)},
                       {"b1_density", stats(c.b1_density)},
                       {"b2_density", stats(c.b2_density)},
                       {"b_density", stats(c.b_density)},
                       {"globals", {{"a", c.a_global}, {"b", c.b_global}}},
                       {"route_residuals", {{"b1_closed_vs_quadrature", b1_gap}, {"b2_max_disagreement", b2.max_disagreement}}}};

  if (!cfg.series.empty()) {
    std::ofstream f(cfg.series);
    if (!f) throw InputError("cannot write " + cfg.series);
    f.precision(15);
    f << "x1,a,b1,b2,b\n";
    const PeriodicChart& chart = op.chart();
    for (int i = 0; i < chart.n(); ++i) {
      const std::size_t k = chart.index(i, 0, 0);
      f << chart.point(k)[0] << ',' << c.a_density[k] << ',' << c.b1_density[k] << ',' << c.b2_density[k] << ','
        << c.b_density[k] << '\n';
    }
  }
  emit(cfg, report(cfg, "asymptotics", result).dump(2) + "\n");
  return ok;
}

double table_gap(const SpectrumTable& a, const SpectrumTable& b) {
  if (a.entries.size() != b.entries.size()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].multiplicity != b.entries[i].multiplicity) return std::numeric_limits<double>::infinity();
    gap = std::max(gap, std::abs(a.entries[i].value - b.entries[i].value));
  }
  return gap;
}

int cmd_spectrum(const RunConfig& cfg) {
  if (!(cfg.lambda_max > 0.0)) throw InputError("--lambda-max must be positive");
  std::optional<Scenario> sc;
  std::optional<FirstOrderOperator> op;
  if (!cfg.input.empty() || !cfg.scenario.empty()) {
    sc = scenario_of(cfg);
    if (sc)
      op = sc->op;
    else
      op = operator_of(cfg);
  }

  std::optional<SpectrumTable> exact = sc ? sc->exact_spectrum(cfg.lambda_max) : std::nullopt;
  std::optional<SpectrumTable> galerkin;
  if (cfg.cutoff > 0) {
    if (!op) throw InputError("Galerkin run needs a grid operator");
    GalerkinOptions g;
    g.window_fraction = cfg.window_fraction;
    g.cluster_tol = cfg.cluster_tol;
    galerkin = galerkin_spectrum(*op, cfg.cutoff, -cfg.lambda_max, cfg.lambda_max, g);
  }
  if (!exact && !galerkin) throw InputError("no closed form for this scenario; give --cutoff for a Galerkin run");

  json result;
  int code = ok;
  const SpectrumTable& primary = exact ? *exact : *galerkin;
  result["spectrum"] = io::spectrum_json(primary);
  if (exact && galerkin) {
    const double tol = cfg.tol.value_or(1e-9);
    const double gap = table_gap(*exact, *galerkin);
    result["galerkin"] = io::spectrum_json(*galerkin);
    result["exact_vs_galerkin"] = {{"max_gap", std::isfinite(gap) ? json(gap) : json("mismatch")},
                                   {"tolerance", tol},
                                   {"agree", gap <= tol}};
    if (!(gap <= tol)) code = verdict_false;
  }

  if (exact && cfg.lambda_max >= 10.0) {
    double a = 1.0 / 3.0, b = 0.0;
    if (!sc->sphere) {
      const AsymptoticCoefficients c = b_density(*op);
      a = c.a_global;
      b = c.b_global;
    }
    const double hi = std::min(40.0, cfg.lambda_max);
    const CountingReport r = asymptotic_comparison(*exact, a, b, 5.0, hi);
    result["counting"] = io::counting_json(r);
    if (!cfg.series.empty()) {
      std::ofstream f(cfg.series);
      if (!f) throw InputError("cannot write " + cfg.series);
      f << io::residual_series_csv(r);
    }
    if (sc->sphere) {
      bool holds = true;
      for (int n = 2; n <= static_cast<int>(std::floor(cfg.lambda_max)); ++n)
        holds = holds && counting_function(*exact, n).lower == (static_cast<long long>(n) * n * n - n) / 3;
      result["integer_identity_holds"] = holds;
      if (!holds) code = verdict_false;
    }
  }

  if (cfg.format == "csv") {
    emit(cfg, io::spectrum_csv(primary));
    std::cout << report(cfg, "spectrum", result).dump(2) << '\n';
  } else {
    emit(cfg, report(cfg, "spectrum", result).dump(2) + "\n");
  }
  return code;
}

int cmd_export(const RunConfig& cfg) {
  const Scenario s = make_scenario(cfg.scenario, cfg.grid, cfg.seed);
  if (!s.op) throw InputError("scenario '" + s.name + "' has no grid data");
  json j;
  if (cfg.kind == "frame")
    j = io::to_json(*s.frame);
  else if (cfg.kind == "symbol")
    j = io::to_json(s.op->sigma());
  else
    j = io::to_json(*s.op);
  emit(cfg, j.dump() + "\n");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diracgeom: geometry and spectral asymptotics of 2x2 first-order operators on the 3-torus"};
  app.set_version_flag("--version", io::library_version);
  app.require_subcommand(1);
  RunConfig cfg;

  auto* decode = app.add_subcommand("decode", "frame, metric, charge and torsion of a principal symbol");
  add_common(decode, cfg);
  auto* check = app.add_subcommand("check-dirac", "decide whether an operator is a massless Dirac operator");
  add_common(check, cfg);
  auto* asym = app.add_subcommand("asymptotics", "Weyl coefficients a(x), b(x) and their globals");
  add_common(asym, cfg);
  asym->add_option("--series", cfg.series, "CSV of densities along the x1 axis");
  auto* spec = app.add_subcommand("spectrum", "spectrum, counting function and asymptotic comparison");
  add_common(spec, cfg);
  spec->add_option("--cutoff", cfg.cutoff, "Galerkin mode cutoff (0: closed form only)")->check(CLI::NonNegativeNumber);
  spec->add_option("--lambda-max", cfg.lambda_max, "spectral window [-lambda_max, lambda_max]");
  spec->add_option("--window-fraction", cfg.window_fraction, "reliable Galerkin zone as a fraction of the cutoff");
  spec->add_option("--cluster-tol", cfg.cluster_tol, "eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
  spec->add_option("--series", cfg.series, "CSV of counting residuals");
  auto* exp = app.add_subcommand("export", "write a scenario as a JSON document");
  exp->add_option("--scenario", cfg.scenario)->required();
  exp->add_option("--grid", cfg.grid)->check(CLI::PositiveNumber);
  exp->add_option("--seed", cfg.seed);
  exp->add_option("--kind", cfg.kind)->check(CLI::IsMember({"frame", "symbol", "operator"}));
  exp->add_option("--out", cfg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*decode) return cmd_decode(cfg);
    if (*check) return cmd_check_dirac(cfg);
    if (*asym) return cmd_asymptotics(cfg);
    if (*spec) return cmd_spectrum(cfg);
    return cmd_export(cfg);
  } catch (const EllipticityError& e) {
    std::cerr << "ellipticity failure at grid point " << e.point() << ": " << e.what() << '\n';
    return ellipticity_error;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return input_error;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return consistency_error;
  }
}
