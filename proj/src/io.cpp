#include "diracgeom/io.hpp"

#include <fstream>
#include <sstream>

namespace diracgeom::io {

using nlohmann::json;

namespace {

json chart_json(const PeriodicChart& c) { return {{"n", c.n()}, {"order", "x1-fastest"}}; }

json matrix2_json(const Eigen::Matrix2cd& m) {
  json out = json::array();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

Eigen::Matrix2cd matrix2_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw InputError("expected four [re, im] pairs for a 2x2 matrix");
  Eigen::Matrix2cd m;
  for (int k = 0; k < 4; ++k) {
    const json& p = j[k];
    if (!p.is_array() || p.size() != 2) throw InputError("matrix entry is not an [re, im] pair");
    m(k / 2, k % 2) = {p[0].get<double>(), p[1].get<double>()};
  }
  return m;
}

json symbol_values(const GridField<SymbolValue>& s) {
  json values = json::array();
  for (const auto& v : s.values()) values.push_back({matrix2_json(v[0]), matrix2_json(v[1]), matrix2_json(v[2])});
  return values;
}

PeriodicChart chart_from(const json& j, const char* schema) {
  if (!j.is_object()) throw InputError("document is not a JSON object");
  if (j.value("schema", "") != schema)
    throw InputError(std::string("expected schema ") + schema + ", found '" + j.value("schema", "") + "'");
  const json& c = j.at("chart");
  if (c.value("order", "x1-fastest") != "x1-fastest") throw InputError("unsupported point order");
  const int n = c.at("n").get<int>();
  if (n < 1) throw InputError("chart size must be positive");
  return PeriodicChart(n);
}

const json& values_of(const json& j, const char* key, const PeriodicChart& chart) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != chart.size())
    throw InputError(std::string("'") + key + "' must hold one entry per grid point (" + std::to_string(chart.size()) + ")");
  return v;
}

GridField<SymbolValue> symbol_grid(const json& v, const PeriodicChart& chart) {
  std::vector<SymbolValue> out;
  out.reserve(chart.size());
  for (const json& p : v) {
    if (!p.is_array() || p.size() != 3) throw InputError("symbol entry must hold three matrices");
    out.push_back({matrix2_from(p[0]), matrix2_from(p[1]), matrix2_from(p[2])});
  }
  return {chart, std::move(out)};
}

// Wraps nlohmann exceptions so that every malformed document surfaces as InputError.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

json to_json(const FrameField& frame) {
  json values = json::array();
  for (const auto& e : frame.e.values()) {
    json row = json::array();
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a) row.push_back(e(j, a));
    values.push_back(std::move(row));
  }
  return {{"schema", frame_schema}, {"chart", chart_json(frame.e.chart())}, {"values", std::move(values)}};
}

json to_json(const PrincipalSymbolField& sym) {
  return {{"schema", symbol_schema}, {"chart", chart_json(sym.chart())}, {"values", symbol_values(sym.sigma())}};
}

json to_json(const FirstOrderOperator& op) {
  json a0 = json::array();
  for (const auto& m : op.a0().values()) a0.push_back(matrix2_json(m));
  return {{"schema", operator_schema},
          {"chart", chart_json(op.chart())},
          {"sigma", symbol_values(op.sigma().sigma())},
          {"a0", std::move(a0)}};
}

FrameField frame_from_json(const json& j) {
  return guarded([&] {
    const PeriodicChart chart = chart_from(j, frame_schema);
    std::vector<Eigen::Matrix3d> out;
    out.reserve(chart.size());
    for (const json& row : values_of(j, "values", chart)) {
      if (!row.is_array() || row.size() != 9) throw InputError("frame entry must hold nine reals");
      Eigen::Matrix3d e;
      for (int k = 0; k < 9; ++k) e(k / 3, k % 3) = row[k].get<double>();
      out.push_back(e);
    }
    return FrameField{GridField<Eigen::Matrix3d>(chart, std::move(out))};
  });
}

PrincipalSymbolField symbol_from_json(const json& j) {
  return guarded([&] {
    const PeriodicChart chart = chart_from(j, symbol_schema);
    return PrincipalSymbolField(symbol_grid(values_of(j, "values", chart), chart));
  });
}

FirstOrderOperator operator_from_json(const json& j) {
  return guarded([&] {
    const PeriodicChart chart = chart_from(j, operator_schema);
    PrincipalSymbolField sym(symbol_grid(values_of(j, "sigma", chart), chart));
    std::vector<Eigen::Matrix2cd> a0;
    a0.reserve(chart.size());
    for (const json& m : values_of(j, "a0", chart)) a0.push_back(matrix2_from(m));
    return FirstOrderOperator(std::move(sym), MatrixField(chart, std::move(a0)));
  });
}

Document parse_document(const json& j) {
  const std::string schema = j.is_object() ? j.value("schema", "") : "";
  if (schema == frame_schema) return frame_from_json(j);
  if (schema == symbol_schema) return symbol_from_json(j);
  if (schema == operator_schema) return operator_from_json(j);
  throw InputError("unknown document schema '" + schema + "'");
}

Document read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_document(j);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string spectrum_csv(const SpectrumTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "value,multiplicity,provenance\n";
  for (const auto& e : table.entries) os << e.value << ',' << e.multiplicity << ',' << to_string(table.provenance) << '\n';
  return os.str();
}

json spectrum_json(const SpectrumTable& table) {
  json entries = json::array();
  for (const auto& e : table.entries) entries.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
  json out = {{"provenance", to_string(table.provenance)},
              {"coverage", {table.coverage_min, table.coverage_max}},
              {"entries", std::move(entries)}};
  if (table.galerkin) {
    const GalerkinInfo& g = *table.galerkin;
    out["galerkin"] = {{"mode_cutoff", g.mode_cutoff},
                       {"matrix_order", g.matrix_order},
                       {"block_count", g.block_count},
                       {"largest_block", g.largest_block},
                       {"hermiticity_residual", g.hermiticity_residual},
                       {"cluster_tolerance", g.cluster_tolerance}};
  }
  return out;
}

json counting_json(const CountingReport& r) {
  return {{"a", r.a},
          {"b", r.b},
          {"lambda_range", {r.lambda_grid.front(), r.lambda_grid.back()}},
          {"samples", r.lambda_grid.size()},
          {"max_scaled_residual", r.max_scaled_residual},
          {"argmax_lambda", r.argmax_lambda},
          {"window_edges", r.window_edges},
          {"window_max_scaled", r.window_max_scaled},
          {"decreasing_trend", r.decreasing_trend},
          {"fitted_exponent", r.fitted_exponent},
          {"sub_quadratic", r.sub_quadratic},
          {"fitted_b", fit_second_coefficient(r)}};
}

std::string residual_series_csv(const CountingReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "lambda,N,residual,scaled_residual\n";
  for (std::size_t k = 0; k < r.lambda_grid.size(); ++k) {
    const double lam = r.lambda_grid[k];
    os << lam << ',' << r.N_values[k] << ',' << r.residuals[k] << ',' << r.residuals[k] / (lam * lam) << '\n';
  }
  return os.str();
}

json verdict_json(const DiracVerdict& v) {
  return {{"is_dirac", v.is_dirac},
          {"cond_a_residual", v.cond_a_residual},
          {"cond_b_residual", v.cond_b_residual},
          {"reconstructed_gap", v.reconstructed_gap},
          {"tolerance", v.tolerance}};
}

}  // namespace diracgeom::io
