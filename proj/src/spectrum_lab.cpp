#include "diracgeom/spectrum_lab.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <numeric>

namespace diracgeom {

namespace {

constexpr double kZeroTol = 1e-9;        // |lambda| below this counts as a zero mode
constexpr double kSpectralPointTol = 1e-9;
constexpr double kMollifierTail = 40.0;  // F(y) is 0 / 1 to double precision beyond this

SpectrumTable symmetric_table(const std::map<long long, int>& positive, int zero_multiplicity, double value_scale,
                              Provenance prov, double lambda_max) {
  SpectrumTable t;
  t.provenance = prov;
  t.coverage_min = -lambda_max;
  t.coverage_max = lambda_max;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    t.entries.push_back({-std::sqrt(static_cast<double>(it->first)) * value_scale, it->second});
  if (zero_multiplicity > 0) t.entries.push_back({0.0, zero_multiplicity});
  for (const auto& [key, mult] : positive) t.entries.push_back({std::sqrt(static_cast<double>(key)) * value_scale, mult});
  return t;
}

// Union-find over Galerkin basis modes.
struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Coefficient {
  Eigen::Vector3i k;
  std::array<Eigen::Matrix2cd, 3> sigma;
  Eigen::Matrix2cd a0;
};

std::vector<Coefficient> operator_coefficients(const FirstOrderOperator& op, double rel_tol) {
  const FourierSeries s = fourier_modes(op.sigma().sigma());
  const FourierSeries a = fourier_modes(op.a0());
  double scale = 0.0;
  for (const auto& m : s.support(0.0))
    for (int c = 0; c < s.component_count(); ++c) scale = std::max(scale, std::abs(s(m, c)));
  for (const auto& m : a.support(0.0))
    for (int c = 0; c < a.component_count(); ++c) scale = std::max(scale, std::abs(a(m, c)));
  const double tol = rel_tol * std::max(scale, 1e-300);

  std::map<std::array<int, 3>, Coefficient> modes;
  auto touch = [&](const Eigen::Vector3i& m) -> Coefficient& {
    auto [it, fresh] = modes.try_emplace({m[0], m[1], m[2]});
    if (fresh) {
      it->second.k = m;
      it->second.sigma = s.value<SymbolValue>(m);
      it->second.a0 = a.value<Eigen::Matrix2cd>(m);
    }
    return it->second;
  };
  for (const auto& m : s.support(tol)) touch(m);
  for (const auto& m : a.support(tol)) touch(m);
  std::vector<Coefficient> out;
  for (auto& [key, c] : modes) out.push_back(std::move(c));
  return out;
}

}  // namespace

SpinStructure::SpinStructure(const Eigen::Vector3d& shift) : shift_(shift) {
  for (int i = 0; i < 3; ++i)
    if (shift[i] != 0.0 && shift[i] != 0.5) throw InputError("spin structure shift entries must be 0 or 1/2");
}

std::vector<SpinStructure> SpinStructure::all() {
  std::vector<SpinStructure> out;
  for (int b = 0; b < 8; ++b) out.emplace_back(Eigen::Vector3d(0.5 * (b & 1), 0.5 * ((b >> 1) & 1), 0.5 * ((b >> 2) & 1)));
  return out;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact_torus: return "exact-torus";
    case Provenance::exact_sphere: return "exact-sphere";
    case Provenance::galerkin: return "galerkin";
  }
  return "unknown";
}

void SpectrumTable::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].multiplicity < 1) throw ConsistencyError("spectrum table has a non-positive multiplicity");
    if (i > 0 && !(entries[i].value > entries[i - 1].value))
      throw ConsistencyError("spectrum table values are not strictly increasing");
  }
}

bool SpectrumTable::symmetric(double tol) const {
  const std::size_t n = entries.size();
  for (std::size_t i = 0; i < n; ++i) {
    const SpectrumEntry& lo = entries[i];
    const SpectrumEntry& hi = entries[n - 1 - i];
    if (std::abs(lo.value + hi.value) > tol || lo.multiplicity != hi.multiplicity) return false;
  }
  return true;
}

int SpectrumTable::multiplicity_of(double lambda, double tol) const {
  for (const auto& e : entries)
    if (std::abs(e.value - lambda) <= tol) return e.multiplicity;
  return 0;
}

SpectrumTable torus_exact_spectrum(const SpinStructure& s, double lambda_max) {
  if (!(lambda_max > 0.0)) throw InputError("torus_exact_spectrum: lambda_max must be positive");
  const Eigen::Vector3i d = s.doubled();
  const int r = static_cast<int>(std::ceil(lambda_max)) + 1;
  const double key_max = 4.0 * lambda_max * lambda_max;
  std::map<long long, int> keys;  // |2m - 2s|^2 -> count
  int zero = 0;
  for (int m1 = -r; m1 <= r; ++m1)
    for (int m2 = -r; m2 <= r; ++m2)
      for (int m3 = -r; m3 <= r; ++m3) {
        const long long a = 2 * m1 - d[0], b = 2 * m2 - d[1], c = 2 * m3 - d[2];
        const long long key = a * a + b * b + c * c;
        if (static_cast<double>(key) > key_max) continue;
        if (key == 0)
          zero += 2;
        else
          ++keys[key];
      }
  SpectrumTable t = symmetric_table(keys, zero, 0.5, Provenance::exact_torus, lambda_max);
  return t;
}

SpectrumTable sphere_exact_spectrum(double lambda_max) {
  if (!(lambda_max > 1.5)) throw InputError("sphere_exact_spectrum: lambda_max must exceed 3/2");
  SpectrumTable t;
  t.provenance = Provenance::exact_sphere;
  t.coverage_min = -lambda_max;
  t.coverage_max = lambda_max;
  std::vector<SpectrumEntry> pos;
  for (long long k = 1; k + 0.5 <= lambda_max; ++k) pos.push_back({k + 0.5, static_cast<int>(k * (k + 1))});
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) t.entries.push_back({-it->value, it->multiplicity});
  t.entries.insert(t.entries.end(), pos.begin(), pos.end());
  return t;
}

long long lattice_count(const Eigen::Vector3d& center, double radius) {
  if (!(radius >= 0.0)) throw InputError("lattice_count: radius must be non-negative");
  std::array<int, 3> lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<int>(std::floor(center[i] - radius)) - 1;
    hi[i] = static_cast<int>(std::ceil(center[i] + radius)) + 1;
  }
  long long count = 0;
  for (int m1 = lo[0]; m1 <= hi[0]; ++m1)
    for (int m2 = lo[1]; m2 <= hi[1]; ++m2)
      for (int m3 = lo[2]; m3 <= hi[2]; ++m3) {
        const Eigen::Vector3d v = Eigen::Vector3d(m1, m2, m3) - center;
        if (std::sqrt(v.squaredNorm()) < radius) ++count;
      }
  return count;
}

SpectrumTable galerkin_spectrum(const FirstOrderOperator& op, int mode_cutoff, double lo, double hi,
                                const GalerkinOptions& opt) {
  if (mode_cutoff < 1) throw InputError("galerkin_spectrum: mode cutoff must be at least 1");
  if (!(lo < hi)) throw InputError("galerkin_spectrum: empty window");
  const double reliable = opt.window_fraction * mode_cutoff;
  if (std::max(std::abs(lo), std::abs(hi)) > reliable)
    throw InputError("galerkin_spectrum: window exceeds the reliable zone |lambda| <= " + std::to_string(reliable));

  const std::vector<Coefficient> coeffs = operator_coefficients(op, opt.coefficient_tol);
  const int K = mode_cutoff, L = 2 * K + 1;
  const std::size_t nmodes = static_cast<std::size_t>(L) * L * L;
  auto mode_of = [&](std::size_t idx) {
    return Eigen::Vector3i(static_cast<int>(idx % L) - K, static_cast<int>((idx / L) % L) - K, static_cast<int>(idx / (L * L)) - K);
  };
  auto index_of = [&](const Eigen::Vector3i& m) -> long long {
    if ((m.array().abs() > K).any()) return -1;
    return (m[0] + K) + static_cast<long long>(L) * ((m[1] + K) + static_cast<long long>(L) * (m[2] + K));
  };

  DisjointSets sets(nmodes);
  for (std::size_t j = 0; j < nmodes; ++j) {
    const Eigen::Vector3i mp = mode_of(j);
    for (const auto& c : coeffs) {
      if (c.k.isZero()) continue;
      const long long i = index_of(mp + c.k);
      if (i >= 0) sets.unite(static_cast<std::size_t>(i), j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> blocks;
  for (std::size_t j = 0; j < nmodes; ++j) blocks[sets.find(j)].push_back(j);

  GalerkinInfo info;
  info.mode_cutoff = mode_cutoff;
  info.matrix_order = 2 * nmodes;
  info.block_count = blocks.size();
  info.cluster_tolerance = opt.cluster_tol;

  std::vector<double> values;
  for (const auto& [root, members] : blocks) {
    info.largest_block = std::max(info.largest_block, 2 * members.size());
    std::map<std::size_t, std::size_t> local;
    for (std::size_t p = 0; p < members.size(); ++p) local[members[p]] = p;
    const Eigen::Index n = static_cast<Eigen::Index>(2 * members.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t p = 0; p < members.size(); ++p) {
      const Eigen::Vector3i mp = mode_of(members[p]);
      for (const auto& c : coeffs) {
        const long long i = index_of(mp + c.k);
        if (i < 0) continue;
        const std::size_t q = local.at(static_cast<std::size_t>(i));
        const Eigen::Matrix2cd blk = c.sigma[0] * double(mp[0]) + c.sigma[1] * double(mp[1]) + c.sigma[2] * double(mp[2]) + c.a0;
        h.block<2, 2>(2 * q, 2 * p) += blk;
      }
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    info.hermiticity_residual = std::max(info.hermiticity_residual, (h - h.adjoint()).cwiseAbs().maxCoeff() / scale);
    const Eigen::MatrixXcd herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double v = es.eigenvalues()[k];
      if (v >= lo && v <= hi) values.push_back(v);
    }
  }
  if (info.hermiticity_residual > opt.hermiticity_tol)
    throw ConsistencyError("galerkin_spectrum: assembled matrix is not Hermitian (residual " +
                           std::to_string(info.hermiticity_residual) + "); a0 is inconsistent with self-adjointness");

  std::sort(values.begin(), values.end());
  info.raw_eigenvalues = values;
  SpectrumTable t;
  t.provenance = Provenance::galerkin;
  t.coverage_min = lo;
  t.coverage_max = hi;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] - values[j - 1] <= opt.cluster_tol) ++j;
    const double mean = std::accumulate(values.begin() + i, values.begin() + j, 0.0) / static_cast<double>(j - i);
    t.entries.push_back({mean, static_cast<int>(j - i)});
    i = j;
  }
  t.galerkin = std::move(info);
  return t;
}

CountResult counting_function(const SpectrumTable& table, double lambda) {
  if (lambda > table.coverage_max) throw InputError("counting_function: lambda beyond table coverage");
  if (table.coverage_min > 0.0) throw InputError("counting_function: table does not cover the bottom of the positive spectrum");
  CountResult r;
  for (const auto& e : table.entries) {
    if (!(e.value > kZeroTol)) continue;
    if (std::abs(e.value - lambda) <= kSpectralPointTol) {
      r.ambiguous = true;
      r.upper += e.multiplicity;
    } else if (e.value < lambda) {
      r.lower += e.multiplicity;
      r.upper += e.multiplicity;
    }
  }
  return r;
}

CountingReport asymptotic_comparison(const SpectrumTable& table, double a, double b, double lo, double hi,
                                     std::size_t samples) {
  if (!(lo > 0.0) || !(hi > lo) || samples < 2) throw InputError("asymptotic_comparison: empty lambda range");
  if (!(a > 0.0)) throw InputError("asymptotic_comparison: a must be positive");
  CountingReport r;
  r.a = a;
  r.b = b;

  // Counts by a sweep over the sorted positive spectrum.
  std::vector<SpectrumEntry> pos;
  for (const auto& e : table.entries)
    if (e.value > kZeroTol) pos.push_back(e);
  if (hi > table.coverage_max) throw InputError("asymptotic_comparison: table does not cover the lambda range");
  std::size_t next = 0;
  long long running = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double lam = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    while (next < pos.size() && pos[next].value < lam) running += pos[next++].multiplicity;
    const double res = static_cast<double>(running) - a * lam * lam * lam - b * lam * lam;
    r.lambda_grid.push_back(lam);
    r.N_values.push_back(running);
    r.residuals.push_back(res);
    const double scaled = std::abs(res) / (lam * lam);
    if (scaled > r.max_scaled_residual) {
      r.max_scaled_residual = scaled;
      r.argmax_lambda = lam;
    }
  }

  auto window_max = [&](double from, double to, bool scaled) {
    double m = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      const double lam = r.lambda_grid[k];
      if (lam < from || lam > to) continue;
      m = std::max(m, scaled ? std::abs(r.residuals[k]) / (lam * lam) : std::abs(r.residuals[k]));
    }
    return m;
  };

  for (double e = lo; e < hi * (1 - 1e-12); e *= 2.0) r.window_edges.push_back(e);
  r.window_edges.push_back(hi);
  for (std::size_t w = 0; w + 1 < r.window_edges.size(); ++w)
    r.window_max_scaled.push_back(window_max(r.window_edges[w], r.window_edges[w + 1], true));
  r.decreasing_trend = r.window_max_scaled.size() >= 2;
  for (std::size_t w = 1; w < r.window_max_scaled.size(); ++w)
    r.decreasing_trend = r.decreasing_trend && r.window_max_scaled[w] < r.window_max_scaled[w - 1];

  // log-log least squares of quarter-octave maxima of |r|
  std::vector<double> xs, ys;
  const double step = std::pow(2.0, 0.25);
  for (double e = lo; e * step <= hi * (1 + 1e-12); e *= step) {
    const double m = window_max(e, e * step, false);
    if (m > 0.0) {
      xs.push_back(std::log(e * std::sqrt(step)));
      ys.push_back(std::log(m));
    }
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    r.fitted_exponent = sxy / sxx;
  }
  r.sub_quadratic = r.fitted_exponent <= 2.0;
  return r;
}

double fit_second_coefficient(const CountingReport& report) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < report.lambda_grid.size(); ++k) {
    const double lam = report.lambda_grid[k];
    num += (static_cast<double>(report.N_values[k]) - report.a * lam * lam * lam) * lam * lam;
    den += lam * lam * lam * lam;
  }
  return num / den;
}

double mollified_step(double y, double tau) {
  if (!(tau > 0.0) || !(tau < two_pi)) throw InputError("mollifier: tau must lie in (0, 2 pi)");
  if (y > kMollifierTail) return 1.0;
  if (y < -kMollifierTail) return 0.0;
  // F(y) = 1/2 + (1/pi) int_0^tau rho^(t) sin(t y) / t dt, composite Gauss-Legendre
  constexpr int panels = 12;
  static const QuadratureRule1D unit = gauss_legendre(48, 0.0, 1.0);
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
      const double t = tau * (p + unit.nodes[k]) / panels;
      const double u = t / tau;
      const double rho_hat = std::exp(1.0 - 1.0 / (1.0 - u * u));
      s += unit.weights[k] * rho_hat * std::sin(t * y) / t;
    }
  s *= tau / panels;
  return 0.5 + s / pi;
}

double mollified_count(const SpectrumTable& table, double lambda, double tau) {
  if (!(tau > 0.0) || !(tau < two_pi)) throw InputError("mollified_count: tau must lie in (0, 2 pi)");
  if (table.coverage_min > 0.0 || table.coverage_max < lambda + kMollifierTail)
    throw InputError("mollified_count: table must cover (0, lambda + 40]");
  double total = 0.0;
  for (const auto& e : table.entries) {
    if (!(e.value > kZeroTol)) continue;
    total += e.multiplicity * mollified_step(lambda - e.value, tau);
  }
  return total;
}

}  // namespace diracgeom
