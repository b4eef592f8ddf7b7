#include "diracgeom/symbol_geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace diracgeom {

namespace {

constexpr double kSymbolTol = 1e-13;
constexpr double kMaxFrameCondition = 1e8;
constexpr double kMaxTransportCondition = 1e12;
constexpr double kChargeRounding = 1e-6;

int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((a + 1) % 3 == b) ? 1 : -1;
}

int ipow3(int k) { return k == 0 ? 1 : (k == 1 ? 3 : (k == 2 ? 9 : 27)); }

int factorial(int q) { return q <= 1 ? 1 : (q == 2 ? 2 : 6); }

// Raise every index of the 3-index tensor T^a_{bc} (first index already up).
Tensor3d raise_last_two(const Tensor3d& t, const Eigen::Matrix3d& g_contra) {
  Tensor3d r;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) {
        double s = 0.0;
        for (int m = 0; m < 3; ++m)
          for (int n = 0; n < 3; ++n) s += t(a, m, n) * g_contra(m, c) * g_contra(n, d);
        r(a, c, d) = s;
      }
  return r;
}

}  // namespace

double TorsionRouteResiduals::max() const {
  return std::max({connection_vs_exterior, star_vs_curl, axial_vs_trace, axial_vs_coframe, antisymmetry});
}

// ---------------------------------------------------------------------------

PrincipalSymbolField::PrincipalSymbolField(GridField<SymbolValue> sigma) : sigma_(std::move(sigma)) {
  for (std::size_t i = 0; i < sigma_.size(); ++i)
    for (int a = 0; a < 3; ++a) {
      const Eigen::Matrix2cd& m = sigma_[i][a];
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
      if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kSymbolTol * scale)
        throw InputError("principal symbol is not Hermitian at grid point " + std::to_string(i));
      if (std::abs(m.trace()) > kSymbolTol * scale)
        throw InputError("principal symbol is not trace-free at grid point " + std::to_string(i));
    }
}

Eigen::Matrix2cd PrincipalSymbolField::principal(std::size_t i, const Covector& xi) const {
  const SymbolValue& s = sigma_[i];
  return xi[0] * s[0] + xi[1] * s[1] + xi[2] * s[2];
}

// ---------------------------------------------------------------------------

AntisymmetricTensor::AntisymmetricTensor(int degree) : degree_(degree) {
  if (degree < 0 || degree > 3) throw InputError("antisymmetric tensor degree must be in 0..3");
}

int AntisymmetricTensor::component_count() const { return ipow3(degree_); }

double& AntisymmetricTensor::operator()(std::initializer_list<int> idx) {
  if (static_cast<int>(idx.size()) != degree_) throw InputError("AntisymmetricTensor: wrong index count");
  int flat = 0;
  for (int i : idx) flat = 3 * flat + i;
  return c_[flat];
}

double AntisymmetricTensor::operator()(std::initializer_list<int> idx) const {
  return const_cast<AntisymmetricTensor&>(*this)(idx);
}

AntisymmetricTensor AntisymmetricTensor::scalar(double v) {
  AntisymmetricTensor t(0);
  t.c_[0] = v;
  return t;
}

AntisymmetricTensor AntisymmetricTensor::one_form(const Eigen::Vector3d& w) {
  AntisymmetricTensor t(1);
  for (int a = 0; a < 3; ++a) t.c_[a] = w[a];
  return t;
}

AntisymmetricTensor AntisymmetricTensor::two_form(const Eigen::Matrix3d& q) {
  AntisymmetricTensor t(2);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t.c_[3 * a + b] = q(a, b);
  return t;
}

AntisymmetricTensor AntisymmetricTensor::three_form(double v) {
  AntisymmetricTensor t(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) t.c_[9 * a + 3 * b + c] = v * levi_civita(a, b, c);
  return t;
}

double AntisymmetricTensor::max_abs_difference(const AntisymmetricTensor& o) const {
  if (o.degree_ != degree_) throw InputError("AntisymmetricTensor: degree mismatch");
  return (c_ - o.c_).head(component_count()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

namespace local {

Eigen::Matrix3d metric_contra(const Eigen::Matrix3d& e) { return e.transpose() * e; }

Eigen::Matrix3d coframe(const Eigen::Matrix3d& e) { return e.inverse().transpose(); }

Eigen::Matrix3d metric_cov(const Eigen::Matrix3d& e) {
  const Eigen::Matrix3d c = coframe(e);
  return c.transpose() * c;
}

double volume_density(const Eigen::Matrix3d& e) { return 1.0 / std::abs(e.determinant()); }

SymbolValue symbol(const Eigen::Matrix3d& e) {
  SymbolValue s;
  for (int a = 0; a < 3; ++a) s[a] = PauliBasis::combine(e.col(a));
  return s;
}

std::array<Eigen::Matrix3d, 3> coframe_derivatives(const FrameJet& jet) {
  const Eigen::Matrix3d c = coframe(jet.e);
  std::array<Eigen::Matrix3d, 3> dc;
  for (int mu = 0; mu < 3; ++mu) dc[mu] = -c * jet.de[mu].transpose() * c;
  return dc;
}

std::array<Eigen::Matrix3d, 3> metric_cov_derivatives(const FrameJet& jet) {
  const Eigen::Matrix3d c = coframe(jet.e);
  const auto dc = coframe_derivatives(jet);
  std::array<Eigen::Matrix3d, 3> dg;
  for (int mu = 0; mu < 3; ++mu) dg[mu] = dc[mu].transpose() * c + c.transpose() * dc[mu];
  return dg;
}

std::array<Eigen::Matrix3d, 3> metric_contra_derivatives(const FrameJet& jet) {
  std::array<Eigen::Matrix3d, 3> dg;
  for (int mu = 0; mu < 3; ++mu) dg[mu] = jet.de[mu].transpose() * jet.e + jet.e.transpose() * jet.de[mu];
  return dg;
}

Tensor3d teleparallel(const FrameJet& jet) {
  const auto dc = coframe_derivatives(jet);
  Tensor3d g;
  for (int mu = 0; mu < 3; ++mu) {
    const Eigen::Matrix3d gm = jet.e.transpose() * dc[mu];  // (alpha, beta)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) g(a, mu, b) = gm(a, b);
  }
  return g;
}

Tensor3d christoffel(const FrameJet& jet) {
  const Eigen::Matrix3d ginv = metric_contra(jet.e);
  const auto dg = metric_cov_derivatives(jet);
  Tensor3d ch;
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += ginv(b, d) * (dg[a](c, d) + dg[c](a, d) - dg[d](a, c));
        ch(b, a, c) = 0.5 * s;
      }
  return ch;
}

Tensor3d torsion_from_connection(const FrameJet& jet) {
  const Tensor3d g = teleparallel(jet);
  Tensor3d t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) t(a, b, c) = g(a, b, c) - g(a, c, b);
  return t;
}

Tensor3d torsion_from_exterior_derivative(const FrameJet& jet) {
  const auto dc = coframe_derivatives(jet);
  Tensor3d t;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += jet.e(j, a) * (dc[b](j, c) - dc[c](j, b));
        t(a, b, c) = s;
      }
  return t;
}

Eigen::Matrix3d star_torsion(const Tensor3d& T, const Eigen::Matrix3d& g_contra, double vol) {
  const Tensor3d up = raise_last_two(T, g_contra);
  Eigen::Matrix3d st = Eigen::Matrix3d::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) s += up(a, c, d) * levi_civita(c, d, b);
      st(a, b) = 0.5 * s * vol;
    }
  return st;
}

Eigen::Matrix3d star_torsion_via_curl(const FrameJet& jet) {
  const auto dc = coframe_derivatives(jet);
  const Eigen::Matrix3d ginv = metric_contra(jet.e);
  const double vol = volume_density(jet.e);
  Eigen::Matrix3d st = Eigen::Matrix3d::Zero();
  for (int j = 0; j < 3; ++j) {
    Eigen::Matrix3d de;  // (d e^j)_{mu nu}
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu) de(mu, nu) = dc[mu](j, nu) - dc[nu](j, mu);
    const Eigen::Matrix3d up = ginv * de * ginv.transpose();
    Eigen::Vector3d curl = Eigen::Vector3d::Zero();
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) curl[b] += 0.5 * up(c, d) * levi_civita(c, d, b) * vol;
    st += jet.e.row(j).transpose() * curl.transpose();
  }
  return st;
}

double axial_dual(const Tensor3d& T, const Eigen::Matrix3d& g_contra, const Eigen::Matrix3d& g_cov) {
  Tensor3d low;  // T_{abc}
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int d = 0; d < 3; ++d) s += g_cov(a, d) * T(d, b, c);
        low(a, b, c) = s;
      }
  Tensor3d ax;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) ax(a, b, c) = (low(a, b, c) + low(c, a, b) + low(b, c, a)) / 3.0;
  const double vol = std::sqrt(g_cov.determinant());
  double s = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int eps = levi_civita(a, b, c);
        if (eps == 0) continue;
        double up = 0.0;  // ax^{abc}
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q)
            for (int r = 0; r < 3; ++r) up += g_contra(a, p) * g_contra(b, q) * g_contra(c, r) * ax(p, q, r);
        s += up * eps;
      }
  return s * vol / 6.0;
}

double axial_dual_coframe_formula(const FrameJet& jet) {
  const Eigen::Matrix3d c = coframe(jet.e);
  const auto dc = coframe_derivatives(jet);
  double bracket = 0.0;
  for (int k = 0; k < 3; ++k) {
    bracket += c(k, 0) * dc[1](k, 2) + c(k, 1) * dc[2](k, 0) + c(k, 2) * dc[0](k, 1);
    bracket -= c(k, 0) * dc[2](k, 1) + c(k, 1) * dc[0](k, 2) + c(k, 2) * dc[1](k, 0);
  }
  const double sqrt_det_contra = std::sqrt(metric_contra(jet.e).determinant());
  return bracket * sqrt_det_contra / 3.0;
}

TeleparallelResiduals teleparallel_residuals(const FrameJet& jet) {
  TeleparallelResiduals r;
  const Tensor3d gam = teleparallel(jet);
  const Eigen::Matrix3d gcov = metric_cov(jet.e);
  const Eigen::Matrix3d ginv = metric_contra(jet.e);
  const auto dgcov = metric_cov_derivatives(jet);

  for (int mu = 0; mu < 3; ++mu)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a) {
        double s = jet.de[mu](j, a);
        for (int b = 0; b < 3; ++b) s += gam(a, mu, b) * jet.e(j, b);
        r.frame_parallel = std::max(r.frame_parallel, std::abs(s));
      }

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double s = dgcov[a](b, c);
        for (int d = 0; d < 3; ++d) s -= gam(d, a, b) * gcov(d, c) + gam(d, a, c) * gcov(b, d);
        r.metric_compatibility = std::max(r.metric_compatibility, std::abs(s));
      }

  const Tensor3d T = torsion_from_connection(jet);
  const Tensor3d ch = christoffel(jet);
  // T_b^a_c = g_{bm} g^{an} T^m_{nc}
  auto mixed = [&](int b, int a, int c) {
    double s = 0.0;
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) s += gcov(b, m) * ginv(a, n) * T(m, n, c);
    return s;
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double contortion = 0.5 * (T(a, b, c) + mixed(b, a, c) + mixed(c, a, b));
        r.contortion = std::max(r.contortion, std::abs(gam(a, b, c) - ch(a, b, c) - contortion));
      }
  return r;
}

}  // namespace local

// ---------------------------------------------------------------------------

Eigen::Matrix3d frame_from_symbol(const SymbolValue& sigma) {
  Eigen::Matrix3d e;
  for (int a = 0; a < 3; ++a) {
    e(0, a) = sigma[a](0, 1).real();
    e(1, a) = -sigma[a](0, 1).imag();
    e(2, a) = sigma[a](0, 0).real();
  }
  return e;
}

PrincipalSymbolField symbol_from_frame(const FrameField& frame) {
  return PrincipalSymbolField(frame.e.map([](const Eigen::Matrix3d& e) { return local::symbol(e); }));
}

FrameField decode_frame(const PrincipalSymbolField& sym) {
  FrameField frame{sym.sigma().map(frame_from_symbol)};
  for (std::size_t i = 0; i < frame.e.size(); ++i) {
    const Eigen::Matrix3d& e = frame.e[i];
    const double det = e.determinant();
    if (det == 0.0 || !std::isfinite(det))
      throw EllipticityError("symbol is not elliptic at grid point " + std::to_string(i), i, det);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(e);
    const auto sv = svd.singularValues();
    if (sv[0] > kMaxFrameCondition * sv[2])
      throw EllipticityError("frame is degenerate (condition number above 1e8) at grid point " + std::to_string(i), i,
                             det);
  }
  return frame;
}

namespace {

MetricField metric_from_contra(GridField<Eigen::Matrix3d> g_contra) {
  GridField<Eigen::Matrix3d> g_cov = g_contra.map([](const Eigen::Matrix3d& g) -> Eigen::Matrix3d { return g.inverse(); });
  GridField<double> vol = g_contra.map([](const Eigen::Matrix3d& g) { return 1.0 / std::sqrt(g.determinant()); });
  return MetricField{std::move(g_contra), std::move(g_cov), std::move(vol)};
}

}  // namespace

MetricField decode_metric(const PrincipalSymbolField& sym) {
  auto det = [](const Eigen::Matrix2cd& m) { return m.determinant().real(); };
  GridField<Eigen::Matrix3d> g = sym.sigma().map([&](const SymbolValue& s) {
    Eigen::Matrix3d out;
    for (int a = 0; a < 3; ++a) out(a, a) = -det(s[a]);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) out(a, b) = out(b, a) = -0.5 * (det(s[a] + s[b]) - det(s[a]) - det(s[b]));
    return out;
  });
  for (std::size_t i = 0; i < g.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g[i], Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw EllipticityError("decoded metric is not positive definite at grid point " + std::to_string(i), i,
                             g[i].determinant());
  }
  return metric_from_contra(std::move(g));
}

MetricField metric_from_frame(const FrameField& frame) {
  return metric_from_contra(frame.e.map([](const Eigen::Matrix3d& e) { return local::metric_contra(e); }));
}

CoframeField coframe(const FrameField& frame, const MetricField& metric) {
  std::vector<Eigen::Matrix3d> c(frame.e.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = frame.e[i] * metric.g_cov[i];  // e^k_b = g_{bc} e_k^c
  return CoframeField{GridField<Eigen::Matrix3d>(frame.e.chart(), std::move(c))};
}

FrameField gram_schmidt(const FrameField& frame, const GridField<Eigen::Matrix3d>& g_cov) {
  std::vector<Eigen::Matrix3d> out(frame.e.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Eigen::Matrix3d& g = g_cov[i];
    auto inner = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& v) { return u.dot(g * v); };
    Eigen::Matrix3d e = frame.e[i];
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d v = e.row(j).transpose();
      for (int k = 0; k < j; ++k) {
        const Eigen::Vector3d u = e.row(k).transpose();
        v -= inner(v, u) * u;
      }
      const double nrm = std::sqrt(inner(v, v));
      if (!(nrm > 0.0)) throw InputError("gram_schmidt: frame is degenerate at grid point " + std::to_string(i));
      e.row(j) = (v / nrm).transpose();
    }
    out[i] = e;
  }
  return FrameField{GridField<Eigen::Matrix3d>(frame.e.chart(), std::move(out))};
}

int frame_charge(const FrameField& frame) {
  int sign = 0;
  for (std::size_t i = 0; i < frame.e.size(); ++i) {
    const double det = frame.e[i].determinant();
    if (det == 0.0) throw EllipticityError("frame is degenerate at grid point " + std::to_string(i), i, det);
    const int s = det > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) throw InputError("frame orientation changes sign at grid point " + std::to_string(i));
  }
  return sign;
}

int topological_charge(const PrincipalSymbolField& sym) {
  const FrameField frame = decode_frame(sym);
  const MetricField metric = decode_metric(sym);
  int sign = 0;
  for (std::size_t i = 0; i < sym.sigma().size(); ++i) {
    const SymbolValue& s = sym.sigma()[i];
    const cplx tr = (s[0] * s[1] * s[2]).trace();
    const double by_trace = (cplx(0.0, -0.5) * metric.vol[i] * tr).real();
    const double by_det = frame.e[i].determinant() > 0 ? 1.0 : -1.0;
    if (std::abs(std::abs(by_trace) - 1.0) > kChargeRounding)
      throw ConsistencyError("topological charge deviates from +-1 at grid point " + std::to_string(i));
    if (std::abs(by_trace - by_det) > 1e-10)
      throw ConsistencyError("topological charge formulas disagree at grid point " + std::to_string(i));
    const int c = by_det > 0 ? 1 : -1;
    if (sign == 0) sign = c;
    if (c != sign) throw InputError("topological charge changes sign at grid point " + std::to_string(i));
  }
  return sign;
}

GridField<FrameJet> frame_jets(const FrameField& frame) {
  const std::array<GridField<Eigen::Matrix3d>, 3> de{spectral_derivative(frame.e, 1), spectral_derivative(frame.e, 2),
                                                     spectral_derivative(frame.e, 3)};
  std::vector<FrameJet> jets(frame.e.size());
  for (std::size_t i = 0; i < jets.size(); ++i) {
    jets[i].e = frame.e[i];
    for (int mu = 0; mu < 3; ++mu) jets[i].de[mu] = de[mu][i];
  }
  return GridField<FrameJet>(frame.e.chart(), std::move(jets));
}

GridField<Tensor3d> teleparallel_coefficients(const FrameField& frame, const MetricField& metric) {
  const GridField<FrameJet> jets = frame_jets(frame);
  for (std::size_t i = 0; i < jets.size(); ++i) {
    const Eigen::Matrix3d c = local::coframe(jets[i].e);
    if (!c.allFinite()) throw ConsistencyError("coframe inversion failed at grid point " + std::to_string(i));
    if ((frame.e[i] * metric.g_cov[i] - c).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff()))
      throw InputError("metric is not the metric of the frame at grid point " + std::to_string(i));
  }
  return jets.map([](const FrameJet& j) { return local::teleparallel(j); });
}

TeleparallelResiduals teleparallel_check(const FrameField& frame) {
  TeleparallelResiduals out;
  const GridField<FrameJet> jets = frame_jets(frame);
  for (const FrameJet& j : jets.values()) {
    const TeleparallelResiduals r = local::teleparallel_residuals(j);
    out.frame_parallel = std::max(out.frame_parallel, r.frame_parallel);
    out.metric_compatibility = std::max(out.metric_compatibility, r.metric_compatibility);
    out.contortion = std::max(out.contortion, r.contortion);
  }
  return out;
}

TorsionBundle torsion(const FrameField& frame, const MetricField& metric, double tol) {
  const GridField<FrameJet> jets = frame_jets(frame);
  const PeriodicChart& chart = frame.e.chart();
  std::vector<Tensor3d> t(jets.size());
  std::vector<Eigen::Matrix3d> st(jets.size());
  std::vector<double> ax(jets.size());
  TorsionRouteResiduals res;
  double scale = 1.0;

  for (std::size_t i = 0; i < jets.size(); ++i) {
    const FrameJet& jet = jets[i];
    t[i] = local::torsion_from_connection(jet);
    const Tensor3d t_ext = local::torsion_from_exterior_derivative(jet);
    st[i] = local::star_torsion(t[i], metric.g_contra[i], metric.vol[i]);
    const Eigen::Matrix3d st_curl = local::star_torsion_via_curl(jet);
    ax[i] = local::axial_dual(t[i], metric.g_contra[i], metric.g_cov[i]);

    scale = std::max({scale, t[i].max_abs(), st[i].cwiseAbs().maxCoeff()});
    res.connection_vs_exterior = std::max(res.connection_vs_exterior, (t[i] - t_ext).max_abs());
    res.star_vs_curl = std::max(res.star_vs_curl, (st[i] - st_curl).cwiseAbs().maxCoeff());
    res.axial_vs_trace = std::max(res.axial_vs_trace, std::abs(ax[i] - st[i].trace() / 3.0));
    res.axial_vs_coframe = std::max(res.axial_vs_coframe, std::abs(ax[i] - local::axial_dual_coframe_formula(jet)));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) res.antisymmetry = std::max(res.antisymmetry, std::abs(t[i](a, b, c) + t[i](a, c, b)));
  }
  if (res.max() > tol * scale)
    throw ConsistencyError("torsion routes disagree (max residual " + std::to_string(res.max()) +
                           "); differentiation resolution is likely too low");

  return TorsionBundle{GridField<Tensor3d>(chart, std::move(t)), GridField<Eigen::Matrix3d>(chart, std::move(st)),
                       GridField<double>(chart, std::move(ax)), frame_charge(frame), res};
}

AntisymmetricTensor hodge_star(const Eigen::Matrix3d& g_cov, const AntisymmetricTensor& q) {
  const int deg = q.degree();
  const Eigen::Matrix3d g_contra = g_cov.inverse();
  const double vol = std::sqrt(g_cov.determinant());

  // Q^{i1..iq}
  AntisymmetricTensor up(deg);
  for (int flat = 0; flat < ipow3(deg); ++flat) {
    int out_idx[3] = {0, 0, 0};
    for (int p = deg - 1, f = flat; p >= 0; --p, f /= 3) out_idx[p] = f % 3;
    double s = 0.0;
    for (int src = 0; src < ipow3(deg); ++src) {
      int in_idx[3] = {0, 0, 0};
      for (int p = deg - 1, f = src; p >= 0; --p, f /= 3) in_idx[p] = f % 3;
      double w = q.component(src);
      for (int p = 0; p < deg; ++p) w *= g_contra(out_idx[p], in_idx[p]);
      s += w;
    }
    up.component(flat) = s;
  }

  AntisymmetricTensor out(3 - deg);
  for (int of = 0; of < ipow3(3 - deg); ++of) {
    int o[3] = {0, 0, 0};
    for (int p = 2 - deg, f = of; p >= 0; --p, f /= 3) o[p] = f % 3;
    double s = 0.0;
    for (int inf = 0; inf < ipow3(deg); ++inf) {
      int full[3] = {0, 0, 0};
      for (int p = deg - 1, f = inf; p >= 0; --p, f /= 3) full[p] = f % 3;
      for (int p = 0; p < 3 - deg; ++p) full[deg + p] = o[p];
      s += up.component(inf) * levi_civita(full[0], full[1], full[2]);
    }
    out.component(of) = s * vol / factorial(deg);
  }
  return out;
}

GridField<AntisymmetricTensor> hodge_star(const MetricField& metric, const GridField<AntisymmetricTensor>& q) {
  std::vector<AntisymmetricTensor> out;
  out.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out.push_back(hodge_star(metric.g_cov[i], q[i]));
  return GridField<AntisymmetricTensor>(q.chart(), std::move(out));
}

SymbolInterpolant::SymbolInterpolant(const PrincipalSymbolField& sym) : interp_(sym.sigma()) {}

FrameJet SymbolInterpolant::frame_jet(const Eigen::Vector3d& x) const {
  FrameJet jet;
  jet.e = frame_from_symbol(sigma(x));
  for (int mu = 0; mu < 3; ++mu) jet.de[mu] = frame_from_symbol(sigma_derivative(x, mu + 1));
  return jet;
}

Covector parallel_transport(const SymbolInterpolant& sym, const Covector& xi, const Eigen::Vector3d& from,
                            const Eigen::Vector3d& to) {
  const Eigen::Matrix3d e_from = frame_from_symbol(sym.sigma(from));
  const Eigen::Matrix3d e_to = frame_from_symbol(sym.sigma(to));
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(e_to);
  const auto sv = svd.singularValues();
  if (!(sv[2] > 0.0) || sv[0] > kMaxTransportCondition * sv[2])
    throw ConsistencyError("parallel transport system is singular or ill-conditioned");
  return Covector(Eigen::Vector3d(e_to.colPivHouseholderQr().solve(e_from * xi.xi)));
}

Covector parallel_transport(const PrincipalSymbolField& sym, const Covector& xi, const Eigen::Vector3d& from,
                            const Eigen::Vector3d& to) {
  return parallel_transport(SymbolInterpolant(sym), xi, from, to);
}

}  // namespace diracgeom
