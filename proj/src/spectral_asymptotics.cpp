#include "diracgeom/spectral_asymptotics.hpp"

#include <sstream>

namespace diracgeom {

namespace {

constexpr double kAnchorFloor = 1e-3;
constexpr double kFourPiSq = 4.0 * pi * pi;
constexpr double kEightPiSq = 8.0 * pi * pi;

Eigen::Matrix2cd principal(const SymbolValue& s, const Covector& xi) { return xi[0] * s[0] + xi[1] * s[1] + xi[2] * s[2]; }

// Unnormalised eigenvector of a trace-free Hermitian [[a, b], [conj b, -a]] for +h.
Spinor raw_eigenvector(const Eigen::Matrix2cd& m, double h) {
  const double a = m(0, 0).real();
  const cplx b = m(0, 1);
  const Spinor first(a + h, std::conj(b));
  const Spinor second(b, h - a);
  return first.squaredNorm() >= second.squaredNorm() ? first : second;
}

Spinor anchored(Spinor v, int anchor) {
  v.normalize();
  const cplx c = v[anchor];
  return v * (std::conj(c) / std::abs(c));
}

// v+ and its x- and xi-derivatives at one point of the cotangent bundle.
struct SpinorJet {
  double h = 0.0;
  Spinor v;
  std::array<Spinor, 3> dx, dxi;
};

SpinorJet spinor_jet(const SymbolJet& jet, const Covector& xi, const CurvatureOptions& opt) {
  const EigenpairOnFiber ep = eigenpair_on_fiber(jet.sigma, xi, opt.anchor);
  SpinorJet out;
  out.h = ep.h_plus;
  out.v = ep.v_plus;
  const Spinor vm = metric_spinor() * ep.v_plus.conjugate();
  for (int al = 0; al < 3; ++al) {
    // first-order perturbation; the omitted multiple of v+ is a gauge term
    out.dxi[al] = vm * (vm.adjoint() * jet.sigma[al] * ep.v_plus)(0, 0) / (2.0 * ep.h_plus);
  }
  const Eigen::Matrix2cd a1 = principal(jet.sigma, xi);
  auto v_at = [&](int mu, double t) {
    const Eigen::Matrix2cd m = a1 + t * principal(jet.d[mu], xi);
    const double h = std::sqrt(std::norm(m(0, 0)) + std::norm(m(0, 1)));
    return anchored(raw_eigenvector(m, h), ep.anchor);
  };
  for (int mu = 0; mu < 3; ++mu) {
    const double t = opt.step;
    const Spinor d_coarse = (v_at(mu, t) - v_at(mu, -t)) / (2.0 * t);
    const Spinor d_fine = (v_at(mu, t / 2) - v_at(mu, -t / 2)) / t;
    out.dx[mu] = (4.0 * d_fine - d_coarse) / 3.0;
  }
  return out;
}

// {P, Q, R} with P = u^*, R = w for spinor jets.
cplx bracket(const std::array<Spinor, 3>& u_x, const std::array<Spinor, 3>& u_xi, const Eigen::Matrix2cd& q,
             const std::array<Spinor, 3>& w_x, const std::array<Spinor, 3>& w_xi) {
  cplx s{};
  for (int al = 0; al < 3; ++al)
    s += (u_x[al].adjoint() * q * w_xi[al])(0, 0) - (u_xi[al].adjoint() * q * w_x[al])(0, 0);
  return s;
}

// *T^{ab} (both indices up) and the charge at a point.
std::pair<Eigen::Matrix3d, int> star_torsion_up(const FrameJet& jet) {
  const Eigen::Matrix3d g = local::metric_contra(jet.e);
  const Eigen::Matrix3d st = local::star_torsion_via_curl(jet);
  return {st * g, jet.e.determinant() > 0 ? 1 : -1};
}

GridField<double> closed_b2(const PrincipalSymbolField& sym) {
  const FrameField frame = decode_frame(sym);
  const MetricField metric = decode_metric(sym);
  const TorsionBundle tb = torsion(frame, metric);
  std::vector<double> out(frame.e.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = tb.charge * tb.star_T[i].trace() * metric.vol[i] / kEightPiSq;
  return GridField<double>(sym.chart(), std::move(out));
}

}  // namespace

FrameJet SymbolJet::frame_jet() const {
  FrameJet j;
  j.e = frame_from_symbol(sigma);
  for (int mu = 0; mu < 3; ++mu) j.de[mu] = frame_from_symbol(d[mu]);
  return j;
}

EigenpairOnFiber eigenpair_on_fiber(const SymbolValue& sigma, const Covector& xi, int anchor) {
  if (!xi.xi.allFinite() || xi.xi.isZero(0.0)) throw InputError("eigenpair_on_fiber: covector must be finite and non-zero");
  if (anchor < -1 || anchor > 1) throw InputError("eigenpair_on_fiber: anchor must be -1, 0 or 1");
  const Eigen::Matrix2cd m = principal(sigma, xi);
  EigenpairOnFiber ep;
  ep.h_plus = std::sqrt(std::norm(m(0, 0)) + std::norm(m(0, 1)));
  if (!(ep.h_plus > 0.0)) throw EllipticityError("principal symbol vanishes at a non-zero covector", 0, 0.0);
  Spinor v = raw_eigenvector(m, ep.h_plus).normalized();
  int a = anchor;
  if (a < 0) a = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
  if (std::abs(v[a]) < kAnchorFloor) a = 1 - a;
  if (std::abs(v[a]) < kAnchorFloor) throw ConsistencyError("eigenvector gauge anchor degenerates for both components");
  ep.anchor = a;
  ep.v_plus = anchored(v, a);
  ep.projector = (m + ep.h_plus * Eigen::Matrix2cd::Identity()) / (2.0 * ep.h_plus);
  return ep;
}

SymbolJet symbol_jet(const SymbolInterpolant& sym, const Eigen::Vector3d& x) {
  return SymbolJet{sym.sigma(x), {sym.sigma_derivative(x, 1), sym.sigma_derivative(x, 2), sym.sigma_derivative(x, 3)}};
}

GridField<SymbolJet> symbol_jets(const PrincipalSymbolField& sym) {
  const auto& s = sym.sigma();
  const std::array<GridField<SymbolValue>, 3> d{spectral_derivative(s, 1), spectral_derivative(s, 2),
                                                spectral_derivative(s, 3)};
  std::vector<SymbolJet> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = SymbolJet{s[i], {d[0][i], d[1][i], d[2][i]}};
  return GridField<SymbolJet>(sym.chart(), std::move(out));
}

GridField<double> a_density(const MetricField& metric) {
  return metric.vol.map([](double v) { return v / (6.0 * pi * pi); });
}

GridField<double> b1_density(const FirstOrderOperator& op, B1Route route) {
  const MatrixField sub = subprincipal_symbol(op);
  const MetricField metric = decode_metric(op.sigma());
  std::vector<double> out(sub.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (route == B1Route::closed_form) {
      out[i] = -sub[i].trace().real() * metric.vol[i] / kFourPiSq;
    } else {
      const SymbolValue& s = op.sigma().sigma()[i];
      out[i] = fiber_ball_quadrature(metric.g_contra[i], [&](const Covector& xi) {
        const Eigen::Matrix2cd m = principal(s, xi);
        const double h = std::sqrt(std::norm(m(0, 0)) + std::norm(m(0, 1)));
        const Eigen::Matrix2cd proj = (m + h * Eigen::Matrix2cd::Identity()) / (2.0 * h);
        return -3.0 * (sub[i] * proj).trace().real();
      });
    }
  }
  return GridField<double>(op.chart(), std::move(out));
}

double u1_curvature(const SymbolJet& jet, const Covector& xi, const CurvatureOptions& opt) {
  const SpinorJet sj = spinor_jet(jet, xi, opt);
  const cplx value = cplx(0.0, -1.0) * bracket(sj.dx, sj.dxi, Eigen::Matrix2cd::Identity(), sj.dx, sj.dxi);
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real())))
    throw ConsistencyError("u1_curvature: bracket has a non-negligible imaginary part");
  return value.real();
}

double u1_curvature(const SymbolInterpolant& sym, const Eigen::Vector3d& x, const Covector& xi,
                    const CurvatureOptions& opt) {
  return u1_curvature(symbol_jet(sym, x), xi, opt);
}

double u1_curvature(const PrincipalSymbolField& sym, const Eigen::Vector3d& x, const Covector& xi,
                    const CurvatureOptions& opt) {
  return u1_curvature(SymbolInterpolant(sym), x, xi, opt);
}

double u1_from_torsion(const FrameJet& jet, const Covector& xi) {
  const auto [star_up, c] = star_torsion_up(jet);
  const double h2 = xi.xi.dot(local::metric_contra(jet.e) * xi.xi);
  return 0.5 * c * xi.xi.dot(star_up * xi.xi) / std::pow(h2, 1.5);
}

double b2_trace_free_contribution(const FrameJet& jet) {
  const Eigen::Matrix3d g = local::metric_contra(jet.e);
  const auto [star_up, c] = star_torsion_up(jet);
  const double trace = local::star_torsion_via_curl(jet).trace();
  const Eigen::Matrix3d trace_free = star_up - (trace / 3.0) * g;
  return fiber_ball_quadrature(g, [&](const Covector& xi) {
    return 2.25 * c * xi.xi.dot(trace_free * xi.xi) / xi.xi.dot(g * xi.xi);
  });
}

B2Routes b2_density(const PrincipalSymbolField& sym, const B2Options& opt) {
  B2Routes r{closed_b2(sym), std::nullopt, std::nullopt, 0.0};
  if (!opt.ball_route && !opt.curvature_route) return r;

  const GridField<SymbolJet> jets = symbol_jets(sym);
  const BallRule curvature_rule = BallRule::make(16, SphereRule::octahedral14());
  std::vector<double> ball(jets.size()), curv(jets.size());
  std::size_t worst = 0;
  for (std::size_t i = 0; i < jets.size(); ++i) {
    const FrameJet fj = jets[i].frame_jet();
    const Eigen::Matrix3d g = local::metric_contra(fj.e);
    double dis = 0.0;
    if (opt.ball_route) {
      const auto [star_up, c] = star_torsion_up(fj);
      ball[i] = fiber_ball_quadrature(g, [&](const Covector& xi) {
        return 2.25 * c * xi.xi.dot(star_up * xi.xi) / xi.xi.dot(g * xi.xi);
      });
      dis = std::max(dis, std::abs(ball[i] - r.closed_form[i]));
    }
    if (opt.curvature_route) {
      curv[i] = fiber_ball_quadrature(
          g,
          [&](const Covector& xi) {
            return 4.5 * std::sqrt(xi.xi.dot(g * xi.xi)) * u1_curvature(jets[i], xi);
          },
          curvature_rule);
      dis = std::max(dis, std::abs(curv[i] - r.closed_form[i]));
    }
    if (dis > r.max_disagreement) {
      r.max_disagreement = dis;
      worst = i;
    }
  }
  if (opt.ball_route) r.ball_quadrature = GridField<double>(sym.chart(), std::move(ball));
  if (opt.curvature_route) r.curvature_quadrature = GridField<double>(sym.chart(), std::move(curv));
  if (r.max_disagreement > opt.tol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "b2 routes disagree at grid point " << worst << ": closed form " << r.closed_form[worst];
    if (r.ball_quadrature) msg << ", ball quadrature " << (*r.ball_quadrature)[worst];
    if (r.curvature_quadrature) msg << ", curvature quadrature " << (*r.curvature_quadrature)[worst];
    throw ConsistencyError(msg.str());
  }
  return r;
}

double PoissonCheck::max_residual() const {
  return std::max({std::abs(original - rewritten), projector_bracket, curvature_sum});
}

PoissonCheck generalized_poisson_check(const SymbolJet& jet, const Covector& xi, const CurvatureOptions& opt) {
  const SpinorJet p = spinor_jet(jet, xi, opt);
  const Eigen::Matrix2cd a1 = principal(jet.sigma, xi);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const cplx i(0.0, 1.0);

  PoissonCheck out;
  const cplx orig = 1.5 * i * bracket(p.dx, p.dxi, a1 - 2.0 * p.h * id, p.dx, p.dxi);
  const cplx rew = -4.5 * i * p.h * bracket(p.dx, p.dxi, id, p.dx, p.dxi);
  out.original = orig.real();
  out.rewritten = rew.real();
  out.projector_bracket = std::abs(bracket(p.dx, p.dxi, p.v * p.v.adjoint(), p.dx, p.dxi));

  const Eigen::Matrix2cd& eps = metric_spinor();
  std::array<Spinor, 3> m_x, m_xi;
  for (int al = 0; al < 3; ++al) {
    m_x[al] = eps * p.dx[al].conjugate();
    m_xi[al] = eps * p.dxi[al].conjugate();
  }
  out.curvature_sum = std::abs(bracket(p.dx, p.dxi, id, p.dx, p.dxi) + bracket(m_x, m_xi, id, m_x, m_xi));
  return out;
}

AsymptoticCoefficients b_density(const FirstOrderOperator& op) {
  const PrincipalSymbolField& sym = op.sigma();
  const FrameField frame = decode_frame(sym);
  const MetricField metric = decode_metric(sym);
  const TorsionBundle tb = torsion(frame, metric);
  const MatrixField sub = subprincipal_symbol(op);

  AsymptoticCoefficients r{a_density(metric), b1_density(op), closed_b2(sym), GridField<double>(sym.chart(), 0.0)};
  for (std::size_t i = 0; i < sub.size(); ++i) {
    r.b_density[i] =
        (3.0 * tb.charge * tb.axial_dual[i] - 2.0 * sub[i].trace().real()) * metric.vol[i] / kEightPiSq;
    const double split = r.b1_density[i] + r.b2_density[i];
    if (std::abs(split - r.b_density[i]) > 1e-9)
      throw ConsistencyError("b closed form differs from b1 + b2 at grid point " + std::to_string(i));
  }
  r.a_global = grid_integral(r.a_density);
  r.b_global = grid_integral(r.b_density);
  return r;
}

}  // namespace diracgeom
