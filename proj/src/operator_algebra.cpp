#include "diracgeom/operator_algebra.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <string>

#include "diracgeom/spectral_asymptotics.hpp"

namespace diracgeom {

namespace {

constexpr double kSelfAdjointTol = 1e-10;
constexpr double kUnitaryTol = 1e-12;
constexpr double kOrthonormalTol = 1e-10;

double max_entry(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

double operator_norm(const Eigen::Matrix2cd& m) {
  return Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()[0];
}

MatrixField adjoint_field(const MatrixField& u) {
  return u.map([](const Eigen::Matrix2cd& m) -> Eigen::Matrix2cd { return m.adjoint(); });
}

FirstOrderOperator conjugate_by(const FirstOrderOperator& op, const MatrixField& u) {
  if (!(u.chart() == op.chart())) throw InputError("gauge field and operator live on different charts");
  const MatrixField u_star = adjoint_field(u);
  const std::array<MatrixField, 3> du_star{spectral_derivative(u_star, 1), spectral_derivative(u_star, 2),
                                           spectral_derivative(u_star, 3)};
  std::vector<SymbolValue> sigma(u.size());
  std::vector<Eigen::Matrix2cd> a0(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const SymbolValue& s = op.sigma().sigma()[i];
    Eigen::Matrix2cd a = u[i] * op.a0()[i] * u_star[i];
    for (int al = 0; al < 3; ++al) {
      sigma[i][al] = u[i] * s[al] * u_star[i];
      // product-rule term of U (-i sigma d) U^*
      a += cplx(0.0, -1.0) * u[i] * s[al] * du_star[al][i];
      sigma[i][al] = 0.5 * (sigma[i][al] + sigma[i][al].adjoint()).eval();
    }
    a0[i] = a;
  }
  return FirstOrderOperator(PrincipalSymbolField(GridField<SymbolValue>(op.chart(), std::move(sigma))),
                            MatrixField(op.chart(), std::move(a0)));
}

}  // namespace

FirstOrderOperator::FirstOrderOperator(PrincipalSymbolField sigma, MatrixField a0)
    : sigma_(std::move(sigma)), a0_(std::move(a0)) {
  if (!(sigma_.chart() == a0_.chart())) throw InputError("operator coefficients live on different charts");
  const MatrixField sub = subprincipal_symbol(*this);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const double scale = std::max(1.0, max_entry(sub[i]));
    if (max_entry(sub[i] - sub[i].adjoint()) > kSelfAdjointTol * scale)
      throw InputError("operator is not formally self-adjoint: subprincipal symbol is not Hermitian at grid point " +
                       std::to_string(i));
  }
}

FirstOrderOperator FirstOrderOperator::plus_potential(const MatrixField& extra) const {
  std::vector<Eigen::Matrix2cd> a(a0_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a0_[i] + extra[i];
  return FirstOrderOperator(sigma_, MatrixField(chart(), std::move(a)));
}

FirstOrderOperator FirstOrderOperator::plus_potential(const Eigen::Matrix2cd& constant) const {
  return plus_potential(MatrixField(chart(), constant));
}

FirstOrderOperator FirstOrderOperator::negated() const {
  auto s = sigma_.sigma().map([](const SymbolValue& v) { return SymbolValue{-v[0], -v[1], -v[2]}; });
  return FirstOrderOperator(PrincipalSymbolField(std::move(s)),
                            a0_.map([](const Eigen::Matrix2cd& m) -> Eigen::Matrix2cd { return -m; }));
}

GaugeField::GaugeField(MatrixField r) : r_(std::move(r)) {
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const Eigen::Matrix2cd& m = r_[i];
    if (max_entry(m * m.adjoint() - Eigen::Matrix2cd::Identity()) > kUnitaryTol ||
        std::abs(m.determinant() - 1.0) > kUnitaryTol)
      throw InputError("gauge field is not special unitary at grid point " + std::to_string(i));
  }
}

Eigen::Matrix2cd dirac_a0(const FrameJet& jet) {
  const Eigen::Matrix3d c = local::coframe(jet.e);
  const Tensor3d ch = local::christoffel(jet);  // (beta, alpha, gamma)
  const SymbolValue up = local::symbol(jet.e);
  std::array<Eigen::Matrix2cd, 3> down;
  for (int b = 0; b < 3; ++b) down[b] = PauliBasis::combine(c.col(b));  // sigma_beta = s^j e^j_beta
  const cplx i(0.0, 1.0);

  Eigen::Matrix2cd a0 = Eigen::Matrix2cd::Zero();
  for (int al = 0; al < 3; ++al) {
    for (int b = 0; b < 3; ++b) {
      Eigen::Matrix2cd cov = PauliBasis::combine(jet.de[al].col(b));  // d_alpha sigma^beta
      for (int g = 0; g < 3; ++g) cov += ch(b, al, g) * up[g];
      a0 += -0.25 * i * up[al] * down[b] * cov;
    }
    double contracted = 0.0;
    for (int b = 0; b < 3; ++b) contracted += ch(b, al, b);
    a0 += 0.5 * i * contracted * up[al];
  }
  return a0;
}

FirstOrderOperator dirac_operator(const FrameField& frame, const MetricField& metric) {
  double residual = 0.0;
  for (std::size_t i = 0; i < frame.e.size(); ++i) {
    const Eigen::Matrix3d& g = metric.g_contra[i];
    residual = std::max(residual, (local::metric_contra(frame.e[i]) - g).cwiseAbs().maxCoeff() /
                                      std::max(1.0, g.cwiseAbs().maxCoeff()));
  }
  if (residual > kOrthonormalTol)
    throw InputError("frame is not orthonormal for the metric (residual " + std::to_string(residual) + ")");
  const GridField<FrameJet> jets = frame_jets(frame);
  return FirstOrderOperator(symbol_from_frame(frame), jets.map([](const FrameJet& j) { return dirac_a0(j); }));
}

MatrixField subprincipal_symbol(const FirstOrderOperator& op) {
  const auto& s = op.sigma().sigma();
  std::array<GridField<SymbolValue>, 3> ds{spectral_derivative(s, 1), spectral_derivative(s, 2),
                                           spectral_derivative(s, 3)};
  std::vector<Eigen::Matrix2cd> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = op.a0()[i] + cplx(0.0, 0.5) * (ds[0][i][0] + ds[1][i][1] + ds[2][i][2]);
  return MatrixField(op.chart(), std::move(out));
}

double verify_subprincipal_lemma(const FrameField& frame, const MetricField& metric) {
  const MatrixField sub = subprincipal_symbol(dirac_operator(frame, metric));
  const TorsionBundle tb = torsion(frame, metric);
  double worst = 0.0;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const Eigen::Matrix2cd expect = (0.75 * tb.charge * tb.axial_dual[i]) * Eigen::Matrix2cd::Identity();
    worst = std::max(worst, operator_norm(sub[i] - expect));
  }
  return worst;
}

FirstOrderOperator gauge_transform(const FirstOrderOperator& op, const GaugeField& R) { return conjugate_by(op, R.r()); }

FirstOrderOperator unitary_transform(const FirstOrderOperator& op, const MatrixField& U) {
  for (std::size_t i = 0; i < U.size(); ++i)
    if (max_entry(U[i] * U[i].adjoint() - Eigen::Matrix2cd::Identity()) > kUnitaryTol)
      throw InputError("field is not unitary at grid point " + std::to_string(i));
  return conjugate_by(op, U);
}

Eigen::Matrix3d so3_from_su2(const Eigen::Matrix2cd& R) {
  Eigen::Matrix3d o;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) o(j, k) = 0.5 * (PauliBasis::s(j) * R * PauliBasis::s(k) * R.adjoint()).trace().real();
  return o;
}

Eigen::Matrix2cd su2_from_so3(const Eigen::Matrix3d& O) {
  // R = exp(-i theta/2 n.s) acts on Pauli vectors as the rotation by theta about n.
  const Eigen::Quaterniond q(O);
  const cplx i(0.0, 1.0);
  return q.w() * Eigen::Matrix2cd::Identity() -
         i * (q.x() * PauliBasis::s(0) + q.y() * PauliBasis::s(1) + q.z() * PauliBasis::s(2));
}

LiftResult su2_lift(const GridField<Eigen::Matrix3d>& O) {
  const PeriodicChart& chart = O.chart();
  const int n = chart.n();
  for (std::size_t i = 0; i < O.size(); ++i) {
    const auto mi = chart.multi_index(i);
    for (int ax = 0; ax < 3; ++ax) {
      std::array<int, 3> nb = mi;
      ++nb[ax];
      const Eigen::Matrix3d& ob = O[chart.wrapped_index(nb[0], nb[1], nb[2])];
      if (((O[i].transpose() * ob).trace() - 1.0) / 2.0 < -1e-12)
        throw InputError("rotation field jumps by more than pi/2 between neighbouring grid points");
    }
  }

  std::vector<Eigen::Matrix2cd> r(O.size());
  auto continue_from = [&](std::size_t to, std::size_t from) {
    Eigen::Matrix2cd l = su2_from_so3(O[to]);
    if ((r[from].adjoint() * l).trace().real() < 0.0) l = -l;
    r[to] = l;
  };
  r[0] = su2_from_so3(O[0]);
  if (r[0].trace().real() < 0.0) r[0] = -r[0];
  for (int i1 = 1; i1 < n; ++i1) continue_from(chart.index(i1, 0, 0), chart.index(i1 - 1, 0, 0));
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 1; i2 < n; ++i2) continue_from(chart.index(i1, i2, 0), chart.index(i1, i2 - 1, 0));
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 1; i3 < n; ++i3) continue_from(chart.index(i1, i2, i3), chart.index(i1, i2, i3 - 1));

  for (int ax = 0; ax < 3; ++ax)
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::array<int, 3> nb = chart.multi_index(i);
      ++nb[ax];
      const double t = (r[i].adjoint() * r[chart.wrapped_index(nb[0], nb[1], nb[2])]).trace().real();
      if (t < 0.0) return Obstruction{ax + 1, i, t};
    }
  return GaugeField(MatrixField(chart, std::move(r)));
}

GridField<Spinor> charge_conjugation(const GridField<Spinor>& v) {
  const Eigen::Matrix2cd& eps = metric_spinor();
  return v.map([&](const Spinor& s) -> Spinor { return eps * s.conjugate(); });
}

GridField<Spinor> apply_operator(const FirstOrderOperator& op, const GridField<Spinor>& v) {
  if (!(v.chart() == op.chart())) throw InputError("field and operator live on different charts");
  const std::array<GridField<Spinor>, 3> dv{spectral_derivative(v, 1), spectral_derivative(v, 2),
                                            spectral_derivative(v, 3)};
  std::vector<Spinor> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const SymbolValue& s = op.sigma().sigma()[i];
    Spinor acc = op.a0()[i] * v[i];
    for (int al = 0; al < 3; ++al) acc += cplx(0.0, -1.0) * (s[al] * dv[al][i]);
    out[i] = acc;
  }
  return GridField<Spinor>(v.chart(), std::move(out));
}

DiracVerdict check_dirac(const FirstOrderOperator& op, double tol) {
  if (!(tol > 0.0)) throw InputError("check_dirac: tolerance must be positive");
  DiracVerdict v;
  v.tolerance = tol;
  const MatrixField sub = subprincipal_symbol(op);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const Eigen::Matrix2cd traceless = sub[i] - 0.5 * sub[i].trace() * Eigen::Matrix2cd::Identity();
    v.cond_a_residual = std::max(v.cond_a_residual, operator_norm(traceless));
  }
  const AsymptoticCoefficients coeffs = b_density(op);
  for (double b : coeffs.b_density.values()) v.cond_b_residual = std::max(v.cond_b_residual, std::abs(b));

  const FrameField frame = decode_frame(op.sigma());
  const FirstOrderOperator rebuilt = dirac_operator(frame, decode_metric(op.sigma()));
  for (std::size_t i = 0; i < sub.size(); ++i) {
    v.reconstructed_gap = std::max(v.reconstructed_gap, max_entry(rebuilt.a0()[i] - op.a0()[i]));
    for (int al = 0; al < 3; ++al)
      v.reconstructed_gap =
          std::max(v.reconstructed_gap, max_entry(rebuilt.sigma().sigma()[i][al] - op.sigma().sigma()[i][al]));
  }
  v.is_dirac = v.cond_a_residual <= tol && v.cond_b_residual <= tol && v.reconstructed_gap <= tol;
  return v;
}

}  // namespace diracgeom
