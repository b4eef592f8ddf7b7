#pragma once

// Geometry encoded in a trace-free Hermitian principal symbol
// A_1(x, xi) = sigma^alpha(x) xi_alpha: frame, metric, coframe, topological
// charge, teleparallel connection, torsion and its axial part.
//
// Conventions: frames are stored as 3x3 matrices e(j, alpha) = e_j^alpha
// (row = frame index, column = tensor index); coframes likewise
// c(k, beta) = e^k_beta. All pointwise geometry is computed from the
// 1-jet (e, d_mu e) of the frame, so identities between routes hold to
// rounding whenever the jet is exact.

#include <Eigen/Dense>

#include <array>
#include <optional>

#include "diracgeom/field_calculus.hpp"
#include "diracgeom/pauli.hpp"

namespace diracgeom {

using SymbolValue = std::array<Eigen::Matrix2cd, 3>;  // sigma^1, sigma^2, sigma^3

/// sigma^alpha(x) on a grid. Every matrix is Hermitian and trace-free.
class PrincipalSymbolField {
 public:
  explicit PrincipalSymbolField(GridField<SymbolValue> sigma);

  const GridField<SymbolValue>& sigma() const { return sigma_; }
  const PeriodicChart& chart() const { return sigma_.chart(); }

  /// A_1 at grid point i.
  Eigen::Matrix2cd principal(std::size_t i, const Covector& xi) const;

 private:
  GridField<SymbolValue> sigma_;
};

struct FrameField {
  GridField<Eigen::Matrix3d> e;  // e(j, alpha)
};

struct CoframeField {
  GridField<Eigen::Matrix3d> e_dual;  // e^k_beta
};

struct MetricField {
  GridField<Eigen::Matrix3d> g_contra;
  GridField<Eigen::Matrix3d> g_cov;
  GridField<double> vol;  // sqrt(det g_{alpha beta})
};

/// Frame value and its first coordinate derivatives at one point;
/// de[mu](j, alpha) = d e_j^alpha / d x^mu.
struct FrameJet {
  Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
  std::array<Eigen::Matrix3d, 3> de{Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Zero()};
};

struct TorsionRouteResiduals {
  double connection_vs_exterior = 0.0;  // antisymmetrised Gamma vs e_j (x) de^j
  double star_vs_curl = 0.0;            // *T from T vs e_j (x) curl e^j
  double axial_vs_trace = 0.0;          // *T^ax vs tr(*T)/3
  double axial_vs_coframe = 0.0;        // *T^ax vs explicit coframe formula
  double antisymmetry = 0.0;

  double max() const;
};

struct TorsionBundle {
  GridField<Tensor3d> T;              // T^alpha_{beta gamma}
  GridField<Eigen::Matrix3d> star_T;  // *T^alpha_beta (row alpha, column beta)
  GridField<double> axial_dual;       // *T^ax
  int charge;
  TorsionRouteResiduals residuals;
};

struct TeleparallelResiduals {
  double frame_parallel = 0.0;       // max |d_mu e_j^a + Gamma^a_{mu b} e_j^b|
  double metric_compatibility = 0.0; // max |nabla_a g_{bc}|
  double contortion = 0.0;           // max |Gamma - Christoffel - contortion|
};

/// Antisymmetric covariant tensor of degree 0..3, dense storage (3^degree entries).
class AntisymmetricTensor {
 public:
  explicit AntisymmetricTensor(int degree);

  int degree() const { return degree_; }
  double& operator()(std::initializer_list<int> idx);
  double operator()(std::initializer_list<int> idx) const;
  double& component(int flat) { return c_[flat]; }
  double component(int flat) const { return c_[flat]; }
  int component_count() const;

  static AntisymmetricTensor scalar(double v);
  static AntisymmetricTensor one_form(const Eigen::Vector3d& w);
  static AntisymmetricTensor two_form(const Eigen::Matrix3d& q);
  /// The 3-form with Q_{123} = v.
  static AntisymmetricTensor three_form(double v);

  double max_abs_difference(const AntisymmetricTensor& o) const;

 private:
  int degree_;
  Eigen::Matrix<double, 27, 1> c_ = Eigen::Matrix<double, 27, 1>::Zero();
};

// ---------------------------------------------------------------------------
// Pointwise geometry from a frame jet.
namespace local {

Eigen::Matrix3d metric_contra(const Eigen::Matrix3d& e);
Eigen::Matrix3d metric_cov(const Eigen::Matrix3d& e);
Eigen::Matrix3d coframe(const Eigen::Matrix3d& e);
double volume_density(const Eigen::Matrix3d& e);
SymbolValue symbol(const Eigen::Matrix3d& e);

/// d_mu e^k_beta, from the chain rule d(E^{-T}) = -C (dE)^T C.
std::array<Eigen::Matrix3d, 3> coframe_derivatives(const FrameJet& jet);
std::array<Eigen::Matrix3d, 3> metric_cov_derivatives(const FrameJet& jet);
std::array<Eigen::Matrix3d, 3> metric_contra_derivatives(const FrameJet& jet);

/// Gamma^alpha_{mu beta} = e_k^alpha d_mu e^k_beta, stored (alpha, mu, beta).
Tensor3d teleparallel(const FrameJet& jet);
/// Christoffel symbols {beta; alpha gamma}, stored (beta, alpha, gamma).
Tensor3d christoffel(const FrameJet& jet);

Tensor3d torsion_from_connection(const FrameJet& jet);
Tensor3d torsion_from_exterior_derivative(const FrameJet& jet);

/// *T^alpha_beta = (1/2) T^{alpha gamma delta} eps_{gamma delta beta} sqrt(det g).
Eigen::Matrix3d star_torsion(const Tensor3d& T, const Eigen::Matrix3d& g_contra, double vol);
/// *T = e_j (x) curl e^j.
Eigen::Matrix3d star_torsion_via_curl(const FrameJet& jet);

/// Hodge dual of the totally antisymmetric part of T.
double axial_dual(const Tensor3d& T, const Eigen::Matrix3d& g_contra, const Eigen::Matrix3d& g_cov);
/// Explicit coframe expression for *T^ax.
double axial_dual_coframe_formula(const FrameJet& jet);

TeleparallelResiduals teleparallel_residuals(const FrameJet& jet);

}  // namespace local

// ---------------------------------------------------------------------------
// Field-level operations.

/// sigma^alpha = s^j e_j^alpha
PrincipalSymbolField symbol_from_frame(const FrameField& frame);

/// e_1 = Re sigma_{12}, e_2 = -Im sigma_{12}, e_3 = sigma_{11}. Throws
/// EllipticityError if det e vanishes or cond(e) > 1e8 at a grid point.
FrameField decode_frame(const PrincipalSymbolField& sym);

/// g^{alpha beta} by polarisation of det A_1 = -g^{alpha beta} xi_alpha xi_beta.
MetricField decode_metric(const PrincipalSymbolField& sym);
/// g^{alpha beta} = delta^{jk} e_j^alpha e_k^beta.
MetricField metric_from_frame(const FrameField& frame);

CoframeField coframe(const FrameField& frame, const MetricField& metric);

/// Gram-Schmidt of each frame against a prescribed covariant metric. Never applied implicitly.
FrameField gram_schmidt(const FrameField& frame, const GridField<Eigen::Matrix3d>& g_cov);

/// sgn det e, cross-checked against -(i/2) sqrt(det g) tr(sigma^1 sigma^2 sigma^3).
int topological_charge(const PrincipalSymbolField& sym);
/// sgn det e on a frame field; constant over the grid or InputError.
int frame_charge(const FrameField& frame);

/// Frame jets on the grid, derivatives by Fourier differentiation.
GridField<FrameJet> frame_jets(const FrameField& frame);

/// Gamma^alpha_{mu beta} on the grid, stored (alpha, mu, beta).
GridField<Tensor3d> teleparallel_coefficients(const FrameField& frame, const MetricField& metric);
TeleparallelResiduals teleparallel_check(const FrameField& frame);

/// Torsion, starred torsion and axial dual; all routes must agree within tol.
TorsionBundle torsion(const FrameField& frame, const MetricField& metric, double tol = 1e-10);

/// Hodge star with eps_{123} = +1 at a point with covariant metric g_cov.
AntisymmetricTensor hodge_star(const Eigen::Matrix3d& g_cov, const AntisymmetricTensor& q);
GridField<AntisymmetricTensor> hodge_star(const MetricField& metric, const GridField<AntisymmetricTensor>& q);

/// The symbol and its derivatives at arbitrary (off-grid) points via
/// trigonometric interpolation.
class SymbolInterpolant {
 public:
  explicit SymbolInterpolant(const PrincipalSymbolField& sym);

  SymbolValue sigma(const Eigen::Vector3d& x) const { return interp_(x); }
  SymbolValue sigma_derivative(const Eigen::Vector3d& x, int axis) const { return interp_.derivative(x, axis); }
  FrameJet frame_jet(const Eigen::Vector3d& x) const;

 private:
  TrigInterpolant<SymbolValue> interp_;
};

/// Frame matrix e(j, alpha) read off a symbol value.
Eigen::Matrix3d frame_from_symbol(const SymbolValue& sigma);

/// Solves A_1(to, xi~) = A_1(from, xi) for xi~.
Covector parallel_transport(const SymbolInterpolant& sym, const Covector& xi, const Eigen::Vector3d& from,
                            const Eigen::Vector3d& to);
Covector parallel_transport(const PrincipalSymbolField& sym, const Covector& xi, const Eigen::Vector3d& from,
                            const Eigen::Vector3d& to);

}  // namespace diracgeom
