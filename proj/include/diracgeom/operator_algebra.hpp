#pragma once

// First-order 2x2 operators on half-densities, A = -i sigma^alpha d_alpha + a0,
// with full symbol A_1 + A_0 = sigma^alpha xi_alpha + a0.

#include <variant>

#include "diracgeom/symbol_geometry.hpp"

namespace diracgeom {

using Spinor = Eigen::Vector2cd;
using MatrixField = GridField<Eigen::Matrix2cd>;

class FirstOrderOperator {
 public:
  /// Validates that the coefficients share a chart and that the operator is
  /// formally self-adjoint (A_sub Hermitian within 1e-10).
  FirstOrderOperator(PrincipalSymbolField sigma, MatrixField a0);

  const PrincipalSymbolField& sigma() const { return sigma_; }
  const MatrixField& a0() const { return a0_; }
  const PeriodicChart& chart() const { return sigma_.chart(); }

  /// Same principal part, zeroth-order term a0 + extra.
  FirstOrderOperator plus_potential(const MatrixField& extra) const;
  FirstOrderOperator plus_potential(const Eigen::Matrix2cd& constant) const;
  FirstOrderOperator negated() const;

 private:
  PrincipalSymbolField sigma_;
  MatrixField a0_;
};

/// R: M -> SU(2) sampled on the grid.
class GaugeField {
 public:
  explicit GaugeField(MatrixField r);

  const MatrixField& r() const { return r_; }
  const PeriodicChart& chart() const { return r_.chart(); }

 private:
  MatrixField r_;
};

struct DiracVerdict {
  bool is_dirac = false;
  double cond_a_residual = 0.0;   // max || A_sub - (tr A_sub / 2) I ||
  double cond_b_residual = 0.0;   // max |b(x)|
  double reconstructed_gap = 0.0; // max coefficient difference to the rebuilt Dirac operator
  double tolerance = 0.0;
};

/// A coordinate loop along which the sign-continued SU(2) lift does not close.
struct Obstruction {
  int axis = 0;              // 1..3
  std::size_t point = 0;     // grid index at the failing edge (its start)
  double closing_trace = 0.0;  // Re tr(R_a^* R_b) across the failing edge
};

using LiftResult = std::variant<GaugeField, Obstruction>;

/// The massless Dirac operator on half-densities built from an orthonormal frame.
FirstOrderOperator dirac_operator(const FrameField& frame, const MetricField& metric);
/// Pointwise zeroth-order term of the Dirac operator from a frame jet.
Eigen::Matrix2cd dirac_a0(const FrameJet& jet);

/// A_sub = a0 + (i/2) d_alpha sigma^alpha.
MatrixField subprincipal_symbol(const FirstOrderOperator& op);

/// sup over the grid of || A_sub(W) - (3c/4) *T^ax I ||.
double verify_subprincipal_lemma(const FrameField& frame, const MetricField& metric);

/// R op R^* for R special unitary.
FirstOrderOperator gauge_transform(const FirstOrderOperator& op, const GaugeField& R);
/// U op U^* for any unitary field U (no determinant condition).
FirstOrderOperator unitary_transform(const FirstOrderOperator& op, const MatrixField& U);

/// O_j^k = (1/2) tr(s_j R s^k R^*).
Eigen::Matrix3d so3_from_su2(const Eigen::Matrix2cd& R);
/// One of the two R with so3_from_su2(R) = O.
Eigen::Matrix2cd su2_from_so3(const Eigen::Matrix3d& O);

/// Continuous SU(2) lift of a rotation field, or the loop that obstructs it.
LiftResult su2_lift(const GridField<Eigen::Matrix3d>& O);

/// v -> eps conj(v).
GridField<Spinor> charge_conjugation(const GridField<Spinor>& v);

/// A v using Fourier differentiation.
GridField<Spinor> apply_operator(const FirstOrderOperator& op, const GridField<Spinor>& v);

/// Conditions (a) and (b) of the massless-Dirac characterisation plus a
/// reconstruction from the principal symbol.
DiracVerdict check_dirac(const FirstOrderOperator& op, double tol = 1e-7);

}  // namespace diracgeom
