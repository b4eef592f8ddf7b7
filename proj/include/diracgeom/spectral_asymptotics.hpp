#pragma once

// Weyl coefficients a(x), b(x) = b1(x) + b2(x) of the two-term counting
// asymptotics, by closed forms and by the defining fibre integrals.

#include <optional>

#include "diracgeom/operator_algebra.hpp"

namespace diracgeom {

struct AsymptoticCoefficients {
  GridField<double> a_density;
  GridField<double> b1_density;
  GridField<double> b2_density;
  GridField<double> b_density;
  double a_global = 0.0;
  double b_global = 0.0;
};

/// Positive eigenvalue of A_1(x, xi), its gauge-anchored eigenvector and the projector.
struct EigenpairOnFiber {
  double h_plus = 0.0;
  Spinor v_plus = Spinor::Zero();
  Eigen::Matrix2cd projector = Eigen::Matrix2cd::Zero();
  int anchor = 0;  // component made real and positive
};

/// The symbol and its three coordinate derivatives at one point.
struct SymbolJet {
  SymbolValue sigma;
  std::array<SymbolValue, 3> d;

  FrameJet frame_jet() const;
};

/// anchor = -1 picks the larger-modulus component; an explicit anchor whose
/// modulus is below 1e-3 is switched to the other component.
EigenpairOnFiber eigenpair_on_fiber(const SymbolValue& sigma, const Covector& xi, int anchor = -1);

SymbolJet symbol_jet(const SymbolInterpolant& sym, const Eigen::Vector3d& x);
GridField<SymbolJet> symbol_jets(const PrincipalSymbolField& sym);

GridField<double> a_density(const MetricField& metric);

enum class B1Route { closed_form, quadrature };
GridField<double> b1_density(const FirstOrderOperator& op, B1Route route = B1Route::closed_form);

struct CurvatureOptions {
  int anchor = -1;
  double step = 1e-4;  // central-difference step, refined once by Richardson extrapolation
};

/// -i {[v+]^*, v+} at (x, xi).
double u1_curvature(const SymbolJet& jet, const Covector& xi, const CurvatureOptions& opt = {});
double u1_curvature(const SymbolInterpolant& sym, const Eigen::Vector3d& x, const Covector& xi,
                    const CurvatureOptions& opt = {});
double u1_curvature(const PrincipalSymbolField& sym, const Eigen::Vector3d& x, const Covector& xi,
                    const CurvatureOptions& opt = {});

/// (c/2) *T^{ab} xi_a xi_b / (g^{mn} xi_m xi_n)^{3/2}, the torsion expression for the curvature.
double u1_from_torsion(const FrameJet& jet, const Covector& xi);

struct B2Options {
  bool ball_route = true;       // quadrature of (9c/4) *T xi xi / (g xi xi)
  bool curvature_route = true;  // quadrature of (9/2) h+ u1
  double tol = 1e-6;
};

struct B2Routes {
  GridField<double> closed_form;
  std::optional<GridField<double>> ball_quadrature;
  std::optional<GridField<double>> curvature_quadrature;
  double max_disagreement = 0.0;
};

/// Throws ConsistencyError, quoting all routes at the worst grid point, when enabled routes disagree beyond tol.
B2Routes b2_density(const PrincipalSymbolField& sym, const B2Options& opt = {});

/// Ball integral of the trace-free part of *T in the b2 integrand (vanishes analytically).
double b2_trace_free_contribution(const FrameJet& jet);

struct PoissonCheck {
  double original = 0.0;           // (3i/2) {[v+]^*, A_1 - 2h+ I, v+}
  double rewritten = 0.0;          // -(9i/2) h+ {[v+]^*, v+}
  double projector_bracket = 0.0;  // |{[v+]^*, P+, v+}|
  double curvature_sum = 0.0;      // |{[v+]^*, v+} + {[v-]^*, v-}|

  double max_residual() const;
};

PoissonCheck generalized_poisson_check(const SymbolJet& jet, const Covector& xi, const CurvatureOptions& opt = {});

/// Closed-form coefficients, with b1 and b2 cross-checked against b within 1e-9.
AsymptoticCoefficients b_density(const FirstOrderOperator& op);

}  // namespace diracgeom
