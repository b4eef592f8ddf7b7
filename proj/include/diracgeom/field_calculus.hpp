#pragma once

// Periodic-chart numerics on the 3-torus [0, 2pi)^3: grids, grid fields,
// Fourier differentiation and analysis, trigonometric interpolation and
// quadrature over the metric unit ball in a momentum fibre.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "diracgeom/errors.hpp"

namespace diracgeom {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform grid with n points per axis on [0, 2pi)^3. Point order is
/// row-major with x^1 fastest: index = i1 + n*(i2 + n*i3).
class PeriodicChart {
 public:
  explicit PeriodicChart(int n_points_per_axis);

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  double spacing() const { return two_pi / n_; }
  double cell_volume() const { return spacing() * spacing() * spacing(); }

  std::size_t index(int i1, int i2, int i3) const;
  /// Index with periodic wrap-around of every coordinate.
  std::size_t wrapped_index(int i1, int i2, int i3) const;
  std::array<int, 3> multi_index(std::size_t idx) const;
  Eigen::Vector3d point(std::size_t idx) const;

  friend bool operator==(const PeriodicChart&, const PeriodicChart&) = default;

 private:
  int n_;
};

/// A covector xi_alpha in a momentum fibre.
struct Covector {
  Eigen::Vector3d xi = Eigen::Vector3d::Zero();

  Covector() = default;
  explicit Covector(const Eigen::Vector3d& v) : xi(v) {}
  Covector(double x1, double x2, double x3) : xi(x1, x2, x3) {}

  double operator[](int alpha) const { return xi[alpha]; }
};

/// Dense rank-3 real tensor, index order (a, b, c) as written in the
/// formula that produced it.
struct Tensor3d {
  Eigen::Matrix<double, 27, 1> c = Eigen::Matrix<double, 27, 1>::Zero();

  double& operator()(int a, int b, int g) { return c[9 * a + 3 * b + g]; }
  double operator()(int a, int b, int g) const { return c[9 * a + 3 * b + g]; }
  double max_abs() const { return c.cwiseAbs().maxCoeff(); }

  Tensor3d operator-(const Tensor3d& o) const {
    Tensor3d r;
    r.c = c - o.c;
    return r;
  }
};

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class V>
concept ScalarValue = std::is_floating_point_v<V> || is_complex<V>::value;

template <class V>
concept EigenFixed = std::is_base_of_v<Eigen::DenseBase<V>, V> && (V::SizeAtCompileTime > 0);

// Flat component access so that differentiation and Fourier analysis work
// componentwise on every value type we store on a grid.
template <class V>
struct components;

template <ScalarValue V>
struct components<V> {
  using scalar = V;
  static constexpr int count = 1;
  static scalar& get(V& v, int) { return v; }
  static const scalar& get(const V& v, int) { return v; }
};

template <EigenFixed V>
struct components<V> {
  using scalar = typename V::Scalar;
  static constexpr int count = V::SizeAtCompileTime;
  static scalar& get(V& v, int k) { return v.data()[k]; }
  static const scalar& get(const V& v, int k) { return v.data()[k]; }
};

template <>
struct components<Tensor3d> {
  using scalar = double;
  static constexpr int count = 27;
  static scalar& get(Tensor3d& v, int k) { return v.c[k]; }
  static const scalar& get(const Tensor3d& v, int k) { return v.c[k]; }
};

template <class T, std::size_t N>
struct components<std::array<T, N>> {
  using inner = components<T>;
  using scalar = typename inner::scalar;
  static constexpr int count = static_cast<int>(N) * inner::count;
  static scalar& get(std::array<T, N>& v, int k) { return inner::get(v[k / inner::count], k % inner::count); }
  static const scalar& get(const std::array<T, N>& v, int k) {
    return inner::get(v[k / inner::count], k % inner::count);
  }
};

}  // namespace detail

/// Values of type V sampled at every point of a periodic chart.
template <class V>
class GridField {
 public:
  using value_type = V;

  GridField(const PeriodicChart& chart, const V& fill) : chart_(chart), values_(chart.size(), fill) {}

  GridField(const PeriodicChart& chart, std::vector<V> values) : chart_(chart), values_(std::move(values)) {
    if (values_.size() != chart_.size()) throw InputError("GridField: value count does not match chart size");
  }

  /// Samples f(x) at every grid point.
  template <class F>
  static GridField sample(const PeriodicChart& chart, F&& f) {
    std::vector<V> v;
    v.reserve(chart.size());
    for (std::size_t i = 0; i < chart.size(); ++i) v.push_back(f(chart.point(i)));
    return GridField(chart, std::move(v));
  }

  const PeriodicChart& chart() const { return chart_; }
  std::size_t size() const { return values_.size(); }

  V& operator[](std::size_t i) { return values_[i]; }
  const V& operator[](std::size_t i) const { return values_[i]; }
  const V& at(int i1, int i2, int i3) const { return values_[chart_.index(i1, i2, i3)]; }

  std::span<const V> values() const { return values_; }

  template <class F>
  auto map(F&& f) const {
    using W = std::decay_t<std::invoke_result_t<F, const V&>>;
    std::vector<W> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(f(v));
    return GridField<W>(chart_, std::move(out));
  }

 private:
  PeriodicChart chart_;
  std::vector<V> values_;
};

/// Real n x n Fourier differentiation matrix on the uniform periodic grid
/// (Nyquist mode discarded). Exact for trigonometric polynomials of degree < n/2.
Eigen::MatrixXd fourier_differentiation_matrix(int n);

/// d f / d x^axis with axis in 1..3, componentwise on any stored value type.
template <class V>
GridField<V> spectral_derivative(const GridField<V>& f, int axis) {
  if (axis < 1 || axis > 3) throw InputError("spectral_derivative: axis must be 1, 2 or 3");
  using traits = detail::components<V>;
  using S = typename traits::scalar;
  const PeriodicChart& chart = f.chart();
  const int n = chart.n();
  const Eigen::MatrixXd d = fourier_differentiation_matrix(n);
  const std::size_t stride = axis == 1 ? 1 : (axis == 2 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n);

  GridField<V> out = f;
  std::vector<S> line(n);
  for (std::size_t base = 0; base < chart.size(); ++base) {
    if (chart.multi_index(base)[axis - 1] != 0) continue;
    for (int c = 0; c < traits::count; ++c) {
      for (int l = 0; l < n; ++l) line[l] = traits::get(f[base + l * stride], c);
      for (int j = 0; j < n; ++j) {
        S acc{};
        for (int l = 0; l < n; ++l) acc += d(j, l) * line[l];
        traits::get(out[base + j * stride], c) = acc;
      }
    }
  }
  return out;
}

/// Fourier coefficients c_m of a grid field, f(x) = sum_m c_m exp(i m.x),
/// for integer modes m with every component in [-n/2, n/2 - 1].
class FourierSeries {
 public:
  FourierSeries(int n, int component_count, std::vector<cplx> data);

  int n() const { return n_; }
  int component_count() const { return ncomp_; }

  /// Coefficient of mode m (zero outside the resolved band).
  cplx operator()(const Eigen::Vector3i& m, int component = 0) const;

  /// Modes whose largest component magnitude exceeds tol.
  std::vector<Eigen::Vector3i> support(double tol = 1e-13) const;

  /// Inverse transform of one component back onto the grid.
  GridField<cplx> synthesize(const PeriodicChart& chart, int component = 0) const;

  /// sum_m |c_m|^2 for one component.
  double parseval_sum(int component = 0) const;

  /// Assembles the coefficient of mode m as a value of type W
  /// (e.g. Eigen::Matrix2cd for a matrix-valued field).
  template <class W>
  W value(const Eigen::Vector3i& m) const {
    using traits = detail::components<W>;
    W w{};
    for (int c = 0; c < traits::count; ++c) traits::get(w, c) = (*this)(m, c);
    return w;
  }

 private:
  std::size_t slot(const Eigen::Vector3i& m) const;

  int n_;
  int ncomp_;
  std::vector<cplx> data_;  // [mode slot][component]
};

namespace detail {
FourierSeries dft3(const PeriodicChart& chart, int ncomp, const std::vector<cplx>& samples);
}

template <class V>
FourierSeries fourier_modes(const GridField<V>& f) {
  using traits = detail::components<V>;
  std::vector<cplx> samples(f.size() * traits::count);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int c = 0; c < traits::count; ++c) samples[i * traits::count + c] = cplx(traits::get(f[i], c));
  return detail::dft3(f.chart(), traits::count, samples);
}

/// Trigonometric interpolant of a grid field, evaluable with its gradient at
/// arbitrary points. Only resolved (non-Nyquist) modes above a relative
/// threshold are kept, so band-limited fields evaluate cheaply and exactly.
template <class V>
class TrigInterpolant {
 public:
  using traits = detail::components<V>;

  explicit TrigInterpolant(const GridField<V>& f, double relative_tol = 1e-15) {
    const FourierSeries series = fourier_modes(f);
    const int half = f.chart().n() / 2;
    double scale = 0.0;
    for (const auto& m : series.support(0.0))
      for (int c = 0; c < traits::count; ++c) scale = std::max(scale, std::abs(series(m, c)));
    for (const auto& m : series.support(relative_tol * std::max(scale, 1e-300))) {
      if ((m.array().abs() == half).any()) continue;
      modes_.push_back(m.cast<double>());
      std::array<cplx, traits::count> coef{};
      for (int c = 0; c < traits::count; ++c) coef[c] = series(m, c);
      coefs_.push_back(coef);
    }
  }

  std::size_t mode_count() const { return modes_.size(); }

  V operator()(const Eigen::Vector3d& x) const { return evaluate(x, -1); }

  /// d/dx^(axis) of the interpolant, axis in 1..3.
  V derivative(const Eigen::Vector3d& x, int axis) const {
    if (axis < 1 || axis > 3) throw InputError("TrigInterpolant: axis must be 1, 2 or 3");
    return evaluate(x, axis - 1);
  }

 private:
  V evaluate(const Eigen::Vector3d& x, int axis) const {
    std::array<cplx, traits::count> acc{};
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      cplx phase = std::exp(cplx(0.0, modes_[k].dot(x)));
      if (axis >= 0) phase *= cplx(0.0, modes_[k][axis]);
      for (int c = 0; c < traits::count; ++c) acc[c] += coefs_[k][c] * phase;
    }
    V v{};
    for (int c = 0; c < traits::count; ++c) {
      if constexpr (detail::is_complex<typename traits::scalar>::value)
        traits::get(v, c) = acc[c];
      else
        traits::get(v, c) = acc[c].real();
    }
    return v;
  }

  std::vector<Eigen::Vector3d> modes_;
  std::vector<std::array<cplx, traits::count>> coefs_;
};

/// Grid-trapezoid integral over the torus (spectrally exact for periodic
/// band-limited integrands).
double grid_integral(const GridField<double>& f);

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Quadrature on the unit sphere S^2; weights sum to 4 pi.
struct SphereRule {
  std::vector<Eigen::Vector3d> directions;
  std::vector<double> weights;

  /// Gauss-Legendre in cos(theta) x trapezoid in phi, exact for spherical
  /// harmonics up to the given degree.
  static SphereRule product(int degree);
  /// 14-point octahedral rule (6 vertices + 8 cube corners), degree 5.
  static SphereRule octahedral14();
};

/// Radial Gauss-Legendre on [0,1] x a sphere rule.
struct BallRule {
  QuadratureRule1D radial;
  SphereRule sphere;

  static BallRule make(int radial_nodes, SphereRule sphere);
};

/// 32 radial nodes x degree-17 product sphere rule.
const BallRule& default_ball_rule();

/// Inverse principal square root of a symmetric positive-definite matrix;
/// throws InputError otherwise.
Eigen::Matrix3d inverse_sqrt_spd(const Eigen::Matrix3d& g);

/// Integral of integrand(xi) over { g^{mu nu} xi_mu xi_nu < 1 } with the
/// measure (2 pi)^{-3} d xi. g_contra is the contravariant metric at the point.
template <class F>
double fiber_ball_quadrature(const Eigen::Matrix3d& g_contra, F&& integrand, const BallRule& rule = default_ball_rule()) {
  const Eigen::Matrix3d to_ball = inverse_sqrt_spd(g_contra);
  const double jacobian = to_ball.determinant();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.radial.nodes.size(); ++i) {
    const double r = rule.radial.nodes[i];
    const double wr = rule.radial.weights[i] * r * r;
    double shell = 0.0;
    for (std::size_t k = 0; k < rule.sphere.directions.size(); ++k)
      shell += rule.sphere.weights[k] * integrand(Covector(to_ball * (r * rule.sphere.directions[k])));
    sum += wr * shell;
  }
  return jacobian * sum / (two_pi * two_pi * two_pi);
}

}  // namespace diracgeom
