#include "diracgeom/field_calculus.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace diracgeom {

PeriodicChart::PeriodicChart(int n_points_per_axis) : n_(n_points_per_axis) {
  if (n_ < 4 || n_ % 2 != 0) throw InputError("PeriodicChart: points per axis must be even and >= 4");
}

std::size_t PeriodicChart::index(int i1, int i2, int i3) const {
  return static_cast<std::size_t>(i1) + static_cast<std::size_t>(n_) * (static_cast<std::size_t>(i2) + static_cast<std::size_t>(n_) * i3);
}

std::size_t PeriodicChart::wrapped_index(int i1, int i2, int i3) const {
  auto wrap = [this](int i) { return ((i % n_) + n_) % n_; };
  return index(wrap(i1), wrap(i2), wrap(i3));
}

std::array<int, 3> PeriodicChart::multi_index(std::size_t idx) const {
  const auto n = static_cast<std::size_t>(n_);
  return {static_cast<int>(idx % n), static_cast<int>((idx / n) % n), static_cast<int>(idx / (n * n))};
}

Eigen::Vector3d PeriodicChart::point(std::size_t idx) const {
  const auto mi = multi_index(idx);
  return Eigen::Vector3d(mi[0], mi[1], mi[2]) * spacing();
}

Eigen::MatrixXd fourier_differentiation_matrix(int n) {
  const double h = two_pi / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      const int k = j - l;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(j, l) = 0.5 * sign / std::tan(0.5 * k * h);
    }
  return d;
}

FourierSeries::FourierSeries(int n, int component_count, std::vector<cplx> data)
    : n_(n), ncomp_(component_count), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(n_) * n_ * n_ * ncomp_)
    throw InputError("FourierSeries: coefficient count mismatch");
}

std::size_t FourierSeries::slot(const Eigen::Vector3i& m) const {
  auto w = [this](int k) { return static_cast<std::size_t>((k + n_) % n_); };
  return w(m[0]) + static_cast<std::size_t>(n_) * (w(m[1]) + static_cast<std::size_t>(n_) * w(m[2]));
}

cplx FourierSeries::operator()(const Eigen::Vector3i& m, int component) const {
  const int half = n_ / 2;
  if ((m.array() < -half).any() || (m.array() >= half).any()) return {};
  return data_[slot(m) * ncomp_ + component];
}

std::vector<Eigen::Vector3i> FourierSeries::support(double tol) const {
  std::vector<Eigen::Vector3i> out;
  const int half = n_ / 2;
  for (int k3 = -half; k3 < half; ++k3)
    for (int k2 = -half; k2 < half; ++k2)
      for (int k1 = -half; k1 < half; ++k1) {
        const Eigen::Vector3i m(k1, k2, k3);
        const std::size_t s = slot(m) * ncomp_;
        bool keep = false;
        for (int c = 0; c < ncomp_ && !keep; ++c) keep = std::abs(data_[s + c]) > tol;
        if (keep) out.push_back(m);
      }
  return out;
}

GridField<cplx> FourierSeries::synthesize(const PeriodicChart& chart, int component) const {
  if (chart.n() != n_) throw InputError("FourierSeries::synthesize: chart size mismatch");
  std::vector<Eigen::Vector3i> modes = support(0.0);
  return GridField<cplx>::sample(chart, [&](const Eigen::Vector3d& x) {
    cplx acc{};
    for (const auto& m : modes) acc += data_[slot(m) * ncomp_ + component] * std::exp(cplx(0.0, m.cast<double>().dot(x)));
    return acc;
  });
}

double FourierSeries::parseval_sum(int component) const {
  double s = 0.0;
  for (std::size_t k = component; k < data_.size(); k += ncomp_) s += std::norm(data_[k]);
  return s;
}

namespace detail {

FourierSeries dft3(const PeriodicChart& chart, int ncomp, const std::vector<cplx>& samples) {
  const int n = chart.n();
  Eigen::MatrixXcd w(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) w(k, j) = std::exp(cplx(0.0, -two_pi * k * j / n)) / static_cast<double>(n);

  std::vector<cplx> cur = samples, next(samples.size());
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t strides[3] = {1, nn, nn * nn};
  std::vector<cplx> line(n);
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t stride = strides[axis];
    for (std::size_t base = 0; base < chart.size(); ++base) {
      if (chart.multi_index(base)[axis] != 0) continue;
      for (int c = 0; c < ncomp; ++c) {
        for (int j = 0; j < n; ++j) line[j] = cur[(base + j * stride) * ncomp + c];
        for (int k = 0; k < n; ++k) {
          cplx acc{};
          for (int j = 0; j < n; ++j) acc += w(k, j) * line[j];
          next[(base + k * stride) * ncomp + c] = acc;
        }
      }
    }
    std::swap(cur, next);
  }
  return FourierSeries(n, ncomp, std::move(cur));
}

}  // namespace detail

double grid_integral(const GridField<double>& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.chart().cell_volume();
}

QuadratureRule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InputError("gauss_legendre: need at least one node");
  // (P_n(x), P_{n-1}(x)) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };
  QuadratureRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = legendre(x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    rule.weights[n - 1 - i] = 0.5 * (b - a) * 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

SphereRule SphereRule::product(int degree) {
  if (degree < 0) throw InputError("SphereRule::product: negative degree");
  const int nz = degree / 2 + 1;
  const int nphi = degree + 1;
  const QuadratureRule1D z = gauss_legendre(nz);
  SphereRule rule;
  for (int i = 0; i < nz; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z.nodes[i] * z.nodes[i]));
    for (int k = 0; k < nphi; ++k) {
      const double phi = two_pi * k / nphi;
      rule.directions.emplace_back(s * std::cos(phi), s * std::sin(phi), z.nodes[i]);
      rule.weights.push_back(z.weights[i] * two_pi / nphi);
    }
  }
  return rule;
}

SphereRule SphereRule::octahedral14() {
  SphereRule rule;
  const double wv = 4.0 * pi / 15.0;
  const double wc = 4.0 * pi * 3.0 / 40.0;
  for (int a = 0; a < 3; ++a)
    for (double s : {1.0, -1.0}) {
      Eigen::Vector3d d = Eigen::Vector3d::Zero();
      d[a] = s;
      rule.directions.push_back(d);
      rule.weights.push_back(wv);
    }
  const double c = 1.0 / std::sqrt(3.0);
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0})
      for (double s3 : {1.0, -1.0}) {
        rule.directions.emplace_back(s1 * c, s2 * c, s3 * c);
        rule.weights.push_back(wc);
      }
  return rule;
}

BallRule BallRule::make(int radial_nodes, SphereRule sphere) {
  return BallRule{gauss_legendre(radial_nodes, 0.0, 1.0), std::move(sphere)};
}

const BallRule& default_ball_rule() {
  static const BallRule rule = BallRule::make(32, SphereRule::product(17));
  return rule;
}

Eigen::Matrix3d inverse_sqrt_spd(const Eigen::Matrix3d& g) {
  if (!g.allFinite() || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw InputError("metric is not a finite symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  if (es.eigenvalues().minCoeff() <= 0.0) throw InputError("metric is not positive definite");
  return es.operatorInverseSqrt();
}

}  // namespace diracgeom
