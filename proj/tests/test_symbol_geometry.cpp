#include "doctest.h"

#include "diracgeom/frames.hpp"
#include "diracgeom/symbol_geometry.hpp"

using namespace diracgeom;

namespace {

double max_frame_diff(const FrameField& a, const FrameField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.e.size(); ++i) m = std::max(m, (a.e[i] - b.e[i]).cwiseAbs().maxCoeff());
  return m;
}

PrincipalSymbolField pauli_symbol(const PeriodicChart& c, double sign) {
  SymbolValue s{sign * PauliBasis::s(0), sign * PauliBasis::s(1), sign * PauliBasis::s(2)};
  return PrincipalSymbolField(GridField<SymbolValue>(c, s));
}

}  // namespace

TEST_CASE("symbol validation") {
  PeriodicChart c(4);
  SymbolValue s{PauliBasis::s(0), PauliBasis::s(1), PauliBasis::s(2)};
  s[1](0, 0) = 1.0;
  CHECK_THROWS_AS(PrincipalSymbolField(GridField<SymbolValue>(c, s)), InputError);
  s[1] = PauliBasis::s(1);
  s[2](0, 1) = cplx(0, 1);
  CHECK_THROWS_AS(PrincipalSymbolField(GridField<SymbolValue>(c, s)), InputError);
}

TEST_CASE("decode frame and metric") {
  PeriodicChart c(8);
  SUBCASE("standard Pauli") {
    auto sym = pauli_symbol(c, 1.0);
    auto f = decode_frame(sym);
    CHECK(max_frame_diff(f, frames::constant(c)) == 0.0);
    auto m = decode_metric(sym);
    CHECK((m.g_contra[5] - Eigen::Matrix3d::Identity()).norm() < 1e-15);
    CHECK(m.vol[5] == doctest::Approx(1.0));
    CHECK(topological_charge(sym) == 1);
  }
  SUBCASE("inverted") {
    auto sym = pauli_symbol(c, -1.0);
    CHECK(max_frame_diff(decode_frame(sym), frames::constant(c, -1.0)) == 0.0);
    CHECK(topological_charge(sym) == -1);
  }
  SUBCASE("twisted") {
    auto frame = frames::twisted(c, 1);
    auto sym = symbol_from_frame(frame);
    auto back = decode_frame(sym);
    CHECK(max_frame_diff(frame, back) < 1e-15);
    const auto x = c.point(77);
    CHECK(back.e[77](0, 0) == doctest::Approx(std::cos(x[2])));
    CHECK(back.e[77](0, 1) == doctest::Approx(std::sin(x[2])));
    CHECK(back.e[77](1, 0) == doctest::Approx(-std::sin(x[2])));
    auto m = decode_metric(sym);
    CHECK((m.g_contra[77] - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(topological_charge(symbol_from_frame(frames::twisted(c, 3))) == 1);
  }
  SUBCASE("scaled frame") {
    auto m = decode_metric(symbol_from_frame(frames::constant(c, 2.0)));
    CHECK((m.g_contra[0] - 4.0 * Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(m.vol[0] == doctest::Approx(1.0 / 8));
  }
  SUBCASE("random frame round trips, metric routes agree, duality") {
    auto frame = frames::random_band_limited(c, 7);
    auto sym = symbol_from_frame(frame);
    CHECK(max_frame_diff(frame, decode_frame(sym)) < 1e-14);
    auto sym2 = symbol_from_frame(decode_frame(sym));
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int a = 0; a < 3; ++a) CHECK((sym.sigma()[i][a] - sym2.sigma()[i][a]).norm() < 1e-12);
    auto m1 = decode_metric(sym);
    auto m2 = metric_from_frame(frame);
    auto co = coframe(frame, m1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK((m1.g_contra[i] - m2.g_contra[i]).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((m1.g_contra[i] * m1.g_cov[i] - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((frame.e[i] * co.e_dual[i].transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("degenerate frame") {
    Eigen::Matrix3d e = Eigen::Matrix3d::Identity();
    e(2, 2) = 1e-10;
    FrameField f{GridField<Eigen::Matrix3d>(c, e)};
    try {
      decode_frame(symbol_from_frame(f));
      FAIL("expected EllipticityError");
    } catch (const EllipticityError& err) {
      CHECK(err.point() == 0);
      CHECK(err.det() == doctest::Approx(1e-10));
    }
  }
}

TEST_CASE("gram-schmidt") {
  PeriodicChart c(4);
  Eigen::Matrix3d e;
  e << 1.0, 0.5, 0.0, 0.2, 1.0, 0.0, 0.0, 0.3, 2.0;
  FrameField f{GridField<Eigen::Matrix3d>(c, e)};
  Eigen::Matrix3d g;
  g << 2.0, 0.1, 0.0, 0.1, 1.0, 0.2, 0.0, 0.2, 1.5;
  auto o = gram_schmidt(f, GridField<Eigen::Matrix3d>(c, g));
  CHECK((o.e[0] * g * o.e[0].transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK((metric_from_frame(o).g_cov[0] - g).norm() < 1e-12);
}

TEST_CASE("teleparallel connection") {
  PeriodicChart c(8);
  SUBCASE("constant frame") {
    auto f = frames::constant(c);
    auto gam = teleparallel_coefficients(f, metric_from_frame(f));
    for (const auto& t : gam.values()) CHECK(t.max_abs() < 1e-14);
  }
  SUBCASE("twisted frame: no third component") {
    auto f = frames::twisted(c, 1);
    auto gam = teleparallel_coefficients(f, metric_from_frame(f));
    for (const auto& t : gam.values())
      for (int mu = 0; mu < 3; ++mu)
        for (int b = 0; b < 3; ++b) {
          CHECK(std::abs(t(2, mu, b)) < 1e-12);
          CHECK(std::abs(t(0, 0, b)) < 1e-12);
        }
  }
  SUBCASE("parallel frame, metric compatibility, contortion") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      auto r = teleparallel_check(frames::random_band_limited(c, seed));
      CHECK(r.frame_parallel < 1e-10);
      CHECK(r.metric_compatibility < 1e-10);
      CHECK(r.contortion < 1e-10);
    }
  }
  SUBCASE("wrong metric rejected") {
    auto f = frames::constant(c);
    CHECK_THROWS_AS(teleparallel_coefficients(f, metric_from_frame(frames::constant(c, 2.0))), InputError);
  }
}

TEST_CASE("torsion") {
  PeriodicChart c(16);
  SUBCASE("constant frame") {
    auto f = frames::constant(c);
    auto t = torsion(f, metric_from_frame(f));
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(t.T[i].max_abs() < 1e-14);
      CHECK(std::abs(t.axial_dual[i]) < 1e-14);
    }
    CHECK(t.charge == 1);
  }
  SUBCASE("twisted frame") {
    for (int k : {1, 3}) {
      auto f = frames::twisted(c, k);
      auto t = torsion(f, metric_from_frame(f));
      for (std::size_t i = 0; i < c.size(); i += 37) {
        CHECK(t.axial_dual[i] == doctest::Approx(-2.0 * k / 3).epsilon(1e-12));
        CHECK(t.star_T[i].trace() == doctest::Approx(-2.0 * k).epsilon(1e-12));
        CHECK(t.star_T[i](0, 0) == doctest::Approx(-k).epsilon(1e-12));
        CHECK(t.star_T[i](1, 1) == doctest::Approx(-k).epsilon(1e-12));
        CHECK(std::abs(t.star_T[i](2, 2)) < 1e-12);
      }
      CHECK(t.residuals.max() < 1e-10);
    }
  }
  SUBCASE("microrotation linearisation") {
    const double eps = 1e-3;
    auto f = frames::microrotation(c, eps);
    auto m = metric_from_frame(f);
    auto t = torsion(f, m);
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      // *T_{ab} ~ d_a w_b - delta_ab div w with w = (0, 0, eps sin x1): only (1,3) survives
      Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
      expect(0, 2) = eps * std::cos(c.point(i)[0]);
      const Eigen::Matrix3d lowered = m.g_cov[i] * t.star_T[i];
      worst = std::max(worst, (lowered - expect).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 10 * eps * eps);
  }
  SUBCASE("random frames: routes agree, inversion and rigid rotation invariance") {
    for (std::uint64_t seed : {11u, 12u}) {
      auto f = frames::random_band_limited(c, seed);
      auto m = metric_from_frame(f);
      auto t = torsion(f, m);
      CHECK(t.residuals.max() < 1e-10);
      auto ti = torsion(frames::inverted(f), m);
      CHECK(ti.charge == -t.charge);
      const Eigen::Matrix3d o = frames::rotation3(0.7);
      FrameField rotated{f.e.map([&](const Eigen::Matrix3d& e) -> Eigen::Matrix3d { return o * e; })};
      auto tr = torsion(rotated, m);
      for (std::size_t i = 0; i < c.size(); i += 13) {
        CHECK((ti.T[i] - t.T[i]).max_abs() < 1e-10);
        CHECK((tr.T[i] - t.T[i]).max_abs() < 1e-10);
        CHECK(std::abs(tr.axial_dual[i] - t.axial_dual[i]) < 1e-10);
        CHECK(std::abs(t.star_T[i].trace() - 3 * t.axial_dual[i]) < 1e-10);
      }
    }
  }
  SUBCASE("route disagreement is reported") {
    auto f = frames::constant(c);
    auto m = metric_from_frame(frames::constant(c, 2.0));
    auto f2 = frames::twisted(c, 1);
    CHECK_THROWS_AS(torsion(f2, m), ConsistencyError);
    (void)f;
  }
}

TEST_CASE("hodge star") {
  const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
  CHECK(hodge_star(id, AntisymmetricTensor::three_form(1.0)).component(0) == doctest::Approx(1.0));
  Eigen::Matrix3d g = 4.0 * id;
  auto vol_form = hodge_star(g, AntisymmetricTensor::scalar(1.0));
  CHECK(vol_form({0, 1, 2}) == doctest::Approx(8.0));
  CHECK(vol_form({1, 0, 2}) == doctest::Approx(-8.0));
  CHECK_THROWS_AS(AntisymmetricTensor(4), InputError);

  Eigen::Matrix3d gm;
  gm << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 0.8;
  Eigen::Matrix3d q;
  q << 0.0, 1.2, -0.4, -1.2, 0.0, 0.7, 0.4, -0.7, 0.0;
  for (const auto& t : {AntisymmetricTensor::scalar(2.5), AntisymmetricTensor::one_form({1.0, -2.0, 0.5}),
                        AntisymmetricTensor::two_form(q), AntisymmetricTensor::three_form(0.3)})
    CHECK(hodge_star(gm, hodge_star(gm, t)).max_abs_difference(t) < 1e-12);

  SUBCASE("axial torsion of the twisted frame") {
    PeriodicChart c(8);
    auto f = frames::twisted(c, 2);
    auto m = metric_from_frame(f);
    auto t = torsion(f, m);
    // totally antisymmetric part of T_{abc} as a 3-form
    const Tensor3d& T = t.T[3];
    const double t123 = (T(0, 1, 2) + T(2, 0, 1) + T(1, 2, 0)) / 3.0;
    CHECK(hodge_star(m.g_cov[3], AntisymmetricTensor::three_form(t123)).component(0) == doctest::Approx(-4.0 / 3));
  }
}

TEST_CASE("parallel transport") {
  PeriodicChart c(8);
  SUBCASE("constant frame") {
    auto sym = symbol_from_frame(frames::constant(c));
    auto r = parallel_transport(sym, Covector(0.3, -1.0, 2.0), {0, 0, 0}, {1, 2, 3});
    CHECK((r.xi - Eigen::Vector3d(0.3, -1.0, 2.0)).norm() < 1e-14);
  }
  SUBCASE("twisted frame") {
    SymbolInterpolant sym(symbol_from_frame(frames::twisted(c, 1)));
    auto r = parallel_transport(sym, Covector(1, 0, 0), {0, 0, 0}, {0, 0, pi / 2});
    CHECK((r.xi - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
    CHECK(r.xi.norm() == doctest::Approx(1.0));
  }
  SUBCASE("path independence and loops on a random frame") {
    auto frame = frames::random_band_limited(c, 5);
    SymbolInterpolant sym(symbol_from_frame(frame));
    const Eigen::Vector3d x(0.1, 0.2, 0.3), y(2.0, -1.0, 4.0), z(5.0, 5.5, 1.0);
    const Covector xi(0.4, -0.2, 1.1);
    auto direct = parallel_transport(sym, xi, x, z);
    auto two_leg = parallel_transport(sym, parallel_transport(sym, xi, x, y), y, z);
    CHECK((direct.xi - two_leg.xi).norm() < 1e-12);
    auto gx = local::metric_contra(sym.frame_jet(x).e);
    auto gz = local::metric_contra(sym.frame_jet(z).e);
    CHECK(direct.xi.dot(gz * direct.xi) == doctest::Approx(xi.xi.dot(gx * xi.xi)).epsilon(1e-12));
    Covector cur = xi;
    const Eigen::Vector3d loop[] = {x, {1.0, 0.2, 0.3}, {1.0, 3.0, 0.3}, {1.0, 3.0, 2.0 * pi + 0.3}, x};
    for (int k = 0; k + 1 < 5; ++k) cur = parallel_transport(sym, cur, loop[k], loop[k + 1]);
    CHECK((cur.xi - xi.xi).norm() < 1e-11);
  }
}
