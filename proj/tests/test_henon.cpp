#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "henlab/errors.hpp"
#include "henlab/henon.hpp"

using namespace henlab;

TEST_CASE("evaluate") {
  auto f = make_map("standard", -1, 0.3);
  auto e = f.evaluate({1, 2});
  CHECK(e.image.x == doctest::Approx(-0.6));
  CHECK(e.image.y == doctest::Approx(1.0));
  CHECK(e.det == doctest::Approx(0.3));

  auto g = make_map("standard", 0.7, 0);
  auto e0 = g.evaluate({1.5, -2});
  CHECK(e0.image.x == doctest::Approx(1.5 * 1.5 + 0.7));
  CHECK(e0.image.y == doctest::Approx(1.5));
  CHECK(e0.det == 0.0);

  auto s = make_map("sine-perturbed", 0, 0.1);
  auto es = s.evaluate({0, 0});
  CHECK(es.image.x == doctest::Approx(0.0));
  CHECK(es.image.y == doctest::Approx(0.0));
  CHECK(es.det >= 0.097);
  CHECK(es.det <= 0.103);
}

TEST_CASE("zero hooks agree with the standard map") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = 0.2 * u(rng);
    Vec2 z{u(rng), u(rng)};
    auto p = make_map("standard", a, b).evaluate(z), q = make_map("zero", a, b).evaluate(z);
    CHECK(p.image.x == q.image.x);
    CHECK(p.image.y == q.image.y);
    CHECK(p.det == q.det);
    CHECK(p.det == doctest::Approx(b));
  }
}

TEST_CASE("multiplicity") {
  auto f = make_map("standard", -1, 0.5, 3);
  CHECK(f.bm() == doctest::Approx(0.125));
  CHECK(f.evaluate({0.3, 0.7}).det == doctest::Approx(0.125));
}

TEST_CASE("determinant bracket property") {
  const double delta = 0.01, b = 0.2;
  HenonLikeMap f = make_map("standard", -1.5, b);
  f.zeta = [delta](double x, double v) {
    FieldJet j;
    j.f = delta * std::sin(x + v);
    j.fx = j.fv = delta * std::cos(x + v);
    j.fxx = j.fxv = j.fvv = -delta * std::sin(x + v);
    return j;
  };
  f.xi = [delta](double x, double) {
    FieldJet j;
    j.f = delta * std::sin(x);
    j.fx = delta * std::cos(x);
    j.fxx = -delta * std::sin(x);
    return j;
  };
  for (int i = 0; i < 20; ++i)
    for (int k = 0; k < 20; ++k) {
      Vec2 z{-2 + 4.0 * i / 19, -2 + 4.0 * k / 19};
      CHECK(std::fabs(f.evaluate(z).det - b) <= 3 * delta * b);
    }
}

TEST_CASE("normalize_xi closed forms") {
  auto f = make_map("standard", -1.2, 0.1);
  auto n = normalize_xi(f);
  CHECK(!n.xi);
  CHECK(n(Vec2{0.3, 0.4}).x == f(Vec2{0.3, 0.4}).x);

  const double eps = 0.05;
  HenonLikeMap c = f;
  c.xi = [eps](double, double) { return FieldJet{eps, 0, 0, 0, 0, 0}; };
  CHECK(xi_shift(c, 0.7, 0.01) == doctest::Approx(eps).epsilon(1e-14));

  HenonLikeMap l = f;
  l.xi = [eps](double x, double) { return FieldJet{eps * x, eps, 0, 0, 0, 0}; };
  for (double x : {-1.0, 0.2, 1.7}) CHECK(xi_shift(l, x, 0.0) == doctest::Approx(eps * x / (1 + eps)).epsilon(1e-13));

  HenonLikeMap bad = f;
  bad.xi = [](double x, double) { return FieldJet{0.8 * x, 0.8, 0, 0, 0, 0}; };
  CHECK_THROWS_AS(normalize_xi(bad), ConvergenceError);
}

TEST_CASE("normalize_xi conjugacy on a 20x20 grid") {
  HenonLikeMap f = make_map("sine-perturbed", -1.3, 0.2);
  f.xi = [](double x, double v) {
    FieldJet j;
    j.f = 0.02 * std::sin(x) + 0.03 * v * x;
    j.fx = 0.02 * std::cos(x) + 0.03 * v;
    j.fv = 0.03 * x;
    j.fxx = -0.02 * std::sin(x);
    j.fxv = 0.03;
    return j;
  };
  f.normalized = false;
  auto F = normalize_xi(f);
  CHECK(F.normalized);
  double worst = 0, worst_det = 0;
  for (int i = 0; i < 20; ++i)
    for (int k = 0; k < 20; ++k) {
      Vec2 z{-1.5 + 3.0 * i / 19, -1.5 + 3.0 * k / 19};
      Vec2 Z = xi_chart_inverse(f, z);
      Vec2 back = xi_chart(f, Z);
      worst = std::max(worst, std::fabs(back.x - z.x));
      Vec2 w = xi_chart(f, F(Z));
      Vec2 t = f(z);
      worst = std::max({worst, std::fabs(w.x - t.x), std::fabs(w.y - t.y)});
      // second coordinate of the normalized map is exactly X
      CHECK(F(Z).y == Z.x);
      // analytic first partials of the new zeta against finite differences
      auto j = F.zeta(Z.x, 0.2 * Z.y);
      double h = 1e-6;
      double fx = (F.zeta(Z.x + h, 0.2 * Z.y).f - F.zeta(Z.x - h, 0.2 * Z.y).f) / (2 * h);
      double fv = (F.zeta(Z.x, 0.2 * Z.y + h).f - F.zeta(Z.x, 0.2 * Z.y - h).f) / (2 * h);
      worst_det = std::max({worst_det, std::fabs(fx - j.fx), std::fabs(fv - j.fv)});
    }
  CHECK(worst <= 1e-9);
  CHECK(worst_det <= 1e-6);
}

TEST_CASE("orbit escape") {
  auto r = orbit_escape(make_map("standard", 0, 0.1), {0, 0}, 1000);
  CHECK_FALSE(r.escaped);
  auto e = orbit_escape(make_map("standard", 1, 0), {0, 0}, 1000, 10);
  CHECK(e.escaped);
  CHECK(e.steps == 4);
  REQUIRE(e.trajectory.size() == 5);
  CHECK(e.trajectory[4].x == 26);
  CHECK(escape_steps(make_map("standard", -2.5, 0), {0, 0}, 1000) > 0);
}

TEST_CASE("lyapunov") {
  auto f = make_map("standard", 0, 0.1);
  auto l = lyapunov(f, {0, 0}, {0, 1}, 10000);
  REQUIRE(l.finite());
  CHECK(l.value == doctest::Approx(0.5 * std::log(0.1)).epsilon(1e-3 / 1.15));
  auto l3 = lyapunov(f, {0, 0}, {0, 3.7}, 10000);
  CHECK(l3.value == doctest::Approx(l.value).epsilon(1e-12));

  auto c = lyapunov(make_map("standard", -2, 0), {0.3, 0.1}, {1, 0}, 100000);
  REQUIRE(c.finite());
  CHECK(c.value == doctest::Approx(std::log(2.0)).epsilon(0.02 / 0.69));

  auto h = lyapunov(make_map("standard", -1.4, -0.3), {0.1, 0.1}, {1, 0}, 1000000);
  REQUIRE(h.finite());
  CHECK(h.value == doctest::Approx(0.419).epsilon(0.02 / 0.419));

  auto esc = lyapunov(make_map("standard", 1, 0.01), {0, 0}, {1, 0}, 100);
  CHECK(esc.kind == LyapValue::Kind::Escape);
}

TEST_CASE("find_attractors") {
  auto f = make_map("standard", 0, 0.1);
  auto r = find_attractors(f, {{0.1, 0.1}, {-0.2, 0.3}, {5, 5}}, 10);
  REQUIRE(r.cycles.size() == 1);
  CHECK(r.cycles[0].period == 1);
  CHECK(std::fabs(r.cycles[0].points[0].x) < 1e-12);
  CHECK(std::abs(r.cycles[0].multipliers[0]) == doctest::Approx(std::sqrt(0.1)));
  CHECK(std::abs(r.cycles[0].multipliers[1]) == doctest::Approx(std::sqrt(0.1)));
  CHECK(r.escaped == 1);

  auto g = make_map("standard", -1, 0);
  auto s = find_attractors(g, {{0.2, 0}, {-0.3, 0.5}, {0.5, -0.1}}, 10);
  REQUIRE(s.cycles.size() == 1);
  CHECK(s.cycles[0].period == 2);
  CHECK(s.cycles[0].spectral_radius < 1e-12);
  bool has0 = false, has1 = false;
  for (auto p : s.cycles[0].points) {
    if (std::fabs(p.x) < 1e-12 && std::fabs(p.y + 1) < 1e-12) has0 = true;
    if (std::fabs(p.x + 1) < 1e-12 && std::fabs(p.y) < 1e-12) has1 = true;
  }
  CHECK(has0);
  CHECK(has1);
}
