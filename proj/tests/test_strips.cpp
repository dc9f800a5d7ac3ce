#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "henlab/errors.hpp"
#include "henlab/maps1d.hpp"
#include "henlab/strips.hpp"

using namespace henlab;

TEST_CASE("leaves at b=0 are vertical lines at the ladder") {
  auto f = make_map("standard", -1.95, 0.0);
  auto lat = stable_leaf_lattice(f);
  auto L = ladder(-1.95);
  CHECK(lat.at("beta").g.sup() == doctest::Approx(L.beta).epsilon(1e-13));
  CHECK(lat.at("beta").g.inf() == doctest::Approx(L.beta).epsilon(1e-13));
  CHECK(lat.at("-alpha2").g(1.7) == doctest::Approx(-L.alpha2).epsilon(1e-13));
  CHECK(lat.at("tilde2").g(-2.2) == doctest::Approx(L.tilde_alpha2).epsilon(1e-13));
  CHECK(lat.max_residual < 1e-12);
}

TEST_CASE("leaves for small b stay near the ladder with flat slope") {
  auto f = make_map("standard", -2.0, 0.01);
  auto lat = stable_leaf_lattice(f);
  auto L = ladder(-2.0);
  ConeSpec cone;
  for (const auto& [name, leaf] : lat.leaves) {
    CAPTURE(name);
    CHECK(std::fabs(leaf.g(0.0) - leaf.k) <= 0.05);
    CHECK(leaf.g.max_slope() <= cone.c_v);
    CHECK(leaf.residual <= 1e-8);
  }
  CHECK(std::fabs(lat.at("beta").g(0.0) - L.beta) <= 0.05);
}

TEST_CASE("leaf invariance by direct iteration") {
  auto f = make_map("sine-perturbed", -1.9, -0.02);
  auto lat = stable_leaf_lattice(f);
  const auto& a1 = lat.at("alpha1").g;
  const auto& a0 = lat.at("alpha0").g;
  for (double y = -2.9; y < 2.9; y += 0.37) {
    Vec2 w = f(Vec2{a1(y), y});
    CHECK(std::fabs(w.x - a0(w.y)) < 1e-8);
  }
}

TEST_CASE("elementary boxes") {
  auto f0 = make_map("standard", -2.0, 0.0);
  auto lat0 = stable_leaf_lattice(f0);
  auto e = build_box("e", f0, lat0);
  CHECK(e.phi_minus(0.3) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e.phi_plus(-2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.y_lo() == -3);
  CHECK(e.y_hi() == 3);

  auto weq = build_box("w=", f0, lat0);
  auto L = ladder(-2.0);
  CHECK(weq.phi_minus(0.0) == doctest::Approx(-L.alpha2).epsilon(1e-12));
  CHECK(weq.phi_plus(0.0) == doctest::Approx(-L.alpha1).epsilon(1e-12));

  auto f = make_map("standard", -2.0, 0.01);
  auto lat = stable_leaf_lattice(f);
  auto D = build_box("D", f, lat);
  CHECK(D.y_lo() == doctest::Approx(-12.5));
  CHECK(D.y_hi() == doctest::Approx(12.5));
  CHECK(D.phi_plus(0.0) > 2.0);
  CHECK_THROWS_AS(build_box("D", f0, lat0), DomainError);
  CHECK_THROWS_AS(build_box("q", f0, lat0), DomainError);
}

TEST_CASE("cone verification") {
  auto f0 = make_map("standard", -2.0, 0.0);
  auto lat0 = stable_leaf_lattice(f0);
  auto cone = ConeSpec::from_eta(0.5);
  auto wp = build_box("w+", f0, lat0);
  auto r = verify_cones(f0, wp, cone);
  CHECK(r.ok);
  CHECK(r.margin >= 2.0);

  auto e = build_box("e", f0, lat0);
  auto bad = verify_cones(f0, e, cone);
  CHECK_FALSE(bad.ok);
  CHECK(bad.violations > 0);
  CHECK(std::fabs(bad.violation.x) < 0.5);

  auto f = make_map("standard", -1.95, 1e-3);
  auto lat = stable_leaf_lattice(f);
  auto sm = build_box("s-", f, lat);
  CHECK(verify_cones(f, sm, ConeSpec::from_eta(0.25)).ok);
}

TEST_CASE("2-D products reduce to 1-D pieces at b=0") {
  const double a = -1.95;
  auto f = make_map("standard", a, 0.0);
  auto lat = stable_leaf_lattice(f);
  auto cone = ConeSpec::from_eta(0.25);
  for (const char* w : {"s-,s-", "s+,s-", "c1", "c2", "w=,s+,s-", "c1,bm0"}) {
    CAPTURE(w);
    Word word = parse_word(w);
    Piece1D p1 = piece_1d(word, a);
    Piece2D p2 = build_piece_2d(word, f, lat, cone);
    CHECK(p2.order == p1.order);
    for (double y : {-2.5, 0.0, 1.3}) {
      CHECK(p2.domain.phi_minus(y) == doctest::Approx(p1.lo).epsilon(1e-9));
      CHECK(p2.domain.phi_plus(y) == doctest::Approx(p1.hi).epsilon(1e-9));
    }
  }
  for (int k = 1; k <= 3; ++k) CHECK(build_piece_2d(c_word(k), f, lat, cone).order == 2 * k + 2);
}

TEST_CASE("2-D products for small b") {
  const double a = -1.95;
  auto f = make_map("standard", a, 1e-3);
  auto lat = stable_leaf_lattice(f);
  auto cone = ConeSpec::from_eta(0.25);
  auto s = build_piece_2d(parse_word("s-"), f, lat, cone);
  auto ss = build_piece_2d(parse_word("s-,s-"), f, lat, cone);
  for (double y : {-2.0, 0.0, 2.0}) {
    CHECK(ss.domain.width_at(y) < s.domain.width_at(y));
    CHECK(ss.domain.phi_minus(y) >= s.domain.phi_minus(y) - 1e-9);
    CHECK(ss.domain.phi_plus(y) <= s.domain.phi_plus(y) + 1e-9);
  }
  CHECK(boundary_consistency(ss, f) < 1e-6);
  auto c2 = build_piece_2d(c_word(2), f, lat, cone);
  CHECK(boundary_consistency(c2, f) < 1e-6);
  CHECK(c2.domain.width_at(0.0) > 0);
  CHECK_THROWS_AS(build_piece_2d(parse_word("s-,w+"), f, lat, cone), ProductUndefinedError);
}
