#include <catch2/catch_amalgamated.hpp>

#include "miniweyl/conics.hpp"
#include "miniweyl/projective.hpp"

#include <random>

using namespace miniweyl;

namespace {

PPoint5d pt(std::initializer_list<Cxd> v) {
  PPoint5d p;
  int i = 0;
  for (auto& c : v) p.x[i++] = c;
  return p;
}

}  // namespace

TEST_CASE("sigma swaps the nodes: (1,0,0,0,0) -> (0,1,0,0,0)") {
  auto e0 = pt({1, 0, 0, 0, 0});
  auto se0 = apply_real_structure(e0);
  REQUIRE(proj_equal(se0, pt({0, 1, 0, 0, 0})));
}

TEST_CASE("sigma fixes (3,3,1,0,1) and follows the coordinate formula") {
  auto p = pt({3, 3, 1, 0, 1});
  REQUIRE(proj_equal(apply_real_structure(p), p));

  auto q = pt({Cxd(1, 2), 5, 1, 0, 0});
  auto sq = apply_real_structure(q);
  REQUIRE(proj_equal(sq, pt({5, Cxd(1, -2), 1, 0, 0})));
}

TEST_CASE("sigma is an involution on random points, exact and approx") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    PPoint5<Rat> p;
    bool nonzero = false;
    for (int i = 0; i < 5; ++i) {
      p.x[i] = CxQ(Rat(d(rng)), Rat(d(rng)));
      nonzero = nonzero || !p.x[i].is_zero();
    }
    if (!nonzero) p.x[0] = CxQ(Rat(1));
    auto pp = apply_real_structure(apply_real_structure(p));
    REQUIRE(pp.x == p.x);  // identically, not just projectively
  }
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    PPoint5d p;
    for (int i = 0; i < 5; ++i) p.x[i] = Cxd(u(rng), u(rng));
    auto pp = apply_real_structure(apply_real_structure(p));
    for (int i = 0; i < 5; ++i) REQUIRE(cx_abs(pp.x[i] - p.x[i]) < 1e-12);
  }
}

TEST_CASE("real_form of (3,3,1,0,1) is (3,0,1,0,1)") {
  auto v = real_form<double>(pt({3, 3, 1, 0, 1}), 1e-9);
  REQUIRE(v[0] == Catch::Approx(3.0));
  REQUIRE(v[1] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(v[2] == Catch::Approx(1.0));
  REQUIRE(v[3] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(v[4] == Catch::Approx(1.0));
}

TEST_CASE("real_form of (2e^{0.7i}, 2e^{-0.7i}, 1, 0, 1)") {
  double c = std::cos(0.7), s = std::sin(0.7);
  auto p = pt({Cxd(2 * c, 2 * s), Cxd(2 * c, -2 * s), 1, 0, 1});
  auto v = real_form<double>(p, 1e-9);
  // projective real scale may differ; normalize by x2
  REQUIRE(v[0] / v[2] == Catch::Approx(2 * c).epsilon(1e-12));
  REQUIRE(v[1] / v[2] == Catch::Approx(2 * s).epsilon(1e-12));
  REQUIRE(v[4] / v[2] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("real_form rejects (1,2,0,0,1)") {
  REQUIRE_THROWS_AS(real_form<double>(pt({1, 2, 0, 0, 1}), 1e-9), Error);
  PPoint5<Rat> p;
  p.x = {CxQ(Rat(1)), CxQ(Rat(2)), CxQ(), CxQ(), CxQ(Rat(1))};
  REQUIRE_THROWS_AS(real_form<Rat>(p, 0), Error);
}

TEST_CASE("complexify then real_form round-trips sigma-fixed points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 200; ++trial) {
    RVec5d v{u(rng), u(rng), u(rng), u(rng), u(rng)};
    auto p = complexify<double>(v);
    // rotate by a random unit complex scale to hide the representative
    double ph = u(rng);
    Cxd mu(std::cos(ph), std::sin(ph));
    for (auto& c : p.x) c = mu * c;
    auto w = real_form<double>(p, 1e-9);
    auto q = complexify<double>(w);
    REQUIRE(proj_equal(p, q, 1e-9));
  }
}

TEST_CASE("real-form hyperplane pairing matches complex evaluation") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    RVec5d hv{u(rng), u(rng), u(rng), u(rng), u(rng)};
    RVec5d xv{u(rng), u(rng), u(rng), u(rng), u(rng)};
    auto h = complexify_form<double>(hv);
    auto x = complexify<double>(xv);
    Cxd val = h.eval(x);
    REQUIRE(val.im == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(val.re == Catch::Approx(dot(hv, xv)).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("exact real_form on the node line: (1,t,0,0,0) with |t|=1") {
  PPoint5<Rat> p;
  p.x = {CxQ(Rat(1)), CxQ(Rat(3, 5), Rat(4, 5)), CxQ(), CxQ(), CxQ()};
  auto v = real_form<Rat>(p, 0);
  auto q = complexify<Rat>(v);
  REQUIRE(proj_equal(p, q, 0.0));
}

// --- intersect_conics -------------------------------------------------

namespace {

Quadric5<double> quadric_x0x1() {
  Quadric5<double> q;
  q.set_sym(0, 1, Cxd(0.5));
  return q;
}

}  // namespace

TEST_CASE("intersect_conics: X0X1 = 0 and X0^2+X1^2-X2^2 = 0") {
  Quadric5<double> q2;
  q2.m[0][0] = Cxd(1);
  q2.m[1][1] = Cxd(1);
  q2.m[2][2] = Cxd(-1);
  std::array<PPoint5d, 3> basis;
  for (int i = 0; i < 3; ++i) basis[static_cast<size_t>(i)].x[i] = Cxd(1);

  auto pts = intersect_conics<double>(basis, quadric_x0x1(), q2);
  REQUIRE(pts.size() == 4);
  int total = 0;
  for (auto& p : pts) {
    total += p.multiplicity;
    REQUIRE(p.multiplicity == 1);
    // each point is one of (0,1,+-1), (1,0,+-1)
    double a0 = cx_abs(p.plane_point.x[0]), a1 = cx_abs(p.plane_point.x[1]);
    REQUIRE(std::min(a0, a1) < 1e-9 * std::max({a0, a1, cx_abs(p.plane_point.x[2])}));
  }
  REQUIRE(total == 4);
}

TEST_CASE("intersect_conics: tangency produces a multiplicity-2 root") {
  // C1 = z0 z1, C2 = z1 z2 - (z0 - z2)^2: tangent to {z1=0} at (1,0,1)
  Quadric5<double> q1 = quadric_x0x1();
  Quadric5<double> q2;
  q2.set_sym(1, 2, Cxd(0.5));
  q2.m[0][0] = Cxd(-1);
  q2.m[2][2] = q2.m[2][2] + Cxd(-1);
  q2.set_sym(0, 2, Cxd(1));
  std::array<PPoint5d, 3> basis;
  for (int i = 0; i < 3; ++i) basis[static_cast<size_t>(i)].x[i] = Cxd(1);

  auto pts = intersect_conics<double>(basis, q1, q2);
  int total = 0;
  bool saw_double = false;
  for (auto& p : pts) {
    total += p.multiplicity;
    if (p.multiplicity == 2) {
      saw_double = true;
      PPoint<double, 3> expect;
      expect.x = {Cxd(1), Cxd(0), Cxd(1)};
      REQUIRE(proj_equal(p.plane_point, expect, 1e-6));
    }
  }
  REQUIRE(total == 4);
  REQUIRE(saw_double);
}

TEST_CASE("intersect_conics: common component raises CommonComponent") {
  // C1 = z0 z1 and C2 = z0 (z0 + z1 + z2) share the line z0 = 0
  Quadric5<double> q1 = quadric_x0x1();
  Quadric5<double> q2;
  q2.m[0][0] = Cxd(1);
  q2.set_sym(0, 1, Cxd(0.5));
  q2.set_sym(0, 2, Cxd(0.5));
  std::array<PPoint5d, 3> basis;
  for (int i = 0; i < 3; ++i) basis[static_cast<size_t>(i)].x[i] = Cxd(1);
  REQUIRE_THROWS_AS(intersect_conics<double>(basis, q1, q2), Error);
}

TEST_CASE("intersect_conics exact: rational configuration") {
  Quadric5<Rat> q1;
  q1.set_sym(0, 1, CxQ(Rat(1, 2)));
  Quadric5<Rat> q2;
  q2.m[0][0] = CxQ(Rat(1));
  q2.m[1][1] = CxQ(Rat(1));
  q2.m[2][2] = CxQ(Rat(-1));
  std::array<PPoint5<Rat>, 3> basis;
  for (int i = 0; i < 3; ++i) basis[static_cast<size_t>(i)].x[i] = CxQ(Rat(1));
  auto pts = intersect_conics<Rat>(basis, q1, q2);
  REQUIRE(pts.size() == 4);
  for (auto& p : pts) {
    REQUIRE(p.multiplicity == 1);
    REQUIRE(q1.eval(p.ambient).is_zero());
    REQUIRE(q2.eval(p.ambient).is_zero());
  }
}
