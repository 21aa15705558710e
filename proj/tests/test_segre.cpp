#include <catch2/catch_amalgamated.hpp>

#include "miniweyl/identities.hpp"
#include "miniweyl/segre.hpp"

using namespace miniweyl;

namespace {

SegreSurface<Rat> default_exact() {
  return SegreSurface<Rat>::build(Rat(16), Rat(0), Rat(25));
}
Surface default_approx() { return Surface::build(16.0, 0.0, 25.0); }

}  // namespace

TEST_CASE("default instance: a,b,c = (25,9,16), lambda1 = (5,3,4), p1 = (0,0,5,3,4)") {
  auto s = default_exact();
  REQUIRE(s.params.a == Rat(25));
  REQUIRE(s.params.b == Rat(9));
  REQUIRE(s.params.c == Rat(16));
  PPoint<Rat, 3> l1;
  l1.x = {CxQ(Rat(5)), CxQ(Rat(3)), CxQ(Rat(4))};
  REQUIRE(proj_equal(s.lambda[0], l1, 0.0));
  PPoint5<Rat> p1;
  p1.x = {CxQ(), CxQ(), CxQ(Rat(5)), CxQ(Rat(3)), CxQ(Rat(4))};
  REQUIRE(proj_equal(s.p[0], p1, 0.0));
  REQUIRE(s.on_surface(s.p[0]));
}

TEST_CASE("lines: l1 = {(s,0,5t,3t,4t)} contains e0, lbar1 contains e1") {
  auto s = default_exact();
  PPoint5<Rat> sample;
  sample.x = {CxQ(Rat(7)), CxQ(), CxQ(Rat(10)), CxQ(Rat(6)), CxQ(Rat(8))};
  REQUIRE(on_line(s.l[0], sample, 0.0));
  REQUIRE(on_line(s.l[0], s.e0, 0.0));
  REQUIRE(on_line(s.lbar[0], s.e1, 0.0));
  REQUIRE(!on_line(s.l[0], s.e1, 0.0));
  // both quadrics vanish along the sample
  REQUIRE(s.qA.eval(sample).is_zero());
  REQUIRE(s.qB.eval(sample).is_zero());
}

TEST_CASE("degenerate parameters are rejected; irrational roots refuse exact mode") {
  REQUIRE_THROWS_AS(SegreSurface<Rat>::build(Rat(1), Rat(1), Rat(2)), Error);
  // a = 2 is not a rational square
  try {
    SegreSurface<Rat>::build(Rat(1), Rat(0), Rat(2));
    FAIL("expected ExactModeUnavailable");
  } catch (const Error& e) {
    REQUIRE(e.code == Err::ExactModeUnavailable);
  }
  // approx mode accepts the same parameters
  REQUIRE_NOTHROW(Surface::build(1.0, 0.0, 2.0));
}

TEST_CASE("(0,16,25) satisfies neither inequality and is flagged no-spheres") {
  auto s = SegreSurface<Rat>::build(Rat(0), Rat(16), Rat(25));
  REQUIRE(!s.params.has_spheres);
  REQUIRE(s.params.a == Rat(9));
  REQUIRE(s.params.b == Rat(25));
  auto sd = Surface::build(0.0, 16.0, 25.0);
  REQUIRE_THROWS_AS(segre_real::sphere_chart(sd, Sphere::S1), Error);
}

TEST_CASE("reversed orientation gamma<alpha<beta is normalized") {
  auto s = SegreSurface<Rat>::build(Rat(16), Rat(25), Rat(0));
  REQUIRE(s.params.reversed);
  REQUIRE(s.params.has_spheres);
  REQUIRE(s.params.gamma > s.params.alpha);
  REQUIRE(s.params.alpha > s.params.beta);
}

TEST_CASE("discriminant angles: 0.9273, 2.2143, 4.0689, 5.3559 cyclically increasing") {
  auto s = default_approx();
  auto ang = segre_real::lambda_angles(s);
  // independent oracle: atan2 of the normalized coordinates of (5,3,4) etc
  REQUIRE(ang[0] == Catch::Approx(std::atan2(0.8, 0.6)).margin(1e-12));
  REQUIRE(ang[0] == Catch::Approx(0.9272952180016122).margin(1e-12));
  REQUIRE(ang[1] == Catch::Approx(2.214297435588181).margin(1e-12));
  REQUIRE(ang[2] == Catch::Approx(4.068887871591405).margin(1e-12));
  REQUIRE(ang[3] == Catch::Approx(5.355890089177974).margin(1e-12));
  for (size_t i = 0; i + 1 < 4; ++i) REQUIRE(ang[i] < ang[i + 1]);
}

TEST_CASE("fiber real locus: circle over (1,0,1) with r^2 = 9, empty at theta = pi, p1 over lambda1") {
  auto s = default_exact();
  auto f1 = s.fiber_real_locus({Rat(1), Rat(0), Rat(1)});
  REQUIRE(f1.kind == FiberKind::Circle);
  REQUIRE(f1.radius_sq == Rat(9));
  auto f2 = s.fiber_real_locus({Rat(1), Rat(-1), Rat(0)});
  REQUIRE(f2.kind == FiberKind::Empty);
  auto f3 = s.fiber_real_locus({Rat(5), Rat(3), Rat(4)});
  REQUIRE(f3.kind == FiberKind::Point);
  REQUIRE(f3.which_p == 1);
}

TEST_CASE("project_f is undefined at the nodes") {
  auto s = default_exact();
  REQUIRE_THROWS_AS(s.project_f(s.e0), Error);
  REQUIRE_THROWS_AS(s.project_f(s.e1), Error);
}

TEST_CASE("Q3 = X0X1 + 16 X2^2 - 25 X4^2 and (3,3,1,1) lies on B3") {
  auto s = default_exact();
  auto q3 = s.quadric_Q(3);
  REQUIRE(q3.m[2][2] == CxQ(Rat(16)));
  REQUIRE(q3.m[3][3] == CxQ(Rat(-25)));
  PPoint<Rat, 4> w;
  w.x = {CxQ(Rat(3)), CxQ(Rat(3)), CxQ(Rat(1)), CxQ(Rat(1))};
  REQUIRE(s.is_on_branch(3, w));
  // and it satisfies X0X1 - 9 X4^2 = 0 as the branch equation states
  REQUIRE(Rat(3) * Rat(3) - s.params.b * Rat(1) == Rat(0));
  // a generic image point is off the branch
  PPoint<Rat, 4> off;
  off.x = {CxQ(Rat(3)), CxQ(Rat(4)), CxQ(Rat(1)), CxQ(Rat(1))};
  REQUIRE(!s.is_on_branch(3, off));
}

TEST_CASE("pi2(p1) = pi2(p3) and friends") {
  auto s = default_exact();
  REQUIRE(proj_equal(s.project_pi(2, s.p[0]), s.project_pi(2, s.p[2]), 0.0));
  REQUIRE(proj_equal(s.project_pi(3, s.p[0]), s.project_pi(3, s.p[1]), 0.0));
  REQUIRE(proj_equal(s.project_pi(4, s.p[0]), s.project_pi(4, s.p[3]), 0.0));
}

TEST_CASE("tau3 swaps lambda1<->lambda2 and lambda3<->lambda4") {
  auto s = default_exact();
  REQUIRE(proj_equal(s.involution_tau(3, s.p[0]), s.p[1], 0.0));
  REQUIRE(proj_equal(s.involution_tau(3, s.p[2]), s.p[3], 0.0));
  REQUIRE(proj_equal(s.involution_tau(2, s.p[0]), s.p[2], 0.0));
  REQUIRE(proj_equal(s.involution_tau(4, s.p[0]), s.p[3], 0.0));
}

TEST_CASE("sphere chart: (theta=pi/2, phi=0) -> (3,3,1,0,1); pole membership") {
  auto s = default_approx();
  auto chart = segre_real::sphere_chart(s, Sphere::S1);
  Slice q = segre_real::sphere_point(chart, M_PI / 2, 0.0);
  REQUIRE(q(0) == Catch::Approx(3.0));
  REQUIRE(q(1) == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(q(2) == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(q(3) == Catch::Approx(1.0));
  REQUIRE(segre_real::sphere_membership(s, q) == Sphere::S1);
  auto cp = complexify<double>(slice_to_rvec(q));
  PPoint5d expect;
  expect.x = {Cxd(3), Cxd(3), Cxd(1), Cxd(0), Cxd(1)};
  REQUIRE(proj_equal(cp, expect, 1e-12));

  // p1, p2 are poles of S1; p3, p4 belong to S2
  REQUIRE(segre_real::sphere_membership(s, segre_real::pole_point(s, 0)) == Sphere::S1);
  REQUIRE(segre_real::sphere_membership(s, segre_real::pole_point(s, 1)) == Sphere::S1);
  REQUIRE(segre_real::sphere_membership(s, segre_real::pole_point(s, 2)) == Sphere::S2);
  REQUIRE(segre_real::sphere_membership(s, segre_real::pole_point(s, 3)) == Sphere::S2);

  REQUIRE_THROWS_AS(segre_real::sphere_point(chart, chart.theta_lo, 0.3), Error);
}

TEST_CASE("S1-action with |t| = 1 preserves each sphere") {
  auto s = default_approx();
  auto chart = segre_real::sphere_chart(s, Sphere::S1);
  for (double ds : {0.3, 1.1, 2.9}) {
    Slice q = segre_real::sphere_point(chart, 1.3, 0.55);
    Cxd t(std::cos(ds), std::sin(ds));
    auto moved = s.cstar_act(t, complexify<double>(slice_to_rvec(q)));
    auto w = real_form<double>(moved, 1e-9);
    REQUIRE(segre_real::sphere_membership(s, rvec_to_slice(w)) == Sphere::S1);
  }
}

TEST_CASE("tangent frame spans the kernel of the constraint Jacobian, poles included") {
  auto s = default_approx();
  auto chart = segre_real::sphere_chart(s, Sphere::S1);
  std::vector<Slice> pts;
  for (double th : {1.0, 1.4, 2.0})
    for (double ph : {0.0, 1.0, 3.0}) pts.push_back(segre_real::sphere_point(chart, th, ph));
  pts.push_back(segre_real::pole_point(s, 0));
  pts.push_back(segre_real::pole_point(s, 1));
  for (const auto& q : pts) {
    auto f = segre_real::sphere_tangent_basis(s, q);
    auto J = segre_real::constraints_jacobian(s, q);
    REQUIRE((J * f.s1).norm() < 1e-9);
    REQUIRE((J * f.s2).norm() < 1e-9);
    REQUIRE(std::abs(f.s1.dot(f.s2)) < 1e-9);
    // gradients of both quadrics annihilate P, t1, t2 (the tangent pencil)
    RVec5d ga = segre_real::grad_A(s, q), gb = segre_real::grad_B(q);
    for (const auto& v : {f.t1, f.t2}) {
      REQUIRE(std::abs(dot(ga, v)) < 1e-9);
      REQUIRE(std::abs(dot(gb, v)) < 1e-9);
    }
    REQUIRE(std::abs(dot(ga, f.P)) < 1e-8);
    REQUIRE(std::abs(dot(gb, f.P)) < 1e-9);
    // determinism
    auto f2 = segre_real::sphere_tangent_basis(s, q);
    REQUIRE((f.s1 - f2.s1).norm() == 0.0);
    REQUIRE((f.s2 - f2.s2).norm() == 0.0);
  }
}

TEST_CASE("exact identity suite passes on the default instance") {
  auto checks = verify_identities(default_exact(), 0.0);
  REQUIRE(checks.size() >= 20);
  for (const auto& c : checks) {
    INFO(c.name << " " << c.detail);
    REQUIRE(c.pass);
  }
}

TEST_CASE("identity suite passes in approx mode at tolerance") {
  auto checks = verify_identities(default_approx(), 1e-10);
  for (const auto& c : checks) {
    INFO(c.name);
    REQUIRE(c.pass);
  }
}

TEST_CASE("identity suite on a second exact instance (7,-9,16)") {
  // a = 25, b = 9, c = 16: rational roots again, different surface
  auto s = SegreSurface<Rat>::build(Rat(7), Rat(-9), Rat(16));
  REQUIRE(s.params.has_spheres);
  for (const auto& c : verify_identities(s, 0.0)) {
    INFO(c.name);
    REQUIRE(c.pass);
  }
}
