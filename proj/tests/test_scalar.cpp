#include <catch2/catch_amalgamated.hpp>

#include "miniweyl/linalg.hpp"
#include "miniweyl/poly.hpp"
#include "miniweyl/scalar.hpp"

#include <random>

using namespace miniweyl;

TEST_CASE("scalar modes: exact is error-free, mixing is rejected") {
  Scalar a = Scalar::exact(Rat(1, 3));
  Scalar b = Scalar::exact(Rat(1, 6));
  REQUIRE((a + b).rat() == Rat(1, 2));
  Scalar prod = a * a * a * a * a;
  REQUIRE(prod.rat() == Rat(1, 243));

  Scalar d = Scalar::approx(0.1);
  REQUIRE_THROWS_AS(a + d, Error);
  REQUIRE((d + d).equals(Scalar::approx(0.2), 1e-15));
}

TEST_CASE("exact_sqrt recognizes perfect squares") {
  REQUIRE(*exact_sqrt(Rat(25)) == Rat(5));
  REQUIRE(*exact_sqrt(Rat(9, 16)) == Rat(3, 4));
  REQUIRE(!exact_sqrt(Rat(2)).has_value());
  REQUIRE(!exact_sqrt(Rat(-4)).has_value());
}

TEST_CASE("det5 of identity is 1, exact and approx") {
  REQUIRE(det(Mat<Rat>::identity(5)) == Rat(1));
  REQUIRE(det(Mat<double>::identity(5)) == 1.0);
}

TEST_CASE("determinant and kernel over Q") {
  Mat<Rat> m(3, 3);
  int v[9] = {2, 1, 0, 1, 3, 1, 0, 1, 2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Rat(v[3 * i + j]);
  REQUIRE(det(m) == Rat(8));  // 2(6-1) - 1(2-0) = 8

  Mat<Rat> sing(2, 3);
  sing(0, 0) = 1; sing(0, 1) = 2; sing(0, 2) = 3;
  sing(1, 0) = 2; sing(1, 1) = 4; sing(1, 2) = 6;
  auto kb = kernel(sing);
  REQUIRE(kb.size() == 2);
  for (const auto& k : kb) {
    Rat r0 = k[0] + 2 * k[1] + 3 * k[2];
    REQUIRE(r0 == 0);
  }
}

TEST_CASE("solve_poly: t^2 - 1 has roots +1, -1") {
  auto roots = solve_poly_real({-1.0, 0.0, 1.0});
  REQUIRE(roots.size() == 2);
  REQUIRE(roots[0].z.re == Catch::Approx(-1.0).margin(1e-12));
  REQUIRE(roots[1].z.re == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(roots[0].mult == 1);
  REQUIRE(roots[1].mult == 1);
}

TEST_CASE("solve_poly: quartic with a double root") {
  // (t-1)^2 (t+2)(t+3) = t^4 + 3t^3 - 3t^2 - 7t + 6
  auto roots = solve_poly_real({6.0, -7.0, -3.0, 3.0, 1.0}, 1e-4);
  int total = 0;
  bool saw_double = false;
  for (auto& r : roots) {
    total += r.mult;
    if (r.mult == 2) {
      saw_double = true;
      REQUIRE(r.z.re == Catch::Approx(1.0).margin(1e-5));
    }
  }
  REQUIRE(total == 4);
  REQUIRE(saw_double);
}

TEST_CASE("solve_poly rejects the zero polynomial") {
  REQUIRE_THROWS_AS(solve_poly(Poly<Cxd>{}), Error);
}

TEST_CASE("exact roots over Q(i)") {
  // (t - 2)(t - 1/3) with rational coefficients
  Poly<CxQ> p({CxQ(Rat(2, 3)), CxQ(Rat(-7, 3)), CxQ(Rat(1))});
  auto er = solve_poly_exact(p);
  REQUIRE(er.complete);
  REQUIRE(er.roots.size() == 2);

  // t^2 + 1 splits over Q(i)
  auto eri = solve_poly_exact(Poly<CxQ>({CxQ(Rat(1)), CxQ(Rat(0)), CxQ(Rat(1))}));
  REQUIRE(eri.complete);
  REQUIRE(eri.roots.size() == 2);
  for (auto& [z, m] : eri.roots) REQUIRE(norm2(z) == Rat(1));

  // t^2 - 2 does not split; discriminant data comes back instead
  auto er2 = solve_poly_exact(Poly<CxQ>({CxQ(Rat(-2)), CxQ(Rat(0)), CxQ(Rat(1))}));
  REQUIRE(!er2.complete);
  REQUIRE(er2.residual_discriminant.re == Rat(8));

  // multiplicity split: (t-1)^3 (t+1)
  // t^4 - 2t^3 + 2t - 1
  auto er3 = solve_poly_exact(
      Poly<CxQ>({CxQ(Rat(-1)), CxQ(Rat(2)), CxQ(Rat(0)), CxQ(Rat(-2)), CxQ(Rat(1))}));
  REQUIRE(er3.complete);
  int m1 = 0, m3 = 0;
  for (auto& [z, m] : er3.roots) {
    if (z == CxQ(Rat(1))) m3 = m;
    if (z == CxQ(Rat(-1))) m1 = m;
  }
  REQUIRE(m3 == 3);
  REQUIRE(m1 == 1);
}

TEST_CASE("fit_quadratic_form recovers an exact form with tiny residual") {
  Eigen::Matrix3d q;
  q << 2, 1, 0,
       1, -3, 0.5,
       0, 0.5, 1;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::pair<Eigen::Vector3d, double>> samples;
  for (int i = 0; i < 12; ++i) {
    Eigen::Vector3d d(u(rng), u(rng), u(rng));
    samples.push_back({d, d.dot(q * d)});
  }
  auto fit = fit_quadratic_form(samples);
  REQUIRE((fit.form - q).norm() < 1e-10);
  REQUIRE(fit.rel_residual < 1e-12);
}

TEST_CASE("fit_quadratic_form rejects rank-deficient sample sets") {
  std::vector<std::pair<Eigen::Vector3d, double>> samples;
  for (int i = 0; i < 8; ++i)
    samples.push_back({Eigen::Vector3d(1.0 * i, 0, 0), 1.0 * i * i});
  REQUIRE_THROWS_AS(fit_quadratic_form(samples), Error);
}

TEST_CASE("signature of a (++-) form") {
  Eigen::Matrix3d g;
  g << 1, 0, 0, 0, 2, 0, 0, 0, -1;
  auto s = signature_of(g);
  REQUIRE(s.plus == 2);
  REQUIRE(s.minus == 1);
  REQUIRE(s.null == 0);
}
