#pragma once

// Two-conic intersection in a plane (Bezout count 4, with multiplicities) via
// the degree-4 resultant, plus rational parametrization of real ternary
// conics used by the nodal-quartic machinery.

#include <Eigen/Dense>

#include <vector>

#include "miniweyl/poly.hpp"
#include "miniweyl/projective.hpp"

namespace miniweyl {

// restriction of an ambient quadric to the plane spanned by three points
template <class R>
QuadricForm<R, 3> restrict_to_plane(const Quadric5<R>& q, const std::array<PPoint5<R>, 3>& basis) {
  QuadricForm<R, 3> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Cx<R> s{};
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) s += q.m[a][b] * basis[i].x[a] * basis[j].x[b];
      c.m[i][j] = s;
    }
  return c;
}

// quadratic in z2 with binary-form coefficients in (z0, z1):
//   C(z) = A(z0,z1) z2^2 + B(z0,z1) z2 + D(z0,z1)
template <class R>
struct ConicSlices {
  Cx<R> A;                    // constant
  std::array<Cx<R>, 2> B;     // linear
  std::array<Cx<R>, 3> D;     // quadratic: D0 z0^2 + D1 z0 z1 + D2 z1^2
};

template <class R>
ConicSlices<R> slice_conic(const QuadricForm<R, 3>& c) {
  ConicSlices<R> s;
  s.A = c.m[2][2];
  s.B = {R(2) * c.m[0][2], R(2) * c.m[1][2]};
  s.D = {c.m[0][0], R(2) * c.m[0][1], c.m[1][1]};
  return s;
}

// Res_{z2} of two such quadratics: a degree-4 binary form in (z0, z1),
// computed from the 4x4 Sylvester determinant with polynomial entries.
template <class R>
std::array<Cx<R>, 5> conic_resultant(const QuadricForm<R, 3>& c1, const QuadricForm<R, 3>& c2) {
  auto s1 = slice_conic(c1), s2 = slice_conic(c2);
  using B4 = std::array<Cx<R>, 5>;  // binary forms indexed by z0-degree
  auto mul22 = [](const std::array<Cx<R>, 3>& a, const std::array<Cx<R>, 3>& b) {
    B4 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto mul12 = [](const std::array<Cx<R>, 2>& a, const std::array<Cx<R>, 3>& b) {
    std::array<Cx<R>, 4> r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto scale2 = [](const Cx<R>& s, const std::array<Cx<R>, 3>& a) {
    return std::array<Cx<R>, 3>{s * a[0], s * a[1], s * a[2]};
  };
  // resultant of a z^2 + b z + d and a' z^2 + b' z + d':
  //   (a d' - a' d)^2 - (a b' - a' b)(b d' - b' d)
  std::array<Cx<R>, 3> ad{};
  {
    auto t1 = scale2(s1.A, s2.D), t2 = scale2(s2.A, s1.D);
    for (int i = 0; i < 3; ++i) ad[i] = t1[i] - t2[i];
  }
  std::array<Cx<R>, 2> ab{s1.A * s2.B[0] - s2.A * s1.B[0], s1.A * s2.B[1] - s2.A * s1.B[1]};
  std::array<Cx<R>, 4> bd3{};
  {
    auto t1 = mul12(s1.B, s2.D), t2 = mul12(s2.B, s1.D);
    for (int i = 0; i < 4; ++i) bd3[i] = t1[i] - t2[i];
  }
  B4 res = mul22(ad, ad);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) res[i + j] -= ab[i] * bd3[j];
  return res;
}

template <class R>
struct ConicIntersectionPoint {
  PPoint<R, 3> plane_point;  // in plane coordinates
  PPoint5<R> ambient;        // mapped through the basis
  int multiplicity;
};

namespace detail {

// deterministic plane-coordinate shuffles tried until (0,0,1) avoids both conics
template <class R>
std::vector<Mat<Cx<R>>> coordinate_changes() {
  auto mk = [](std::initializer_list<int> v) {
    Mat<Cx<R>> m(3, 3);
    int k = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = Cx<R>(R(*(v.begin() + k))), ++k;
    return m;
  };
  return {
      mk({1, 0, 0, 0, 1, 0, 0, 0, 1}),
      mk({0, 0, 1, 0, 1, 0, 1, 0, 0}),
      mk({1, 0, 0, 0, 0, 1, 0, 1, 0}),
      mk({1, 0, 1, 0, 1, 1, 1, 1, 1}),
      mk({1, 2, 1, 0, 1, 3, 2, 1, 1}),
      mk({3, 1, 2, 1, 4, 1, 2, 2, 1}),
      mk({1, 5, 2, 3, 1, 7, 2, 3, 5}),
      mk({2, 3, 5, 7, 1, 2, 1, 5, 3}),
  };
}

template <class R>
QuadricForm<R, 3> transform_conic(const QuadricForm<R, 3>& c, const Mat<Cx<R>>& t) {
  QuadricForm<R, 3> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Cx<R> s{};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += t(a, i) * c.m[a][b] * t(b, j);
      out.m[i][j] = s;
    }
  return out;
}

}  // namespace detail

// All common zeros of the restrictions of q1, q2 to the plane through the
// given basis, with multiplicities summing to 4. Throws CommonComponent when
// the restricted conics share a factor (resultant identically zero).
template <class R>
std::vector<ConicIntersectionPoint<R>> intersect_conics(const std::array<PPoint5<R>, 3>& basis,
                                                        const Quadric5<R>& q1,
                                                        const Quadric5<R>& q2,
                                                        double tol = 1e-9) {
  auto c1_raw = restrict_to_plane(q1, basis);
  auto c2_raw = restrict_to_plane(q2, basis);
  double s1 = 0, s2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      s1 = std::max(s1, mag(c1_raw.m[i][j]));
      s2 = std::max(s2, mag(c2_raw.m[i][j]));
    }
  if (s1 <= 0 || s2 <= 0)
    throw Error(Err::DegenerateInput, "a quadric restricts to zero on the plane");

  constexpr bool ex = field_traits<R>::exact;
  auto changes = detail::coordinate_changes<R>();
  for (const auto& T : changes) {
    auto c1 = detail::transform_conic(c1_raw, T);
    auto c2 = detail::transform_conic(c2_raw, T);
    // (0,0,1) must avoid both conics so the z2-degree stays 2
    if (mag(c1.m[2][2]) <= tol * s1 || mag(c2.m[2][2]) <= tol * s2) continue;

    auto res = conic_resultant(c1, c2);
    double rs = 0;
    for (const auto& r : res) rs = std::max(rs, mag(r));
    double rscale = std::pow(std::max(s1, 1e-300), 2) * std::pow(std::max(s2, 1e-300), 2);
    if (rs <= (ex ? 0.0 : 1e-7 * tol * rscale))
      throw Error(Err::CommonComponent, "restricted conics share a component");

    // roots of the quartic binary form in (z0 : z1)
    // the slice arrays are indexed by z1-degree, so res[i] is the coefficient
    // of z0^(4-i) z1^i: affine roots live in s = z1/z0 and the remaining
    // multiplicity sits on the line (0 : 1)
    std::vector<std::pair<Cx<R>, int>> line_roots;
    int inf_mult = 0;
    if constexpr (ex) {
      Poly<CxQ> pr(std::vector<CxQ>(res.begin(), res.end()));
      inf_mult = 4 - pr.deg();
      auto er = solve_poly_exact(pr);
      if (!er.complete)
        throw Error(Err::ExactModeUnavailable, "resultant does not split over Q(i)");
      for (auto& [z, m] : er.roots) line_roots.push_back({z, m});
    } else {
      Poly<Cxd> pr(std::vector<Cxd>(res.begin(), res.end()));
      // drop numerically-zero leading coefficients toward roots at infinity
      while (!pr.is_zero() && mag(pr.lc()) <= 1e-10 * rs) pr.c.pop_back();
      inf_mult = 4 - pr.deg();
      for (auto& rm : solve_poly(pr, 1e-5)) line_roots.push_back({rm.z, rm.mult});
    }

    std::vector<ConicIntersectionPoint<R>> out;
    // Returns false when two distinct common roots sit on one projection
    // line; the per-point multiplicities are then not recoverable from the
    // resultant and the frame must be rejected.
    auto push_point = [&](Cx<R> z0, Cx<R> z1, int mult) -> bool {
      // common z2 roots of the two restricted quadratics along this line
      auto sl1 = slice_conic(c1);
      auto sl2 = slice_conic(c2);
      Cx<R> b1 = sl1.B[0] * z0 + sl1.B[1] * z1;
      Cx<R> d1 = sl1.D[0] * z0 * z0 + sl1.D[1] * z0 * z1 + sl1.D[2] * z1 * z1;
      Cx<R> b2 = sl2.B[0] * z0 + sl2.B[1] * z1;
      Cx<R> d2 = sl2.D[0] * z0 * z0 + sl2.D[1] * z0 * z1 + sl2.D[2] * z1 * z1;
      // a1 z^2 + b1 z + d1 and a2 z^2 + b2 z + d2 share a root iff the linear
      // combination eliminating z^2 vanishes there
      Cx<R> la = sl2.A * b1 - sl1.A * b2;
      Cx<R> lb = sl2.A * d1 - sl1.A * d2;
      std::vector<std::pair<Cx<R>, int>> zs;
      double lsc = std::max(mag(la), mag(lb));
      if ((ex && la.is_zero() && lb.is_zero()) || (!ex && lsc <= 1e-9 * std::max(s1 * s2, 1.0))) {
        // proportional quadratics along the line: both z2 roots are common
        if constexpr (ex) {
          auto er = solve_poly_exact(Poly<CxQ>({d1, b1, sl1.A}));
          if (!er.complete)
            throw Error(Err::ExactModeUnavailable, "fiber quadratic does not split over Q(i)");
          for (auto& [z, m] : er.roots) zs.push_back({z, m});
        } else {
          for (auto& rm : solve_poly(Poly<Cxd>({d1, b1, sl1.A}), 1e-6)) zs.push_back({rm.z, rm.mult});
        }
        if (zs.size() > 1) return false;
        for (auto& [z, m] : zs) m = mult;
      } else {
        zs.push_back({-(lb / la), mult});
      }
      for (auto& [z2, m] : zs) {
        PPoint<R, 3> zp;
        zp.x = {z0, z1, z2};
        // undo the coordinate change
        PPoint<R, 3> orig;
        for (int i = 0; i < 3; ++i) {
          Cx<R> s{};
          for (int j = 0; j < 3; ++j) s += T(i, j) * zp.x[j];
          orig.x[i] = s;
        }
        ConicIntersectionPoint<R> cip;
        cip.plane_point = orig;
        for (int a = 0; a < 5; ++a) {
          Cx<R> s{};
          for (int i = 0; i < 3; ++i) s += orig.x[i] * basis[i].x[a];
          cip.ambient.x[a] = s;
        }
        cip.multiplicity = m;
        out.push_back(cip);
      }
      return true;
    };

    bool frame_ok = true;
    for (auto& [z, m] : line_roots)
      if (!push_point(Cx<R>(R(1)), z, m)) { frame_ok = false; break; }
    if (frame_ok && inf_mult > 0) frame_ok = push_point(Cx<R>(R(0)), Cx<R>(R(1)), inf_mult);
    if (!frame_ok) continue;

    // merge projectively equal points
    std::vector<ConicIntersectionPoint<R>> merged;
    for (auto& p : out) {
      bool found = false;
      for (auto& q : merged)
        if (proj_equal(p.ambient, q.ambient, ex ? 0.0 : 1e-6)) {
          q.multiplicity += p.multiplicity;
          found = true;
          break;
        }
      if (!found) merged.push_back(p);
    }
    int total = 0;
    for (auto& p : merged) total += p.multiplicity;
    if (total != 4) continue;  // pathological frame; try the next shuffle
    return merged;
  }
  throw Error(Err::DegenerateInput, "no admissible plane frame found for conic intersection");
}

// ----------------------------------------------------------------------
// Real ternary conics (double precision)
// ----------------------------------------------------------------------

// a real point of the conic z^T G z = 0, via the eigendecomposition; exists
// iff the signature is indefinite
inline std::optional<Eigen::Vector3d> real_conic_point(const Eigen::Matrix3d& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
  const auto& ev = es.eigenvalues();
  int ip = -1, in = -1;
  for (int i = 0; i < 3; ++i) {
    if (ev(i) > 0 && (ip < 0 || ev(i) > ev(ip))) ip = i;
    if (ev(i) < 0 && (in < 0 || ev(i) < ev(in))) in = i;
  }
  if (ip < 0 || in < 0) return std::nullopt;
  Eigen::Vector3d z = std::sqrt(-ev(in)) * es.eigenvectors().col(ip) +
                      std::sqrt(ev(ip)) * es.eigenvectors().col(in);
  return z.normalized();
}

// Rational parametrization of a real conic from a base point on it: the
// residual intersection of the pencil of lines through the base point.
// z(t) = (m^T G m) z* - 2 (z*^T G m) m with m = d1 + t d2; each coordinate is
// a real quadratic in t, and real t sweeps the real locus.
struct ConicParam {
  std::array<Poly<double>, 3> z;  // quadratics
  Eigen::Vector3d base;

  Eigen::Vector3d at_real(double t) const {
    return {z[0].eval(t), z[1].eval(t), z[2].eval(t)};
  }
  std::array<Cxd, 3> at(const Cxd& t) const {
    return {z[0].eval(t), z[1].eval(t), z[2].eval(t)};
  }
};

inline ConicParam parametrize_conic(const Eigen::Matrix3d& G, const Eigen::Vector3d& base) {
  // complete base to a frame; directions chosen deterministically
  Eigen::Vector3d d1, d2;
  {
    int k;
    base.cwiseAbs().minCoeff(&k);
    Eigen::Vector3d e = Eigen::Vector3d::Unit(k);
    d1 = (e - e.dot(base) / base.squaredNorm() * base).normalized();
    d2 = base.normalized().cross(d1);
  }
  ConicParam cp;
  cp.base = base;
  // m(t) = d1 + t d2; mGm: quadratic, z*Gm: linear
  double d1Gd1 = d1.dot(G * d1), d1Gd2 = d1.dot(G * d2), d2Gd2 = d2.dot(G * d2);
  double bGd1 = base.dot(G * d1), bGd2 = base.dot(G * d2);
  Poly<double> mGm({d1Gd1, 2 * d1Gd2, d2Gd2});
  Poly<double> bGm({bGd1, bGd2});
  for (int i = 0; i < 3; ++i) {
    Poly<double> di({d1(i), d2(i)});
    cp.z[i] = base(i) * mGm - Poly<double>({2.0}) * bGm * di;
  }
  return cp;
}

}  // namespace miniweyl
