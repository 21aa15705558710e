#pragma once

// The Segre quartic surface S of symbol [(11)111]:
//   X0 X1 + alpha X2^2 - beta X3^2 - gamma X4^2 = 0,
//   X2^2 - X3^2 - X4^2 = 0   in CP4,
// with real structure sigma(X) = (conj X1, conj X0, conj X2, conj X3, conj X4),
// nodes e0, e1, the conic bundle f over Lambda, discriminant points and lines,
// the three double covers over quadrics in CP3, and the real locus.
//
// In real-form coordinates (u,v,x2,x3,x4) the quadrics are the real diagonal
// forms u^2+v^2+alpha x2^2-beta x3^2-gamma x4^2 and x2^2-x3^2-x4^2, so the
// real locus sits inside the affine slice x2 = 1 as the constraint surface
//   x3^2 + x4^2 = 1,   u^2 + v^2 = a x4^2 - c,
// whose two components (split by the sign of x4) are the spheres. The poles
// p1, p2 (over lambda_1, lambda_2) are ordinary points of this surface.

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "miniweyl/projective.hpp"

namespace miniweyl {

template <class R>
struct SurfaceParams {
  R alpha, beta, gamma;  // normalized so that gamma > alpha > beta when spheres exist
  R a, b, c;             // a = gamma-beta, b = gamma-alpha, c = alpha-beta
  bool reversed = false; // input satisfied gamma < alpha < beta; normalized via X0 -> -X0
  bool has_spheres = false;
};

enum class Sphere { S1, S2, none };

inline const char* sphere_name(Sphere s) {
  switch (s) {
    case Sphere::S1: return "S1";
    case Sphere::S2: return "S2";
    default: return "none";
  }
}

enum class FiberKind { Empty, Point, Circle };

template <class R>
struct FiberRealLocus {
  FiberKind kind;
  R radius_sq{};   // for Circle, with the base point scaled to x2 = 1
  int which_p = 0; // for Point: index 1..4 of the discriminant point
};

template <class R>
struct SLine {
  PPoint5<R> g0, g1;  // spanning points (a node and p_i)
};

template <class R>
bool on_line(const SLine<R>& l, const PPoint5<R>& q, double tol = 1e-9) {
  Mat<Cx<R>> m(3, 5);
  for (int j = 0; j < 5; ++j) {
    m(0, j) = l.g0.x[j];
    m(1, j) = l.g1.x[j];
    m(2, j) = q.x[j];
  }
  double scale = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j) scale = std::max(scale, mag(m(i, j)));
  return echelon(m, field_traits<R>::exact ? 0.0 : tol / std::max(scale, 1e-300)).rank <= 2;
}

template <class R>
class SegreSurface {
 public:
  SurfaceParams<R> params;
  Quadric5<R> qA, qB;
  PPoint5<R> e0, e1;
  std::array<PPoint<R, 3>, 4> lambda;  // discriminant points on Lambda, cyclic order
  std::array<PPoint5<R>, 4> p;         // p_i = l_i cap lbar_i
  std::array<SLine<R>, 4> l, lbar;     // e0 in l_i, e1 in lbar_i
  std::array<R, 4> sqrt_abc_signed{};  // sa, sb, sc when real (spheres case)

  static SegreSurface build(const R& alpha_in, const R& beta_in, const R& gamma_in) {
    if (alpha_in == beta_in || beta_in == gamma_in || gamma_in == alpha_in)
      throw Error(Err::DegenerateParams, "alpha, beta, gamma must be mutually distinct");

    SegreSurface s;
    bool reversed = (gamma_in < alpha_in) && (alpha_in < beta_in);
    // X0 -> -X0 identifies S(alpha,beta,gamma) with S(-alpha,-beta,-gamma) and
    // turns the reversed inequality into the normal one
    R al = reversed ? -alpha_in : alpha_in;
    R be = reversed ? -beta_in : beta_in;
    R ga = reversed ? -gamma_in : gamma_in;

    s.params.alpha = al;
    s.params.beta = be;
    s.params.gamma = ga;
    s.params.reversed = reversed;
    s.params.a = ga - be;
    s.params.b = ga - al;
    s.params.c = al - be;
    s.params.has_spheres = (ga > al) && (al > be);

    s.qA = Quadric5<R>{};
    s.qA.set_sym(0, 1, Cx<R>(R(1) / R(2)));
    s.qA.m[2][2] = Cx<R>(al);
    s.qA.m[3][3] = Cx<R>(-be);
    s.qA.m[4][4] = Cx<R>(-ga);
    s.qB = Quadric5<R>{};
    s.qB.m[2][2] = Cx<R>(R(1));
    s.qB.m[3][3] = Cx<R>(R(-1));
    s.qB.m[4][4] = Cx<R>(R(-1));

    s.e0.x = {Cx<R>(R(1)), Cx<R>(), Cx<R>(), Cx<R>(), Cx<R>()};
    s.e1.x = {Cx<R>(), Cx<R>(R(1)), Cx<R>(), Cx<R>(), Cx<R>()};

    // sqrt(a), sqrt(b), sqrt(c), complex when the argument is negative
    auto root = [](const R& v) -> Cx<R> {
      if constexpr (field_traits<R>::exact) {
        auto r = exact_sqrt(v >= 0 ? v : -v);
        if (!r)
          throw Error(Err::ExactModeUnavailable,
                      "sqrt(a), sqrt(b), sqrt(c) must be rational in exact mode");
        return v >= 0 ? Cx<R>(*r) : Cx<R>(R(0), *r);
      } else {
        double d = to_double(v);
        return d >= 0 ? Cx<R>(std::sqrt(d)) : Cx<R>(0.0, std::sqrt(-d));
      }
    };
    Cx<R> sa = root(s.params.a), sb = root(s.params.b), sc = root(s.params.c);
    if (s.params.has_spheres)
      s.sqrt_abc_signed = {sa.re, sb.re, sc.re, R(0)};

    s.lambda[0].x = {sa, sb, sc};
    s.lambda[1].x = {sa, -sb, sc};
    s.lambda[2].x = {-sa, sb, sc};
    s.lambda[3].x = {sa, sb, -sc};
    for (int i = 0; i < 4; ++i) {
      s.p[i].x = {Cx<R>(), Cx<R>(), s.lambda[i].x[0], s.lambda[i].x[1], s.lambda[i].x[2]};
      s.l[i] = {s.e0, s.p[i]};
      s.lbar[i] = {s.e1, s.p[i]};
    }
    return s;
  }

  bool on_surface(const PPoint5<R>& q, double tol = 1e-9) const {
    if constexpr (field_traits<R>::exact)
      return qA.eval(q).is_zero() && qB.eval(q).is_zero();
    double scale = 0;
    for (const auto& c : q.x) scale = std::max(scale, to_double(norm2(c)));
    return mag(qA.eval(q)) <= tol * scale * std::max(1.0, to_double(params.gamma)) &&
           mag(qB.eval(q)) <= tol * scale;
  }

  // ----- conic bundle f over Lambda -----
  PPoint<R, 3> project_f(const PPoint5<R>& q, double tol = 1e-9) const {
    double tail = 0, head = 0;
    for (int i = 2; i < 5; ++i) tail = std::max(tail, to_double(norm2(q.x[i])));
    for (int i = 0; i < 2; ++i) head = std::max(head, to_double(norm2(q.x[i])));
    bool zero_tail = field_traits<R>::exact ? tail == 0 : tail <= tol * tol * std::max(head, 1e-300);
    if (zero_tail)
      throw Error(Err::IndeterminacyPoint, "f is undefined at the nodes e0, e1");
    PPoint<R, 3> out;
    out.x = {q.x[2], q.x[3], q.x[4]};
    return out;
  }

  // fiber over a real point of Lambda: real locus is a circle iff
  // alpha x2^2 - beta x3^2 - gamma x4^2 < 0 (scaled to x2 = 1), a point at
  // the discriminant points, empty otherwise
  FiberRealLocus<R> fiber_real_locus(const std::array<R, 3>& lam_real, double tol = 1e-9) const {
    const R& x2 = lam_real[0];
    if (x2 == R(0)) throw Error(Err::DegenerateInput, "real conic points have x2 != 0");
    R n2 = x2 * x2;
    R on_conic = x2 * x2 - lam_real[1] * lam_real[1] - lam_real[2] * lam_real[2];
    double csc = std::abs(to_double(n2));
    if (field_traits<R>::exact ? !(on_conic == R(0))
                               : std::abs(to_double(on_conic)) > tol * csc)
      throw Error(Err::DegenerateInput, "point is not on the conic Lambda");
    R w = params.alpha * x2 * x2 - params.beta * lam_real[1] * lam_real[1] -
          params.gamma * lam_real[2] * lam_real[2];
    FiberRealLocus<R> out;
    bool zero = field_traits<R>::exact
                    ? w == R(0)
                    : std::abs(to_double(w)) <= tol * csc * std::max(1.0, std::abs(to_double(params.gamma)));
    if (zero) {
      out.kind = FiberKind::Point;
      // which discriminant point: match signs against lambda_i
      for (int i = 0; i < 4; ++i) {
        PPoint<R, 3> cand;
        cand.x = {Cx<R>(lam_real[0]), Cx<R>(lam_real[1]), Cx<R>(lam_real[2])};
        if (proj_equal(cand, lambda[i], 1e-6)) out.which_p = i + 1;
      }
      return out;
    }
    if (w < R(0)) {
      out.kind = FiberKind::Circle;
      out.radius_sq = -w / n2;
    } else {
      out.kind = FiberKind::Empty;
    }
    return out;
  }

  // ----- the three double covers -----
  // Q_j in CP3 (coordinates = drop X_j):
  //   Q2: X0X1 + c X3^2 - b X4^2,  Q3: X0X1 + c X2^2 - a X4^2,
  //   Q4: X0X1 - b X2^2 + a X3^2
  QuadricForm<R, 4> quadric_Q(int j) const {
    check_j(j);
    QuadricForm<R, 4> q;
    q.set_sym(0, 1, Cx<R>(R(1) / R(2)));
    auto [st1, st2] = st_pair(j);
    q.m[2][2] = Cx<R>(st1);
    q.m[3][3] = Cx<R>(st2);
    return q;
  }

  std::pair<R, R> st_pair(int j) const {
    check_j(j);
    if (j == 2) return {params.c, -params.b};
    if (j == 3) return {params.c, -params.a};
    return {-params.b, params.a};
  }

  // real type of Q_j^sigma: a sphere iff s t < 0
  std::string quadric_real_type(int j) const {
    auto [st1, st2] = st_pair(j);
    R prod = st1 * st2;
    if (prod < R(0)) return "sphere";
    if (st1 > R(0)) return "empty";
    return "torus";
  }

  PPoint<R, 4> project_pi(int j, const PPoint5<R>& q) const {
    check_j(j);
    PPoint<R, 4> out;
    int k = 0;
    for (int i = 0; i < 5; ++i)
      if (i != j) out.x[k++] = q.x[i];
    return out;
  }

  PPoint5<R> involution_tau(int j, const PPoint5<R>& q) const {
    check_j(j);
    PPoint5<R> out = q;
    out.x[j] = -out.x[j];
    return out;
  }

  // branch divisor data of pi_j, as equations on Q_j in CP3 coordinates
  // (B2): X0X1 + a X3^2 = 0, X3 = -+ i X4   [components swapped by sigma]
  // (B3): X0X1 - b X4^2 = 0, X2 = +- X4     [two real circles]
  // (B4): X0X1 + c X3^2 = 0, X2 = +- X3     [components sigma-invariant, no real points]
  struct BranchComponent {
    R quad_coeff;              // k in X0X1 + k * (coord at quad_slot)^2 = 0
    int quad_slot;             // index within the CP3 coordinates
    std::array<Cx<R>, 4> lin;  // linear equation on the CP3 coords
  };
  std::array<BranchComponent, 2> branch_divisor(int j) const {
    check_j(j);
    std::array<BranchComponent, 2> out;
    if (j == 2) {  // coords (X0,X1,X3,X4): X0X1 + a X3^2 = 0, X3 = -+ i X4
      out[0] = {params.a, 2, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(0), R(1))}};
      out[1] = {params.a, 2, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(0), R(-1))}};
    } else if (j == 3) {  // coords (X0,X1,X2,X4): X0X1 - b X4^2 = 0, X2 = +- X4
      out[0] = {-params.b, 3, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(-1))}};
      out[1] = {-params.b, 3, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(1))}};
    } else {  // coords (X0,X1,X2,X3): X0X1 + c X3^2 = 0, X2 = +- X3
      out[0] = {params.c, 3, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(-1))}};
      out[1] = {params.c, 3, {Cx<R>(), Cx<R>(), Cx<R>(R(1)), Cx<R>(R(1))}};
    }
    return out;
  }

  bool is_on_branch(int j, const PPoint<R, 4>& q, double tol = 1e-9) const {
    auto comps = branch_divisor(j);
    double scale = 0;
    for (const auto& c : q.x) scale = std::max(scale, to_double(norm2(c)));
    scale = std::max(std::sqrt(scale), 1e-300);
    for (const auto& comp : comps) {
      const auto& xq = q.x[comp.quad_slot];
      Cx<R> quad = q.x[0] * q.x[1] + Cx<R>(comp.quad_coeff) * xq * xq;
      bool quad_ok = field_traits<R>::exact
                         ? quad.is_zero()
                         : mag(quad) <= tol * scale * scale *
                               std::max(1.0, std::abs(to_double(comp.quad_coeff)));
      Cx<R> lv{};
      for (int i = 0; i < 4; ++i) lv += comp.lin[i] * q.x[i];
      bool lin_ok = field_traits<R>::exact ? lv.is_zero() : mag(lv) <= tol * scale;
      if (quad_ok && lin_ok) return true;
    }
    return false;
  }

  // whether the real structure swaps or preserves the two components of B_j
  bool branch_components_swapped_by_sigma(int j) const {
    check_j(j);
    return j == 2;
  }
  std::string branch_real_type(int j) const {
    check_j(j);
    return j == 3 ? "two-circles" : "empty";
  }

  // tau_j(p_i) = p_{perm(i)}, the permutation of Eq. (tau)
  int tau_lambda_perm(int j, int i) const {
    check_j(j);
    static constexpr int perm2[4] = {2, 3, 0, 1};
    static constexpr int perm3[4] = {1, 0, 3, 2};
    static constexpr int perm4[4] = {3, 2, 1, 0};
    if (j == 2) return perm2[i];
    if (j == 3) return perm3[i];
    return perm4[i];
  }

  // C*-action (X0,X1,...) -> (t X0, t^-1 X1, ...)
  PPoint5<R> cstar_act(const Cx<R>& t, const PPoint5<R>& q) const {
    PPoint5<R> out = q;
    out.x[0] = t * q.x[0];
    out.x[1] = q.x[1] / t;
    return out;
  }

 private:
  static void check_j(int j) {
    if (j < 2 || j > 4) throw Error(Err::DegenerateInput, "j must be 2, 3, or 4");
  }
};

// ----------------------------------------------------------------------
// Real locus: slice coordinates and sphere charts (double precision)
// ----------------------------------------------------------------------
using Slice = Eigen::Vector4d;  // (u, v, x3, x4) in the affine slice x2 = 1

inline RVec5d slice_to_rvec(const Slice& q) { return {q(0), q(1), 1.0, q(2), q(3)}; }
inline Slice rvec_to_slice(const RVec5d& v) {
  if (std::abs(v[2]) < 1e-14) throw Error(Err::DegenerateInput, "x2 vanishes; not on the real locus");
  return Slice(v[0] / v[2], v[1] / v[2], v[3] / v[2], v[4] / v[2]);
}

using Surface = SegreSurface<double>;

struct SphereChart {
  Sphere which;
  double theta_lo, theta_hi;  // open arc of Lambda^sigma (I1 or I2)
  Slice pole_lo, pole_hi;     // over theta_lo / theta_hi
  double a, c;                // r^2(theta) = a sin^2(theta) - c

  double r2(double theta) const { return a * std::sin(theta) * std::sin(theta) - c; }
};

namespace segre_real {

inline void require_spheres(const Surface& s) {
  if (!s.params.has_spheres)
    throw Error(Err::NoSpheres, "real locus is empty or a torus; sphere operations disabled");
}

inline double theta1(const Surface& s) {
  return std::atan2(std::sqrt(to_double(s.params.c)), std::sqrt(to_double(s.params.b)));
}

// disc angles in cyclic order: theta1, pi - theta1, pi + theta1, 2 pi - theta1
inline std::array<double, 4> lambda_angles(const Surface& s) {
  double t1 = theta1(s);
  return {t1, M_PI - t1, M_PI + t1, 2 * M_PI - t1};
}

inline Slice pole_point(const Surface& s, int i) {
  require_spheres(s);
  auto ang = lambda_angles(s);
  return Slice(0, 0, std::cos(ang[static_cast<size_t>(i)]), std::sin(ang[static_cast<size_t>(i)]));
}

inline SphereChart sphere_chart(const Surface& s, Sphere which) {
  require_spheres(s);
  auto ang = lambda_angles(s);
  SphereChart c;
  c.which = which;
  c.a = to_double(s.params.a);
  c.c = to_double(s.params.c);
  if (which == Sphere::S1) {
    c.theta_lo = ang[0];
    c.theta_hi = ang[1];
    c.pole_lo = pole_point(s, 0);
    c.pole_hi = pole_point(s, 1);
  } else {
    c.theta_lo = ang[2];
    c.theta_hi = ang[3];
    c.pole_lo = pole_point(s, 2);
    c.pole_hi = pole_point(s, 3);
  }
  return c;
}

// (theta, phi) parametrization away from the poles:
// (u,v) = r(theta)(cos phi, sin phi) over the conic point (1, cos t, sin t)
inline Slice sphere_point(const SphereChart& c, double theta, double phi) {
  double r2 = c.r2(theta);
  if (r2 <= 1e-14)
    throw Error(Err::PoleChartDegenerate, "(theta,phi) chart degenerates at r = 0");
  double r = std::sqrt(r2);
  return Slice(r * std::cos(phi), r * std::sin(phi), std::cos(theta), std::sin(theta));
}

// constraint residuals of the chart-free representation
inline Eigen::Vector2d constraints(const Surface& s, const Slice& q) {
  double al = to_double(s.params.alpha), be = to_double(s.params.beta),
         ga = to_double(s.params.gamma);
  return Eigen::Vector2d(q(2) * q(2) + q(3) * q(3) - 1.0,
                         q(0) * q(0) + q(1) * q(1) + al - be * q(2) * q(2) - ga * q(3) * q(3));
}

inline Eigen::Matrix<double, 2, 4> constraints_jacobian(const Surface& s, const Slice& q) {
  double be = to_double(s.params.beta), ga = to_double(s.params.gamma);
  Eigen::Matrix<double, 2, 4> j;
  j << 0, 0, 2 * q(2), 2 * q(3),
       2 * q(0), 2 * q(1), -2 * be * q(2), -2 * ga * q(3);
  return j;
}

inline Sphere sphere_membership(const Surface& s, const Slice& q, double tol = 1e-8) {
  require_spheres(s);
  Eigen::Vector2d f = constraints(s, q);
  double scale = std::max(1.0, q.squaredNorm()) * std::max(1.0, std::abs(to_double(s.params.gamma)));
  if (std::abs(f(0)) > tol * scale || std::abs(f(1)) > tol * scale) return Sphere::none;
  return q(3) > 0 ? Sphere::S1 : Sphere::S2;
}

// deterministic orthonormal tangent frame; the poles are ordinary points here
struct TangentFrame {
  RVec5d P, t1, t2;       // ambient real-form vectors
  Eigen::Vector4d s1, s2; // the same tangents in slice coordinates
};

inline TangentFrame sphere_tangent_basis(const Surface& s, const Slice& q) {
  Eigen::Matrix<double, 2, 4> J = constraints_jacobian(s, q);
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(J, Eigen::ComputeFullV);
  Eigen::Vector4d k1 = svd.matrixV().col(2), k2 = svd.matrixV().col(3);
  // fix signs deterministically: largest-|entry| component positive
  auto fix = [](Eigen::Vector4d& v) {
    int idx;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0) v = -v;
  };
  fix(k1);
  fix(k2);
  TangentFrame f;
  f.s1 = k1;
  f.s2 = k2;
  f.P = slice_to_rvec(q);
  f.t1 = {k1(0), k1(1), 0.0, k1(2), k1(3)};
  f.t2 = {k2(0), k2(1), 0.0, k2(2), k2(3)};
  return f;
}

// real-form gradients of the two defining quadrics at a slice point; these
// span the real pencil of hyperplanes through T_pS
inline RVec5d grad_A(const Surface& s, const Slice& q) {
  double al = to_double(s.params.alpha), be = to_double(s.params.beta),
         ga = to_double(s.params.gamma);
  return {q(0), q(1), al, -be * q(2), -ga * q(3)};
}
inline RVec5d grad_B(const Slice& q) { return {0.0, 0.0, 1.0, -q(2), -q(3)}; }

}  // namespace segre_real

}  // namespace miniweyl
