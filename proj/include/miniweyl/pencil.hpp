#pragma once

// The real pencil of hyperplanes through the tangent plane at a real surface
// point p: frame and angle arithmetic on the projective circle psi in [0,pi),
// the five special members H0..H4, the Hessian node/cusp criterion from the
// second-order jet of the surface, classification of the real locus of every
// pencil member, and the per-point interval profile.
//
// Closed forms used throughout (real dual coordinates, slice x2 = 1):
//   H0(p) = grad_B(p) = (0,0,1,-x3,-x4)        (tangential hyperplane)
//   Hj(p) = grad_A(p) - mu grad_B(p) with mu = alpha, beta, gamma for j = 2,3,4
// so the whole pencil is spanned by the two quadric gradients.

#include <algorithm>
#include <optional>

#include "miniweyl/segre.hpp"
#include "miniweyl/tracer.hpp"

namespace miniweyl {

// ----- angle arithmetic on the projective circle R/pi ---------------------
namespace arc {

inline double wrap(double psi) {
  double w = std::fmod(psi, M_PI);
  if (w < 0) w += M_PI;
  return w;
}
// length of the arc a -> b in the positive direction
inline double forward(double a, double b) { return wrap(b - a); }
inline bool contains(double a, double len, double x) {
  double d = wrap(x - a);
  return d > 1e-15 && d < len - 1e-15;
}
inline double angle_gap(double a, double b) {
  double d = wrap(a - b);
  return std::min(d, M_PI - d);
}

}  // namespace arc

struct PencilMismatch {
  std::string what;
};

struct PencilFrame {
  Slice base;
  segre_real::TangentFrame tf;
  RVec5d hA, hB;  // orthonormal basis of {h : h contains T_pS}

  RVec5d at(double psi) const {
    RVec5d h;
    double c = std::cos(psi), s = std::sin(psi);
    for (int i = 0; i < 5; ++i) h[i] = c * hA[i] + s * hB[i];
    return h;
  }

  // angle of a pencil member; throws when h is not in the pencil span
  double angle_of(const RVec5d& h, double tol = 1e-7) const {
    double n = rnorm(h);
    if (n == 0) throw Error(Err::DegenerateInput, "zero hyperplane");
    double ca = dot(h, hA) / n, cb = dot(h, hB) / n;
    double inplane = std::hypot(ca, cb);
    if (inplane < 1.0 - tol)
      throw Error(Err::DegenerateInput, "hyperplane does not contain the tangent plane");
    return arc::wrap(std::atan2(cb, ca));
  }
};

inline PencilFrame tangent_pencil(const Surface& s, const Slice& p, double tol = 1e-8) {
  if (segre_real::sphere_membership(s, p, tol) == Sphere::none)
    throw Error(Err::NotOnSurface, "pencil base point must lie on the real locus");
  PencilFrame f;
  f.base = p;
  f.tf = segre_real::sphere_tangent_basis(s, p);
  // kernel of the 3x5 system h(P) = h(t1) = h(t2) = 0 in the real dual
  Eigen::Matrix<double, 3, 5> m;
  for (int j = 0; j < 5; ++j) {
    m(0, j) = f.tf.P[j];
    m(1, j) = f.tf.t1[j];
    m(2, j) = f.tf.t2[j];
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 5>> svd(m, Eigen::ComputeFullV);
  Eigen::Matrix<double, 5, 1> k1 = svd.matrixV().col(3), k2 = svd.matrixV().col(4);
  auto fix = [](Eigen::Matrix<double, 5, 1>& v) {
    int idx;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0) v = -v;
  };
  fix(k1);
  fix(k2);
  for (int i = 0; i < 5; ++i) {
    f.hA[i] = k1(i);
    f.hB[i] = k2(i);
  }
  return f;
}

// ----- second-order jet and the Hessian quadratic --------------------------
// The surface is written as a graph over the two best-conditioned slice
// coordinates; the constraints are quadrics, so the jet is exact.
struct SurfaceJet {
  std::array<int, 2> base_idx, solve_idx;
  Eigen::Vector2d zab[2][2];         // zab[a][b] = solve-coord second derivatives
  Eigen::Matrix<double, 4, 2> lift;  // columns: tangent lifts of the base coords
};

inline SurfaceJet surface_jet(const Surface& s, const Slice& p) {
  Eigen::Matrix<double, 2, 4> J = segre_real::constraints_jacobian(s, p);
  // pick solve columns with the largest 2x2 determinant
  double best = -1;
  std::array<int, 2> solve{0, 1};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Eigen::Matrix2d m;
      m.col(0) = J.col(i);
      m.col(1) = J.col(j);
      double d = std::abs(m.determinant());
      if (d > best) { best = d; solve = {i, j}; }
    }
  if (best < 1e-12) throw Error(Err::JetFailure, "constraint Jacobian is rank-deficient");
  SurfaceJet jet;
  jet.solve_idx = solve;
  int bi = 0;
  for (int i = 0; i < 4; ++i)
    if (i != solve[0] && i != solve[1]) jet.base_idx[static_cast<size_t>(bi++)] = i;

  Eigen::Matrix2d Js;
  Js.col(0) = J.col(solve[0]);
  Js.col(1) = J.col(solve[1]);
  Eigen::Matrix2d Jsi = Js.inverse();
  Eigen::Matrix2d Jb;
  Jb.col(0) = J.col(jet.base_idx[0]);
  Jb.col(1) = J.col(jet.base_idx[1]);
  Eigen::Matrix2d dz = -Jsi * Jb;  // solve-coord first derivatives

  // tangent lifts u_a in R^4
  for (int a = 0; a < 2; ++a) {
    Eigen::Vector4d u = Eigen::Vector4d::Zero();
    u(jet.base_idx[static_cast<size_t>(a)]) = 1.0;
    u(solve[0]) += dz(0, a);
    u(solve[1]) += dz(1, a);
    jet.lift.col(a) = u;
  }

  // constant constraint Hessians
  double be = to_double(s.params.beta), ga = to_double(s.params.gamma);
  Eigen::Vector4d d1(0, 0, 2, 2), d2(2, 2, -2 * be, -2 * ga);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Eigen::Vector2d rhs;
      rhs(0) = jet.lift.col(a).cwiseProduct(d1).dot(jet.lift.col(b));
      rhs(1) = jet.lift.col(a).cwiseProduct(d2).dot(jet.lift.col(b));
      jet.zab[a][b] = -Jsi * rhs;
    }
  return jet;
}

// 2x2 restricted 2-jet of a pencil member on the graph
inline Eigen::Matrix2d restricted_jet(const SurfaceJet& jet, const RVec5d& h) {
  // slice gradient of the affine evaluation (u, v, x3, x4 slots)
  Eigen::Vector4d g(h[0], h[1], h[3], h[4]);
  Eigen::Vector2d gs(g(jet.solve_idx[0]), g(jet.solve_idx[1]));
  Eigen::Matrix2d q;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) q(a, b) = gs.dot(jet.zab[a][b]);
  return q;
}

// H(psi) = disc of the restricted jet of h(psi): positive iff both branches
// of the node are real
struct HessianForm {
  double haa, hab, hbb;  // H = haa cos^2 + 2 hab cos sin + hbb sin^2

  double eval(double psi) const {
    double c = std::cos(psi), s = std::sin(psi);
    return haa * c * c + 2 * hab * c * s + hbb * s * s;
  }
  // simple roots on [0, pi)
  std::vector<double> roots() const {
    std::vector<double> out;
    double scale = std::max({std::abs(haa), std::abs(hab), std::abs(hbb)});
    if (scale == 0) return out;
    // as quadratic in tan(psi): hbb t^2 + 2 hab t + haa
    if (std::abs(hbb) <= 1e-12 * scale) {
      out.push_back(M_PI / 2);
      if (std::abs(hab) > 1e-12 * scale) out.push_back(arc::wrap(std::atan(-haa / (2 * hab))));
    } else {
      double disc = hab * hab - hbb * haa;
      if (disc < 0) return out;
      double sq = std::sqrt(disc);
      out.push_back(arc::wrap(std::atan((-hab + sq) / hbb)));
      out.push_back(arc::wrap(std::atan((-hab - sq) / hbb)));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline HessianForm hessian_form(const Surface& s, const PencilFrame& f) {
  SurfaceJet jet = surface_jet(s, f.base);
  Eigen::Matrix2d qa = restricted_jet(jet, f.hA);
  Eigen::Matrix2d qb = restricted_jet(jet, f.hB);
  auto disc_pair = [](const Eigen::Matrix2d& A, const Eigen::Matrix2d& B) {
    return A(0, 1) * B(0, 1) - 0.5 * (A(0, 0) * B(1, 1) + B(0, 0) * A(1, 1));
  };
  HessianForm h;
  h.haa = disc_pair(qa, qa);
  h.hbb = disc_pair(qb, qb);
  h.hab = disc_pair(qa, qb);
  return h;
}

// value of the Hessian discriminant for one specific member
inline double node_disc(const Surface& s, const Slice& p, const RVec5d& h) {
  SurfaceJet jet = surface_jet(s, p);
  Eigen::Matrix2d q = restricted_jet(jet, h);
  return q(0, 1) * q(0, 1) - q(0, 0) * q(1, 1);
}

// discriminant together with the jet magnitude, for scale-aware type tests
struct NodeJet {
  double disc;
  double scale;  // squared Frobenius norm of the restricted 2-jet
};

inline NodeJet node_jet(const Surface& s, const Slice& p, const RVec5d& h) {
  SurfaceJet jet = surface_jet(s, p);
  Eigen::Matrix2d q = restricted_jet(jet, h);
  return {q(0, 1) * q(0, 1) - q(0, 0) * q(1, 1), q.squaredNorm()};
}

// branch directions of a real-branch node, lifted to slice coordinates
inline std::array<Eigen::Vector4d, 2> node_branches(const Surface& s, const Slice& p,
                                                    const RVec5d& h) {
  SurfaceJet jet = surface_jet(s, p);
  Eigen::Matrix2d q = restricted_jet(jet, h);
  double disc = q(0, 1) * q(0, 1) - q(0, 0) * q(1, 1);
  if (disc <= 0) throw Error(Err::DegenerateInput, "node branches are not real");
  double sq = std::sqrt(disc);
  std::array<Eigen::Vector4d, 2> out;
  for (int k = 0; k < 2; ++k) {
    double sign = k == 0 ? 1.0 : -1.0;
    Eigen::Vector2d dir;
    if (std::abs(q(0, 0)) >= std::abs(q(1, 1))) {
      // q00 x^2 + 2 q01 xy + q11 y^2 = q00 (x - r y)(x - r' y)
      dir = Eigen::Vector2d((-q(0, 1) + sign * sq) / q(0, 0), 1.0);
    } else {
      dir = Eigen::Vector2d(1.0, (-q(0, 1) + sign * sq) / q(1, 1));
    }
    out[static_cast<size_t>(k)] = (jet.lift * dir).normalized();
  }
  return out;
}

// ----- the five special hyperplanes ----------------------------------------
struct SpecialHyperplanes {
  RVec5d H0, H1, H2, H3, H4;
  double psi0, psi1, psi2, psi3, psi4;
  bool merged;  // H1 = H3 (base point on the B3 stratum)
  HessianForm hess;
};

inline SpecialHyperplanes special_hyperplanes(const Surface& s, const PencilFrame& f,
                                              double angle_tol = 1e-8) {
  const Slice& p = f.base;
  if (p(0) * p(0) + p(1) * p(1) < 1e-12)
    throw Error(Err::AtCStarFixedPoint,
                "pencil specials degenerate at p1, p2; use the irregular fiber chart");
  SpecialHyperplanes sp;
  RVec5d gA = segre_real::grad_A(s, p), gB = segre_real::grad_B(p);
  double al = to_double(s.params.alpha), be = to_double(s.params.beta),
         ga = to_double(s.params.gamma);
  auto combo = [&](double mu) {
    RVec5d h;
    for (int i = 0; i < 5; ++i) h[i] = gA[i] - mu * gB[i];
    return h;
  };
  sp.H0 = gB;
  sp.H2 = combo(al);
  sp.H3 = combo(be);
  sp.H4 = combo(ga);
  sp.psi0 = f.angle_of(sp.H0);
  sp.psi2 = f.angle_of(sp.H2);
  sp.psi3 = f.angle_of(sp.H3);
  sp.psi4 = f.angle_of(sp.H4);

  sp.hess = hessian_form(s, f);
  auto roots = sp.hess.roots();
  if (roots.size() != 2)
    throw Error(Err::JetFailure, "Hessian quadratic must have two simple roots");
  // one root is the tangential member H0; the other is the cuspidal member
  double d0 = arc::angle_gap(roots[0], sp.psi0), d1 = arc::angle_gap(roots[1], sp.psi0);
  if (std::min(d0, d1) > 1e-6)
    throw Error(Err::JetFailure, "no Hessian root matches the tangential member");
  sp.psi1 = d0 < d1 ? roots[1] : roots[0];
  sp.H1 = f.at(sp.psi1);
  sp.merged = arc::angle_gap(sp.psi1, sp.psi3) <= angle_tol;
  if (sp.merged) {
    sp.psi1 = sp.psi3;
    sp.H1 = sp.H3;
  }
  return sp;
}

// ----- tangency solver ------------------------------------------------------
// Critical points of the affine evaluation of h on a sphere: candidates for
// singular points of the section S cap {h = 0} on the real locus.
struct TangencyPoint {
  Slice p;
  double value;  // h evaluated at p (0 for genuine singular points)
};

inline std::vector<TangencyPoint> find_tangencies(const Surface& s, RVec5d h, Sphere which,
                                                  int grid = 20) {
  double hn = rnorm(h);
  for (auto& c : h) c /= hn;
  auto chart = segre_real::sphere_chart(s, which);
  double be = to_double(s.params.beta), ga = to_double(s.params.gamma);
  Eigen::Vector4d grad_phi(h[0], h[1], h[3], h[4]);

  auto newton = [&](Slice q) -> std::optional<Slice> {
    Eigen::Vector2d mu;
    {
      Eigen::Matrix<double, 2, 4> J = segre_real::constraints_jacobian(s, q);
      mu = (J * J.transpose()).ldlt().solve(J * grad_phi);
    }
    for (int it = 0; it < 60; ++it) {
      Eigen::Matrix<double, 2, 4> J = segre_real::constraints_jacobian(s, q);
      Eigen::Matrix<double, 6, 1> e;
      e.segment<2>(0) = segre_real::constraints(s, q);
      e.segment<4>(2) = grad_phi - J.transpose() * mu;
      if (e.norm() < 1e-13 * (1 + q.norm())) return q;
      Eigen::Matrix<double, 6, 6> je = Eigen::Matrix<double, 6, 6>::Zero();
      je.block<2, 4>(0, 0) = J;
      Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
      Eigen::Vector4d d1(0, 0, 2, 2), d2(2, 2, -2 * be, -2 * ga);
      hess.diagonal() = -mu(0) * d1 - mu(1) * d2;
      je.block<4, 4>(2, 0) = hess;
      je.block<4, 2>(2, 4) = -J.transpose();
      Eigen::Matrix<double, 6, 1> step = je.fullPivLu().solve(-e);
      if (!step.allFinite() || step.norm() > 10) return std::nullopt;
      q += step.segment<4>(0);
      mu += step.segment<2>(4);
    }
    return std::nullopt;
  };

  std::vector<TangencyPoint> out;
  auto consider = [&](const Slice& seed) {
    auto r = newton(seed);
    if (!r) return;
    // Newton may drift to the other sphere; keep only the requested one
    if (segre_real::sphere_membership(s, *r) != which) return;
    // degenerate (cuspidal) critical points converge sloppily; dedup wide
    for (const auto& t : out)
      if ((t.p - *r).norm() < 1e-5 * (1 + r->norm())) return;
    double val = dot(h, slice_to_rvec(*r));
    out.push_back({*r, val});
  };
  double span = chart.theta_hi - chart.theta_lo;
  for (int i = 1; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double th = chart.theta_lo + span * i / grid;
      double ph = 2 * M_PI * j / grid;
      if (chart.r2(th) <= 1e-12) continue;
      consider(segre_real::sphere_point(chart, th, ph));
    }
  consider(chart.pole_lo);
  consider(chart.pole_hi);
  return out;
}

// ----- section classification ----------------------------------------------
enum class SectionClass {
  DoubleConicCircle,
  Figure8_S1,
  CuspLoop_S1,
  PointPlusCircle_S1,
  TwoPoints_S1,
  NodeOnly,
  PointPlusCircle_S2,
  OnePointPair_S2,
  TacnodePoint,
};

inline const char* section_class_name(SectionClass c) {
  switch (c) {
    case SectionClass::DoubleConicCircle: return "DoubleConicCircle";
    case SectionClass::Figure8_S1: return "Figure8_S1";
    case SectionClass::CuspLoop_S1: return "CuspLoop_S1";
    case SectionClass::PointPlusCircle_S1: return "PointPlusCircle_S1";
    case SectionClass::TwoPoints_S1: return "TwoPoints_S1";
    case SectionClass::NodeOnly: return "NodeOnly";
    case SectionClass::PointPlusCircle_S2: return "PointPlusCircle_S2";
    case SectionClass::OnePointPair_S2: return "OnePointPair_S2";
    case SectionClass::TacnodePoint: return "TacnodePoint";
  }
  return "?";
}

enum class NodeType { real_branches, conjugate_branches, cusp, tacnode, non_reduced };

inline const char* node_type_name(NodeType t) {
  switch (t) {
    case NodeType::real_branches: return "node-real-branches";
    case NodeType::conjugate_branches: return "node-conjugate-branches";
    case NodeType::cusp: return "cusp";
    case NodeType::tacnode: return "tacnode";
    case NodeType::non_reduced: return "non-reduced";
  }
  return "?";
}

struct SingularPointInfo {
  Slice p;
  Sphere sphere;
  NodeType type;
};

struct SectionResult {
  SectionClass cls;
  std::vector<SingularPointInfo> singular;
  std::vector<TraceComponent> traces_s1, traces_s2;
  bool non_reduced = false;
};

// constraint system for the section curve on the real locus
inline ConstraintSystem section_system(const Surface& s, const RVec5d& h) {
  ConstraintSystem sys;
  sys.n = 4;
  sys.k = 3;
  double al = to_double(s.params.alpha), be = to_double(s.params.beta),
         ga = to_double(s.params.gamma);
  RVec5d hh = h;
  sys.F = [al, be, ga, hh](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(3);
    v(0) = x(2) * x(2) + x(3) * x(3) - 1.0;
    v(1) = x(0) * x(0) + x(1) * x(1) + al - be * x(2) * x(2) - ga * x(3) * x(3);
    v(2) = hh[0] * x(0) + hh[1] * x(1) + hh[2] + hh[3] * x(2) + hh[4] * x(3);
    return v;
  };
  sys.J = [be, ga, hh](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j(3, 4);
    j << 0, 0, 2 * x(2), 2 * x(3),
        2 * x(0), 2 * x(1), -2 * be * x(2), -2 * ga * x(3),
        hh[0], hh[1], hh[3], hh[4];
    return j;
  };
  return sys;
}

namespace pencil_detail {

// seeds where the hyperplane changes sign along the (theta, phi) grid
inline std::vector<Eigen::VectorXd> section_seeds(const Surface& s, const RVec5d& h, Sphere which,
                                                  int grid) {
  auto chart = segre_real::sphere_chart(s, which);
  double span = chart.theta_hi - chart.theta_lo;
  std::vector<Eigen::VectorXd> seeds;
  auto value = [&](int i, int j, Slice* out) {
    double th = chart.theta_lo + span * i / (grid + 1);
    double ph = 2 * M_PI * j / grid;
    if (chart.r2(th) <= 1e-12) return std::numeric_limits<double>::quiet_NaN();
    Slice q = segre_real::sphere_point(chart, th, ph);
    if (out) *out = q;
    return dot(h, slice_to_rvec(q));
  };
  for (int i = 1; i <= grid; ++i)
    for (int j = 0; j < grid; ++j) {
      Slice q;
      double v = value(i, j, &q);
      if (std::isnan(v)) continue;
      Slice qn;
      double vth = (i < grid) ? value(i + 1, j, &qn) : std::numeric_limits<double>::quiet_NaN();
      double vph = value(i, (j + 1) % grid, &qn);
      if (!std::isnan(vth) && v * vth <= 0) seeds.push_back(q);
      else if (!std::isnan(vph) && v * vph <= 0) seeds.push_back(q);
    }
  return seeds;
}

}  // namespace pencil_detail

struct SectionOptions {
  int seed_grid = 48;
  int tangency_grid = 16;
  double singular_value_tol = 1e-8;
  StepPolicy trace;
  SectionOptions() {
    trace.hmax = 5e-2;
    trace.snap_radius = 1e-3;
  }
};

inline SectionResult classify_section(const Surface& s, const RVec5d& h_in,
                                      const SectionOptions& opt = {}) {
  segre_real::require_spheres(s);
  RVec5d h = h_in;
  double hn = rnorm(h);
  if (hn == 0) throw Error(Err::DegenerateInput, "zero hyperplane");
  for (auto& c : h) c /= hn;

  SectionResult res;

  // hyperplanes through the node line (A = B = 0) are fibered over a line in
  // the base plane: only the tangential (double conic) and the irregular
  // family are supported here
  if (std::abs(h[0]) < 1e-10 && std::abs(h[1]) < 1e-10) {
    double c2 = h[2], c3 = h[3], c4 = h[4];
    double dual = c2 * c2 - c3 * c3 - c4 * c4;
    if (std::abs(dual) < 1e-9) {
      // tangent line of Lambda: the unique non-reduced member through the
      // tangency point; its real locus is the (double) fiber circle
      res.non_reduced = true;
      res.cls = SectionClass::DoubleConicCircle;
      auto sys = section_system(s, h);
      for (Sphere which : {Sphere::S1, Sphere::S2}) {
        auto seeds = pencil_detail::section_seeds(s, h, which, opt.seed_grid);
        auto comps = trace_level_set(sys, seeds, opt.trace);
        (which == Sphere::S1 ? res.traces_s1 : res.traces_s2) = std::move(comps);
      }
      return res;
    }
    // irregular member: the line must pass through a discriminant point
    bool irregular = false;
    for (int i = 0; i < 4 && !irregular; ++i) {
      const auto& lm = s.lambda[static_cast<size_t>(i)];
      double v = c2 * lm.x[0].re + c3 * lm.x[1].re + c4 * lm.x[2].re;
      if (std::abs(v) < 1e-8 * (1 + std::abs(to_double(s.params.a)))) irregular = true;
    }
    if (!irregular)
      throw Error(Err::UnsupportedSection,
                  "section through the nodes is neither tangential nor irregular");
    // classified exactly like the regular J4 members: isolated node p_i plus
    // whatever the residual fiber cuts out; fall through to the generic path
  }

  // singular points on both spheres: tangencies with critical value 0
  for (Sphere which : {Sphere::S1, Sphere::S2}) {
    for (const auto& t : find_tangencies(s, h, which, opt.tangency_grid)) {
      if (std::abs(t.value) > opt.singular_value_tol) continue;
      SingularPointInfo info;
      info.p = t.p;
      info.sphere = which;
      NodeJet nj = node_jet(s, t.p, h);
      // the cuspidal angle carries ~1e-9 of root-finding error, which shows
      // up linearly in the discriminant; generic members sit at O(1) relative
      if (nj.disc > 1e-5 * nj.scale)
        info.type = NodeType::real_branches;
      else if (nj.disc < -1e-5 * nj.scale)
        info.type = NodeType::conjugate_branches;
      else {
        // degenerate jet: cusp generically, tacnode on the B3 stratum
        bool on_b3 = std::abs(t.p(2)) < 1e-6;
        info.type = on_b3 ? NodeType::tacnode : NodeType::cusp;
      }
      res.singular.push_back(info);
    }
  }

  // trace the real locus of the section on both spheres
  auto sys = section_system(s, h);
  for (Sphere which : {Sphere::S1, Sphere::S2}) {
    std::vector<SingularPoint> marked;
    for (const auto& si : res.singular)
      if (si.sphere == which && si.type == NodeType::real_branches) {
        SingularPoint m;
        m.location = si.p;
        m.type = SingularType::node;
        marked.push_back(m);
      }
    auto seeds = pencil_detail::section_seeds(s, h, which, opt.seed_grid);
    // seed also slightly off singular points with real branches
    for (const auto& m : marked) {
      Slice q(m.location(0), m.location(1), m.location(2), m.location(3));
      auto branches = node_branches(s, q, h);
      for (const auto& b : branches) {
        seeds.push_back(m.location + 0.01 * b);
        seeds.push_back(m.location - 0.01 * b);
      }
    }
    auto comps = trace_level_set(sys, seeds, opt.trace, marked);
    (which == Sphere::S1 ? res.traces_s1 : res.traces_s2) = std::move(comps);
  }

  // assemble the class
  auto has_curve = [&](const std::vector<TraceComponent>& comps) {
    for (const auto& c : comps)
      if (c.pts.size() > 8 && c.diameter > 1e-4) return true;
    return false;
  };
  bool s1_curve = has_curve(res.traces_s1), s2_curve = has_curve(res.traces_s2);
  const SingularPointInfo* node_s1 = nullptr;
  int s1_sing = 0, s2_sing = 0;
  NodeType t1 = NodeType::conjugate_branches;
  for (const auto& si : res.singular) {
    if (si.sphere == Sphere::S1) {
      ++s1_sing;
      if (!node_s1) { node_s1 = &si; t1 = si.type; }
    } else {
      ++s2_sing;
    }
  }

  if (t1 == NodeType::tacnode && node_s1) {
    res.cls = SectionClass::TacnodePoint;
  } else if (t1 == NodeType::cusp && node_s1) {
    res.cls = SectionClass::CuspLoop_S1;
  } else if (t1 == NodeType::real_branches && node_s1) {
    res.cls = SectionClass::Figure8_S1;
  } else if (s1_curve) {
    res.cls = SectionClass::PointPlusCircle_S1;
  } else if (s2_curve) {
    res.cls = SectionClass::PointPlusCircle_S2;
  } else if (s1_sing >= 2) {
    res.cls = SectionClass::TwoPoints_S1;
  } else if (s2_sing >= 1 && s1_sing >= 1) {
    res.cls = SectionClass::OnePointPair_S2;
  } else {
    res.cls = SectionClass::NodeOnly;
  }
  return res;
}

// ----- the per-point profile -------------------------------------------------
struct IntervalInfo {
  std::string name;      // J1..J5
  double start, length;  // arc in the +direction from `start`
  double midpoint;
  SectionClass cls;
};

struct PencilProfile {
  PencilFrame frame;
  SpecialHyperplanes special;
  bool merged;
  std::vector<IntervalInfo> intervals;
  SectionClass class_H1, class_H2, class_H3, class_H4, class_H0;
  std::vector<PencilMismatch> mismatches;
};

namespace pencil_detail {

// expected classes per the interval lemmas
inline SectionClass expected_interval_class(const std::string& name) {
  if (name == "J1") return SectionClass::Figure8_S1;
  if (name == "J2") return SectionClass::PointPlusCircle_S1;
  if (name == "J4") return SectionClass::PointPlusCircle_S2;
  return SectionClass::NodeOnly;  // J3, J5
}

}  // namespace pencil_detail

inline PencilProfile pencil_profile(const Surface& s, const Slice& p,
                                    const SectionOptions& opt = {}, bool classify = true) {
  PencilProfile prof;
  prof.frame = tangent_pencil(s, p);
  prof.special = special_hyperplanes(s, prof.frame);
  prof.merged = prof.special.merged;
  const auto& sp = prof.special;

  auto note = [&](const std::string& msg) { prof.mismatches.push_back({msg}); };

  // orientation: J1 runs from psi0 to psi1 avoiding the covering members
  double len_fwd = arc::forward(sp.psi0, sp.psi1);
  bool fwd_clear = !arc::contains(sp.psi0, len_fwd, sp.psi2) &&
                   !arc::contains(sp.psi0, len_fwd, sp.psi3) &&
                   !arc::contains(sp.psi0, len_fwd, sp.psi4);
  // walk the circle in the orientation that makes J1 the clear arc
  bool reverse = !fwd_clear;
  auto fdir = [&](double a, double b) { return reverse ? arc::forward(b, a) : arc::forward(a, b); };
  auto interval = [&](const std::string& name, double a, double b) {
    IntervalInfo info;
    info.name = name;
    double len = fdir(a, b);
    info.start = reverse ? b : a;
    info.length = len;
    info.midpoint = arc::wrap(info.start + len / 2);
    return info;
  };

  // cyclic order check: H0, J1, H1, (J2, H3 unless merged), J3, H2, J4, H4, J5
  {
    double l1 = fdir(sp.psi0, sp.psi1);
    auto check_clear = [&](double a, double len, const std::string& name) {
      for (auto [ang, nm] :
           {std::pair{sp.psi0, "H0"}, {sp.psi1, "H1"}, {sp.psi2, "H2"}, {sp.psi3, "H3"}, {sp.psi4, "H4"}}) {
        double st = reverse ? arc::wrap(a - len) : a;
        if (arc::contains(st, len, ang)) note(name + " crossed by " + nm);
      }
    };
    check_clear(sp.psi0, l1, "J1");
    if (!sp.merged) check_clear(sp.psi1, fdir(sp.psi1, sp.psi3), "J2");
    check_clear(sp.psi3, fdir(sp.psi3, sp.psi2), "J3");
    check_clear(sp.psi2, fdir(sp.psi2, sp.psi4), "J4");
    check_clear(sp.psi4, fdir(sp.psi4, sp.psi0), "J5");
  }

  prof.intervals.push_back(interval("J1", sp.psi0, sp.psi1));
  if (!sp.merged) prof.intervals.push_back(interval("J2", sp.psi1, sp.psi3));
  prof.intervals.push_back(interval("J3", sp.psi3, sp.psi2));
  prof.intervals.push_back(interval("J4", sp.psi2, sp.psi4));
  prof.intervals.push_back(interval("J5", sp.psi4, sp.psi0));

  // Hessian sign: positive exactly on J1
  {
    for (auto& iv : prof.intervals) {
      double v = sp.hess.eval(iv.midpoint);
      if (iv.name == "J1" ? v <= 0 : v >= 0)
        note("Hessian sign on " + iv.name + " midpoint inconsistent");
    }
  }

  if (classify) {
    for (auto& iv : prof.intervals) {
      auto sec = classify_section(s, prof.frame.at(iv.midpoint), opt);
      iv.cls = sec.cls;
      auto expect = pencil_detail::expected_interval_class(iv.name);
      if (sec.cls != expect)
        note(iv.name + " classified " + section_class_name(sec.cls) + ", expected " +
             section_class_name(expect));
    }
    prof.class_H0 = classify_section(s, sp.H0, opt).cls;
    if (prof.class_H0 != SectionClass::DoubleConicCircle) note("H0 is not the double conic");
    prof.class_H1 = classify_section(s, sp.H1, opt).cls;
    if (!sp.merged && prof.class_H1 != SectionClass::CuspLoop_S1) note("H1 is not a cusp loop");
    if (sp.merged && prof.class_H1 != SectionClass::TacnodePoint) note("merged H1=H3 is not a tacnode");
    prof.class_H3 = classify_section(s, sp.H3, opt).cls;
    if (!sp.merged && prof.class_H3 != SectionClass::TwoPoints_S1) note("H3 is not two points on S1");
    prof.class_H2 = classify_section(s, sp.H2, opt).cls;
    if (prof.class_H2 != SectionClass::OnePointPair_S2) note("H2 is not a point pair across spheres");
    prof.class_H4 = classify_section(s, sp.H4, opt).cls;
    if (prof.class_H4 != SectionClass::OnePointPair_S2) note("H4 is not a point pair across spheres");
  }
  return prof;
}

}  // namespace miniweyl
