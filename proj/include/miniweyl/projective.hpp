#pragma once

// Projective points and hyperplanes in CP2/CP3/CP4, the antiholomorphic real
// structure sigma, real-form coordinates for its fixed locus, and quadric
// forms. The real structure swaps X0 and X1 and conjugates:
//   sigma(X0,X1,X2,X3,X4) = (conj X1, conj X0, conj X2, conj X3, conj X4).
// A sigma-fixed point can be scaled so X0 = u+iv, X1 = u-iv and X2..X4 real;
// (u,v,x2,x3,x4) are its real-form coordinates. Real hyperplanes get dual
// real-form coordinates (A,B,h2,h3,h4) with the standard dot pairing.

#include <array>
#include <cmath>

#include "miniweyl/linalg.hpp"
#include "miniweyl/scalar.hpp"

namespace miniweyl {

template <class R, int N>
struct PPoint {
  std::array<Cx<R>, N> x{};

  Cx<R>& operator[](int i) { return x[i]; }
  const Cx<R>& operator[](int i) const { return x[i]; }

  bool all_zero() const {
    for (const auto& c : x)
      if (!c.is_zero()) return false;
    return true;
  }
};

template <class R, int N>
struct PForm {
  std::array<Cx<R>, N> c{};

  Cx<R>& operator[](int i) { return c[i]; }
  const Cx<R>& operator[](int i) const { return c[i]; }

  template <class Pt>
  Cx<R> eval(const Pt& p) const {
    Cx<R> s{};
    for (int i = 0; i < N; ++i) s += c[i] * p[i];
    return s;
  }
};

template <class R> using PPoint5 = PPoint<R, 5>;
template <class R> using PForm5 = PForm<R, 5>;
using PPoint5d = PPoint<double, 5>;
using PForm5d = PForm<double, 5>;

template <class R, int N>
int largest_coord(const std::array<Cx<R>, N>& v) {
  int best = 0;
  double bm = -1;
  for (int i = 0; i < N; ++i) {
    double m = to_double(norm2(v[i]));
    if (m > bm) { bm = m; best = i; }
  }
  return best;
}

// canonical representative: largest-modulus coordinate normalized to 1
template <class R, int N>
PPoint<R, N> canonical(const PPoint<R, N>& p) {
  if (p.all_zero()) throw Error(Err::DegenerateInput, "zero projective point");
  int k = largest_coord<R, N>(p.x);
  PPoint<R, N> q;
  for (int i = 0; i < N; ++i) q.x[i] = p.x[i] / p.x[k];
  return q;
}

template <class R, int N>
PForm<R, N> canonical(const PForm<R, N>& h) {
  int k = largest_coord<R, N>(h.c);
  if (h.c[k].is_zero()) throw Error(Err::DegenerateInput, "zero hyperplane");
  PForm<R, N> g;
  for (int i = 0; i < N; ++i) g.c[i] = h.c[i] / h.c[k];
  return g;
}

// equality up to a common nonzero complex scale, tested on 2x2 minors
// (stable under ties that make the canonical representative ambiguous)
template <class R, int N>
bool proj_equal(const PPoint<R, N>& a, const PPoint<R, N>& b, double tol = 1e-9) {
  double sa = 0, sb = 0;
  for (int i = 0; i < N; ++i) {
    sa = std::max(sa, mag(a.x[i]));
    sb = std::max(sb, mag(b.x[i]));
  }
  if (sa == 0 || sb == 0) throw Error(Err::DegenerateInput, "zero projective point");
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      Cx<R> minor = a.x[i] * b.x[j] - a.x[j] * b.x[i];
      if constexpr (field_traits<R>::exact) {
        if (!minor.is_zero()) return false;
      } else {
        if (mag(minor) > tol * sa * sb) return false;
      }
    }
  return true;
}

template <class R, int N>
bool proj_equal(const PForm<R, N>& a, const PForm<R, N>& b, double tol = 1e-9) {
  PPoint<R, N> pa, pb;
  pa.x = a.c;
  pb.x = b.c;
  return proj_equal(pa, pb, tol);
}

// ----------------------------------------------------------------------
// Real structure
// ----------------------------------------------------------------------
template <class R>
PPoint5<R> apply_real_structure(const PPoint5<R>& p) {
  PPoint5<R> q;
  q.x[0] = conj(p.x[1]);
  q.x[1] = conj(p.x[0]);
  for (int i = 2; i < 5; ++i) q.x[i] = conj(p.x[i]);
  return q;
}

// induced action on hyperplanes follows the same coefficient recipe
template <class R>
PForm5<R> apply_real_structure(const PForm5<R>& h) {
  PForm5<R> g;
  g.c[0] = conj(h.c[1]);
  g.c[1] = conj(h.c[0]);
  for (int i = 2; i < 5; ++i) g.c[i] = conj(h.c[i]);
  return g;
}

template <class R>
bool is_real(const PPoint5<R>& p, double tol = 1e-9) {
  return proj_equal(p, apply_real_structure(p), tol);
}

template <class R>
bool is_real(const PForm5<R>& h, double tol = 1e-9) {
  return proj_equal(h, apply_real_structure(h), tol);
}

// induced real structure on the base CP2 of the conic bundle (plain conjugation)
template <class R>
PPoint<R, 3> conjugate_point(const PPoint<R, 3>& p) {
  PPoint<R, 3> q;
  for (int i = 0; i < 3; ++i) q.x[i] = conj(p.x[i]);
  return q;
}

// ----------------------------------------------------------------------
// Real form of sigma-fixed points / real hyperplanes
// ----------------------------------------------------------------------
template <class R>
using RVec5 = std::array<R, 5>;  // (u, v, x2, x3, x4) or dual (A, B, h2, h3, h4)

using RVec5d = RVec5<double>;

template <class R>
R dot(const RVec5<R>& a, const RVec5<R>& b) {
  R s(0);
  for (int i = 0; i < 5; ++i) s += a[i] * b[i];
  return s;
}

inline double rnorm(const RVec5d& a) { return std::sqrt(dot(a, a)); }

template <class R>
PPoint5<R> complexify(const RVec5<R>& v) {
  PPoint5<R> p;
  p.x[0] = Cx<R>(v[0], v[1]);
  p.x[1] = Cx<R>(v[0], -v[1]);
  p.x[2] = Cx<R>(v[2]);
  p.x[3] = Cx<R>(v[3]);
  p.x[4] = Cx<R>(v[4]);
  return p;
}

template <class R>
PForm5<R> complexify_form(const RVec5<R>& h) {
  PForm5<R> f;
  R half = R(1) / R(2);
  f.c[0] = Cx<R>(h[0] * half, -h[1] * half);
  f.c[1] = Cx<R>(h[0] * half, h[1] * half);
  f.c[2] = Cx<R>(h[2]);
  f.c[3] = Cx<R>(h[3]);
  f.c[4] = Cx<R>(h[4]);
  return f;
}

// real_form(p): find a representative with X1 = conj(X0) and X2..X4 real.
// Exact mode demands literal sigma-fixedness after scaling by a rational;
// approx mode rotates by the half-phase of sigma(p)/p and checks tolerance.
template <class R>
RVec5<R> real_form(const PPoint5<R>& p, double tol = 1e-9);

template <>
inline RVec5<Rat> real_form<Rat>(const PPoint5<Rat>& p, double) {
  // scale by 1/Xj for the largest coordinate among X2..X4 if nonzero
  int k = -1;
  double best = 0;
  for (int i = 2; i < 5; ++i) {
    double m = to_double(norm2(p.x[i]));
    if (m > best) { best = m; k = i; }
  }
  PPoint5<Rat> q;
  if (k >= 0) {
    for (int i = 0; i < 5; ++i) q.x[i] = p.x[i] / p.x[k];
  } else {
    // point on the X2=X3=X4=0 line: (1,t,0,0,0) with |t| = 1 is sigma-fixed;
    // the representative mu*(1,t,...) is literal iff conj(mu) = mu*t, solved
    // by mu = 1 + 1/t (and mu = i when t = -1)
    if (p.x[0].is_zero() || p.x[1].is_zero())
      throw Error(Err::NotRealPoint, "node-line point is not sigma-fixed");
    CxQ t = p.x[1] / p.x[0];
    if (norm2(t) != Rat(1)) throw Error(Err::NotRealPoint, "no sigma-fixed representative");
    CxQ mu = CxQ(Rat(1)) + CxQ(Rat(1)) / t;
    if (mu.is_zero()) mu = CxQ(Rat(0), Rat(1));  // t = -1
    for (int i = 0; i < 5; ++i) q.x[i] = p.x[i] * (mu / p.x[0]);
  }
  if (apply_real_structure(q).x != q.x)
    throw Error(Err::NotRealPoint, "no sigma-fixed representative exists");
  return {q.x[0].re, q.x[0].im, q.x[2].re, q.x[3].re, q.x[4].re};
}

template <>
inline RVec5<double> real_form<double>(const PPoint5d& p, double tol) {
  PPoint5d s = apply_real_structure(p);
  int k = largest_coord<double, 5>(p.x);
  Cxd ratio = s.x[k] / p.x[k];  // |ratio| = 1 when sigma-fixed
  double half = 0.5 * std::atan2(ratio.im, ratio.re);
  Cxd mu(std::cos(half), std::sin(half));
  PPoint5d q;
  double scale = 0;
  for (int i = 0; i < 5; ++i) {
    q.x[i] = mu * p.x[i];
    scale = std::max(scale, cx_abs(q.x[i]));
  }
  PPoint5d qs = apply_real_structure(q);
  for (int i = 0; i < 5; ++i) {
    if (cx_abs(qs.x[i] - q.x[i]) > tol * std::max(scale, 1.0))
      throw Error(Err::NotRealPoint, "no sigma-fixed representative within tolerance");
  }
  return {q.x[0].re, q.x[0].im, q.x[2].re, q.x[3].re, q.x[4].re};
}

// real dual form of a sigma-invariant hyperplane
template <class R>
RVec5<R> real_form_of_hyperplane(const PForm5<R>& h, double tol = 1e-9) {
  PPoint5<R> as_pt;
  as_pt.x = h.c;
  RVec5<R> v = real_form<R>(as_pt, tol);
  // (u,v)-representation of (h0, conj h0) has h0 = u + iv; dual coords
  // (A,B) = (2 Re h0, -2 Im h0)
  return {R(2) * v[0], R(-2) * v[1], v[2], v[3], v[4]};
}

// ----------------------------------------------------------------------
// Quadric forms: symmetric NxN coefficient matrices
// ----------------------------------------------------------------------
template <class R, int N>
struct QuadricForm {
  std::array<std::array<Cx<R>, N>, N> m{};  // symmetric

  static QuadricForm diag_real(const std::array<R, N>& d) {
    QuadricForm q;
    for (int i = 0; i < N; ++i) q.m[i][i] = Cx<R>(d[i]);
    return q;
  }

  void set_sym(int i, int j, Cx<R> v) {
    m[i][j] = v;
    m[j][i] = v;
  }

  template <class Pt>
  Cx<R> eval(const Pt& p) const {
    Cx<R> s{};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) s += m[i][j] * p[i] * p[j];
    return s;
  }

  // gradient as a hyperplane (up to the factor 2)
  template <class Pt>
  PForm<R, N> gradient(const Pt& p) const {
    PForm<R, N> g;
    for (int i = 0; i < N; ++i) {
      Cx<R> s{};
      for (int j = 0; j < N; ++j) s += m[i][j] * p[j];
      g.c[i] = s;
    }
    return g;
  }
};

template <class R>
using Quadric5 = QuadricForm<R, 5>;

}  // namespace miniweyl
