#pragma once

// Univariate polynomials of low degree: approx root finding via companion
// matrix eigenvalues, exact factoring of rationally-splitting polynomials,
// division / deflation, and binary-quadratic discriminants.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

#include "miniweyl/linalg.hpp"
#include "miniweyl/scalar.hpp"

namespace miniweyl {

template <class K>
struct Poly {
  std::vector<K> c;  // ascending: c[0] + c[1] t + ...

  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<K> coeffs) : c(coeffs) { trim(); }

  void trim() {
    while (!c.empty() && exactly_zero(c.back())) c.pop_back();
  }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  const K& lc() const { return c.back(); }

  template <class T>
  T eval(const T& t) const {
    T acc(0);
    for (int i = deg(); i >= 0; --i) acc = acc * t + T(c[i]);
    return acc;
  }

  Poly deriv() const {
    if (c.size() <= 1) return Poly();
    std::vector<K> d(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) d[i - 1] = K(static_cast<long>(i)) * c[i];
    return Poly(std::move(d));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<K> r(a.c.size() + b.c.size() - 1, K(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<K> r(std::max(a.c.size(), b.c.size()), K(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] = r[i] - b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const K& s, const Poly& a) {
    std::vector<K> r = a.c;
    for (auto& x : r) x = s * x;
    return Poly(std::move(r));
  }
};

template <class K>
struct DivMod {
  Poly<K> q, r;
};

template <class K>
DivMod<K> divmod(Poly<K> a, const Poly<K>& b) {
  DivMod<K> out;
  if (b.is_zero()) throw Error(Err::DegenerateInput, "division by zero polynomial");
  std::vector<K> q(a.deg() >= b.deg() ? a.deg() - b.deg() + 1 : 0, K(0));
  while (!a.is_zero() && a.deg() >= b.deg()) {
    K f = a.lc() / b.lc();
    int shift = a.deg() - b.deg();
    q[shift] = f;
    for (int i = 0; i <= b.deg(); ++i) a.c[i + shift] = a.c[i + shift] - f * b.c[i];
    a.trim();
  }
  out.q = Poly<K>(std::move(q));
  out.r = std::move(a);
  return out;
}

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    auto dm = divmod(a, b);
    a = b;
    b = dm.r;
  }
  if (!a.is_zero()) {
    K inv = K(1) / a.lc();
    for (auto& x : a.c) x = inv * x;
  }
  return a;
}

// ----------------------------------------------------------------------
// Approx roots (complex double), degree <= 4 via companion eigenvalues
// ----------------------------------------------------------------------
struct RootMult {
  Cxd z;
  int mult;
};

inline std::vector<RootMult> cluster_roots(std::vector<Cxd> raw, double tol) {
  std::vector<RootMult> out;
  std::vector<bool> used(raw.size(), false);
  for (size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Cxd sum = raw[i];
    int m = 1;
    used[i] = true;
    for (size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      double d = cx_abs(Cxd(raw[j].re - sum.re / m, raw[j].im - sum.im / m));
      double sc = 1.0 + cx_abs(raw[j]);
      if (d <= tol * sc) {
        sum += raw[j];
        ++m;
        used[j] = true;
      }
    }
    out.push_back({Cxd(sum.re / m, sum.im / m), m});
  }
  std::sort(out.begin(), out.end(), [](const RootMult& a, const RootMult& b) {
    if (a.z.re != b.z.re) return a.z.re < b.z.re;
    return a.z.im < b.z.im;
  });
  return out;
}

inline std::vector<RootMult> solve_poly(const Poly<Cxd>& p, double cluster_tol = 1e-6) {
  if (p.is_zero()) throw Error(Err::DegenerateInput, "zero polynomial");
  int n = p.deg();
  if (n == 0) return {};
  std::complex<double> lead(p.lc().re, p.lc().im);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> ci(p.c[i].re, p.c[i].im);
    comp(i, n - 1) = -ci / lead;
    if (i > 0) comp(i, i - 1) = 1.0;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Cxd> raw;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    // one Newton polish step; multiple roots keep the raw eigenvalue
    Cxd zz(z.real(), z.imag());
    Cxd f = p.eval(zz), df = p.deriv().eval(zz);
    if (cx_abs(df) > 1e-8 * (1.0 + cx_abs(f))) {
      Cxd step = f / df;
      if (cx_abs(step) < 0.5 * (1.0 + cx_abs(zz))) zz = zz - step;
    }
    raw.push_back(zz);
  }
  return cluster_roots(std::move(raw), cluster_tol);
}

inline std::vector<RootMult> solve_poly_real(const std::vector<double>& ascending,
                                             double cluster_tol = 1e-6) {
  std::vector<Cxd> c;
  c.reserve(ascending.size());
  for (double x : ascending) c.emplace_back(x);
  return solve_poly(Poly<Cxd>(std::move(c)), cluster_tol);
}

// ----------------------------------------------------------------------
// Exact roots over Q(i): squarefree split by gcd, then linear/quadratic
// factors. Polynomials that do not split rationally report their
// discriminant instead of inventing roots.
// ----------------------------------------------------------------------
inline std::optional<CxQ> gaussian_sqrt(const CxQ& z) {
  if (z.im == 0) {
    if (z.re >= 0) {
      auto s = exact_sqrt(z.re);
      if (s) return CxQ(*s, Rat(0));
      return std::nullopt;
    }
    auto s = exact_sqrt(-z.re);
    if (s) return CxQ(Rat(0), *s);
    return std::nullopt;
  }
  Rat n = z.re * z.re + z.im * z.im;
  auto s = exact_sqrt(n);
  if (!s) return std::nullopt;
  auto x2 = (z.re + *s) / 2;
  auto x = exact_sqrt(x2);
  if (!x || *x == 0) return std::nullopt;
  Rat y = z.im / (2 * (*x));
  return CxQ(*x, y);
}

struct ExactRoots {
  bool complete = true;
  std::vector<std::pair<CxQ, int>> roots;
  CxQ residual_discriminant;  // of the unfactored part, when incomplete
  int unfactored_degree = 0;
};

namespace detail {

inline std::vector<BigInt> small_divisors(BigInt n, size_t cap = 4096) {
  if (n < 0) n = -n;
  std::vector<BigInt> out;
  if (n == 0) return out;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      out.push_back(n / d);
      if (out.size() > cap) return {};
    }
  }
  return out;
}

// Rational roots of a Q[t] polynomial by the rational-root theorem.
inline std::vector<Rat> rational_roots(const Poly<Rat>& p) {
  std::vector<Rat> found;
  if (p.deg() < 1) return found;
  // clear denominators
  BigInt denlcm = 1;
  for (const auto& q : p.c) denlcm = lcm(denlcm, denominator(q));
  std::vector<BigInt> ic(p.c.size());
  for (size_t i = 0; i < p.c.size(); ++i)
    ic[i] = numerator(p.c[i]) * (denlcm / denominator(p.c[i]));
  int lo = 0;
  while (lo < static_cast<int>(ic.size()) && ic[lo] == 0) ++lo;  // t = 0 roots
  for (int i = 0; i < lo; ++i) found.push_back(Rat(0));
  if (lo >= static_cast<int>(ic.size()) - 1) return found;
  auto ps = small_divisors(ic[lo]);
  auto qs = small_divisors(ic.back());
  if (ps.empty() || qs.empty()) return found;
  for (const auto& pp : ps)
    for (const auto& qq : qs)
      for (int sgn : {1, -1}) {
        Rat cand(sgn * pp, qq);
        if (p.eval(cand) == 0) {
          if (std::find(found.begin(), found.end(), cand) == found.end()) found.push_back(cand);
        }
      }
  return found;
}

}  // namespace detail

inline ExactRoots solve_poly_exact(const Poly<CxQ>& input) {
  if (input.is_zero()) throw Error(Err::DegenerateInput, "zero polynomial");
  ExactRoots out;
  // squarefree multiplicity split: p = prod s_k^k
  Poly<CxQ> p = input;
  {
    CxQ inv = CxQ(Rat(1)) / p.lc();
    for (auto& x : p.c) x = inv * x;
  }
  std::vector<Poly<CxQ>> sqfree;  // sqfree[k-1] has the multiplicity-k roots
  {
    Poly<CxQ> g = poly_gcd(p, p.deriv());
    Poly<CxQ> w = divmod(p, g).q;  // radical: each distinct root once
    while (w.deg() > 0) {
      Poly<CxQ> y = poly_gcd(w, g);  // radical of the higher-multiplicity part
      sqfree.push_back(divmod(w, y).q);
      w = y;
      g = divmod(g, y).q;
    }
  }
  for (size_t k = 0; k < sqfree.size(); ++k) {
    Poly<CxQ> f = sqfree[k];
    int multiplicity = static_cast<int>(k) + 1;
    if (f.deg() <= 0) continue;
    // peel linear factors with rational (or simple Gaussian) roots
    bool all_q = true;
    for (const auto& cc : f.c)
      if (!(cc.im == 0)) all_q = false;
    if (all_q && f.deg() >= 3) {
      std::vector<Rat> rcoef(f.c.size());
      for (size_t i = 0; i < f.c.size(); ++i) rcoef[i] = f.c[i].re;
      for (const Rat& r : detail::rational_roots(Poly<Rat>(std::move(rcoef)))) {
        out.roots.push_back({CxQ(r), multiplicity});
        f = divmod(f, Poly<CxQ>({CxQ(-r), CxQ(Rat(1))})).q;
      }
    }
    if (f.deg() == 1) {
      out.roots.push_back({-(f.c[0] / f.c[1]), multiplicity});
      continue;
    }
    if (f.deg() == 2) {
      CxQ a = f.c[2], b = f.c[1], c0 = f.c[0];
      CxQ disc = b * b - CxQ(Rat(4)) * a * c0;
      auto s = gaussian_sqrt(disc);
      if (s) {
        CxQ two_a = CxQ(Rat(2)) * a;
        out.roots.push_back({(-b + *s) / two_a, multiplicity});
        out.roots.push_back({(-b - *s) / two_a, multiplicity});
        continue;
      }
      out.complete = false;
      out.residual_discriminant = disc;
      out.unfactored_degree = std::max(out.unfactored_degree, 2);
      continue;
    }
    if (f.deg() >= 3) {
      out.complete = false;
      out.unfactored_degree = std::max(out.unfactored_degree, f.deg());
      // report disc of the residual factor (resultant of f and f')
      const Poly<CxQ>& df = f.deriv();
      int n = f.deg(), m = df.deg();
      Mat<CxQ> syl(n + m, n + m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) syl(i, i + j) = f.c[n - j];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) syl(m + i, i + j) = df.c[m - j];
      out.residual_discriminant = det(syl);
    }
  }
  return out;
}

// discriminant of a binary quadratic q2 t^2 + q1 t s + q0 s^2
template <class K>
inline K binquad_disc(const K& q2, const K& q1, const K& q0) {
  return q1 * q1 - K(4) * q2 * q0;
}

}  // namespace miniweyl
