#pragma once

// Scalar arithmetic in two modes: exact (arbitrary-precision rational) and
// approx (double). Complex numbers are built over either ring; exact-mode
// arithmetic is error-free, approx-mode comparisons always take a tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace miniweyl {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class ScalarMode { exact, approx };

inline const char* mode_name(ScalarMode m) {
  return m == ScalarMode::exact ? "exact" : "approx";
}

// ----------------------------------------------------------------------
// Named error conditions (one per contract failure across the modules)
// ----------------------------------------------------------------------
enum class Err {
  MixedModes,
  NotRealPoint,
  DegenerateParams,
  ExactModeUnavailable,
  NoSpheres,
  IndeterminacyPoint,
  CommonComponent,
  DegenerateInput,
  NotOnSurface,
  AtCStarFixedPoint,
  PoleChartDegenerate,
  JetFailure,
  UnsupportedSection,
  TableMismatch,
  SeedProjectionFailure,
  StepUnderflow,
  GridTooCoarse,
  AmbiguousTopology,
  FiberBoundary,
  DeflationFailure,
  ProjectionDegenerate,
  SignatureMismatch,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::MixedModes: return "MixedModes";
    case Err::NotRealPoint: return "NotRealPoint";
    case Err::DegenerateParams: return "DegenerateParams";
    case Err::ExactModeUnavailable: return "ExactModeUnavailable";
    case Err::NoSpheres: return "NoSpheres";
    case Err::IndeterminacyPoint: return "IndeterminacyPoint";
    case Err::CommonComponent: return "CommonComponent";
    case Err::DegenerateInput: return "DegenerateInput";
    case Err::NotOnSurface: return "NotOnSurface";
    case Err::AtCStarFixedPoint: return "AtCStarFixedPoint";
    case Err::PoleChartDegenerate: return "PoleChartDegenerate";
    case Err::JetFailure: return "JetFailure";
    case Err::UnsupportedSection: return "UnsupportedSection";
    case Err::TableMismatch: return "TableMismatch";
    case Err::SeedProjectionFailure: return "SeedProjectionFailure";
    case Err::StepUnderflow: return "StepUnderflow";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::AmbiguousTopology: return "AmbiguousTopology";
    case Err::FiberBoundary: return "FiberBoundary";
    case Err::DeflationFailure: return "DeflationFailure";
    case Err::ProjectionDegenerate: return "ProjectionDegenerate";
    case Err::SignatureMismatch: return "SignatureMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Err code;
  Error(Err c, const std::string& msg)
      : std::runtime_error(std::string(err_name(c)) + ": " + msg), code(c) {}
};

// ----------------------------------------------------------------------
// Field traits
// ----------------------------------------------------------------------
template <class R>
struct field_traits;

template <>
struct field_traits<double> {
  static constexpr bool exact = false;
  static double from_rat(const Rat& q) { return q.template convert_to<double>(); }
  static double from_int(long n) { return static_cast<double>(n); }
};

template <>
struct field_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& q) { return q; }
  static Rat from_int(long n) { return Rat(n); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rat& q) { return q.convert_to<double>(); }

// Exact square root of a non-negative rational, when it exists in Q.
inline std::optional<Rat> exact_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  if (q == 0) return Rat(0);
  BigInt num = numerator(q), den = denominator(q);
  BigInt sn = sqrt(num), sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rat(sn, sd);
}

// ----------------------------------------------------------------------
// Complex numbers over a ring R (std::complex is UB for non-FP types)
// ----------------------------------------------------------------------
template <class R>
struct Cx {
  R re{}, im{};

  Cx() = default;
  Cx(R r) : re(std::move(r)) {}
  Cx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cx operator*(const R& s, const Cx& a) { return {s * a.re, s * a.im}; }
  friend Cx operator/(const Cx& a, const Cx& b) {
    R n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Cx& operator+=(const Cx& b) { *this = *this + b; return *this; }
  Cx& operator-=(const Cx& b) { *this = *this - b; return *this; }
  Cx& operator*=(const Cx& b) { *this = *this * b; return *this; }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Cx& a, const Cx& b) { return !(a == b); }

  bool is_zero() const { return re == R(0) && im == R(0); }
};

template <class R>
inline Cx<R> conj(const Cx<R>& a) { return {a.re, -a.im}; }

template <class R>
inline R norm2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }

inline double cx_abs(const Cx<double>& a) { return std::hypot(a.re, a.im); }

using Cxd = Cx<double>;
using CxQ = Cx<Rat>;

// ----------------------------------------------------------------------
// Runtime-tagged scalar: the external-facing value type. Mode mixing in a
// binary operation is rejected, exact arithmetic is error-free.
// ----------------------------------------------------------------------
class Scalar {
 public:
  Scalar() : mode_(ScalarMode::approx), d_(0) {}
  static Scalar exact(Rat q) { Scalar s; s.mode_ = ScalarMode::exact; s.q_ = std::move(q); s.d_ = 0; return s; }
  static Scalar approx(double x) { Scalar s; s.mode_ = ScalarMode::approx; s.d_ = x; return s; }

  ScalarMode mode() const { return mode_; }
  const Rat& rat() const { require(ScalarMode::exact); return q_; }
  double dbl() const { require(ScalarMode::approx); return d_; }
  double as_double() const { return mode_ == ScalarMode::exact ? to_double(q_) : d_; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, '+'); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, '-'); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return combine(a, b, '*'); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return combine(a, b, '/'); }

  // Exact equality is literal; approx equality always carries a tolerance.
  bool equals(const Scalar& b, double tol) const {
    if (mode_ != b.mode_) throw Error(Err::MixedModes, "comparison across scalar modes");
    if (mode_ == ScalarMode::exact) return q_ == b.q_;
    return std::abs(d_ - b.d_) <= tol;
  }

 private:
  void require(ScalarMode m) const {
    if (mode_ != m) throw Error(Err::MixedModes, "scalar accessed in wrong mode");
  }
  static Scalar combine(const Scalar& a, const Scalar& b, char op) {
    if (a.mode_ != b.mode_) throw Error(Err::MixedModes, "arithmetic across scalar modes");
    if (a.mode_ == ScalarMode::exact) {
      switch (op) {
        case '+': return exact(a.q_ + b.q_);
        case '-': return exact(a.q_ - b.q_);
        case '*': return exact(a.q_ * b.q_);
        default:  return exact(a.q_ / b.q_);
      }
    }
    switch (op) {
      case '+': return approx(a.d_ + b.d_);
      case '-': return approx(a.d_ - b.d_);
      case '*': return approx(a.d_ * b.d_);
      default:  return approx(a.d_ / b.d_);
    }
  }

  ScalarMode mode_;
  Rat q_;
  double d_;
};

// Repo-wide default tolerances; every override point takes them explicitly.
struct Tolerances {
  double proj_eq = 1e-9;        // projective equality after canonical normalization
  double on_variety = 1e-10;    // membership of traced/parametrized samples
  double trace_closure = 1e-6;  // closure gap, relative to trace diameter
  double fit_residual = 1e-10;  // quadratic-form fit on consistent data
  double angle = 1e-8;          // agreement of special pencil angles
  double identity = 0.0;        // verify-identities slack (exact mode: 0)
};

inline std::string rat_to_string(const Rat& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

}  // namespace miniweyl
