#pragma once

// Small dense linear algebra over an arbitrary field (double, Rat, or complex
// over either), plus double-precision helpers backed by Eigen: least-squares
// quadratic-form fitting and signature computation.

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

#include "miniweyl/scalar.hpp"

namespace miniweyl {

// magnitude used only for pivot selection / zero tests
inline double mag(double x) { return std::abs(x); }
inline double mag(const Rat& q) { return std::abs(to_double(q)); }
template <class R>
inline double mag(const Cx<R>& z) { return std::sqrt(to_double(norm2(z))); }

template <class K>
inline bool exactly_zero(const K& x) { return x == K(0); }

template <class K>
class Mat {
 public:
  Mat() : r_(0), c_(0) {}
  Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c, K(0)) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  K& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const K& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

 private:
  int r_, c_;
  std::vector<K> a_;
};

// Gaussian elimination with full magnitude pivoting. Exact fields eliminate
// exactly; approx fields use `tol` (relative to the largest entry) for rank
// decisions.
template <class K>
struct Echelon {
  Mat<K> m;                   // reduced rows
  std::vector<int> pivot_col; // per pivot row
  int rank = 0;
  K det_factor = K(1);        // product of pivots with swap signs (square case)
  bool swapped_odd = false;
};

template <class K>
Echelon<K> echelon(Mat<K> m, double tol = 1e-12) {
  constexpr bool ex = std::is_same_v<K, Rat> || std::is_same_v<K, Cx<Rat>>;
  double scale = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) scale = std::max(scale, mag(m(i, j)));
  double thresh = ex ? 0.0 : tol * std::max(scale, 1e-300);

  Echelon<K> e;
  e.pivot_col.clear();
  int row = 0;
  std::vector<int> perm_sign_swaps;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int best = -1;
    double bm = thresh;
    for (int i = row; i < m.rows(); ++i) {
      double v = mag(m(i, col));
      if (v > bm) { bm = v; best = i; }
    }
    if (best < 0) continue;
    if (best != row) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
      e.swapped_odd = !e.swapped_odd;
    }
    K piv = m(row, col);
    e.det_factor = e.det_factor * piv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || exactly_zero(m(i, col))) continue;
      K f = m(i, col) / piv;
      for (int j = col; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(row, j);
      m(i, col) = K(0);
    }
    e.pivot_col.push_back(col);
    ++row;
  }
  e.rank = row;
  e.m = std::move(m);
  return e;
}

template <class K>
K det(const Mat<K>& m, double tol = 1e-12) {
  auto e = echelon(m, tol);
  if (e.rank < m.rows()) return K(0);
  return e.swapped_odd ? -e.det_factor : e.det_factor;
}

// Basis of the right kernel, one vector per free column.
template <class K>
std::vector<std::vector<K>> kernel(const Mat<K>& m, double tol = 1e-12) {
  auto e = echelon(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_col) is_pivot[c] = true;
  std::vector<std::vector<K>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<K> v(m.cols(), K(0));
    v[free] = K(1);
    for (int r = 0; r < e.rank; ++r) {
      int pc = e.pivot_col[r];
      v[pc] = -e.m(r, free) / e.m(r, pc);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class K>
std::optional<std::vector<K>> solve_square(Mat<K> m, std::vector<K> b, double tol = 1e-12) {
  int n = m.rows();
  Mat<K> aug(n, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = b[i];
  }
  auto e = echelon(aug, tol);
  if (e.rank < n) return std::nullopt;
  std::vector<K> x(n, K(0));
  for (int r = 0; r < n; ++r) x[e.pivot_col[r]] = e.m(r, n) / e.m(r, e.pivot_col[r]);
  return x;
}

// ----------------------------------------------------------------------
// Quadratic-form fitting (double precision)
// ----------------------------------------------------------------------
struct QuadFit {
  Eigen::Matrix3d form;   // symmetric
  double rel_residual;    // ||A c - v|| / max(||v||, eps)
};

// Least squares over symmetric 3x3 forms from (direction, value) samples.
// Requires the directions to span all six quadratic monomials.
inline QuadFit fit_quadratic_form(const std::vector<std::pair<Eigen::Vector3d, double>>& samples) {
  if (samples.size() < 6)
    throw Error(Err::DegenerateInput, "fit_quadratic_form needs >= 6 samples");
  Eigen::MatrixXd A(samples.size(), 6);
  Eigen::VectorXd v(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& d = samples[i].first;
    A(static_cast<int>(i), 0) = d(0) * d(0);
    A(static_cast<int>(i), 1) = d(1) * d(1);
    A(static_cast<int>(i), 2) = d(2) * d(2);
    A(static_cast<int>(i), 3) = 2 * d(0) * d(1);
    A(static_cast<int>(i), 4) = 2 * d(0) * d(2);
    A(static_cast<int>(i), 5) = 2 * d(1) * d(2);
    v(static_cast<int>(i)) = samples[i].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 6)
    throw Error(Err::DegenerateInput, "sample directions do not span the 6 quadratic monomials");
  Eigen::VectorXd c = qr.solve(v);
  QuadFit out;
  out.form << c(0), c(3), c(4),
              c(3), c(1), c(5),
              c(4), c(5), c(2);
  double denom = std::max(v.norm(), 1e-300);
  out.rel_residual = (A * c - v).norm() / denom;
  return out;
}

struct Signature {
  int plus = 0, minus = 0, null = 0;
  bool operator==(const Signature& o) const {
    return plus == o.plus && minus == o.minus && null == o.null;
  }
};

inline Signature signature_of(const Eigen::Matrix3d& g, double null_tol_rel = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  Signature s;
  for (int i = 0; i < 3; ++i) {
    double l = es.eigenvalues()(i);
    if (std::abs(l) <= null_tol_rel * scale) ++s.null;
    else if (l > 0) ++s.plus;
    else ++s.minus;
  }
  return s;
}

}  // namespace miniweyl
