#pragma once

// Predictor-corrector continuation of implicitly defined curves: k = n-1
// smooth constraints in R^n, tangent predictor from the Jacobian kernel,
// Gauss-Newton corrector, adaptive steps, closed-loop detection, marked
// singular points (nodes/cusps) with branch accounting, and topology
// classification of traces on the real spheres.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "miniweyl/scalar.hpp"

namespace miniweyl {

struct ConstraintSystem {
  int n = 0;  // ambient dimension
  int k = 0;  // number of constraints (k < n; k = n-1 for curve tracing)
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> F;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> J;  // optional; finite-difference fallback

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    if (J) return J(x);
    Eigen::MatrixXd out(k, n);
    double h = 1e-7;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      double step = h * std::max(1.0, std::abs(x(j)));
      xp(j) += step;
      xm(j) -= step;
      out.col(j) = (F(xp) - F(xm)) / (2 * step);
    }
    return out;
  }

  // directional finite differences vs supplied derivatives on random probes
  double derivative_check(const std::vector<Eigen::VectorXd>& probes) const {
    if (!J) return 0.0;
    double worst = 0;
    for (const auto& x : probes) {
      Eigen::MatrixXd a = J(x);
      ConstraintSystem fd{n, k, F, nullptr};
      Eigen::MatrixXd b = fd.jacobian(x);
      double denom = std::max(a.norm(), 1.0);
      worst = std::max(worst, (a - b).norm() / denom);
    }
    return worst;
  }
};

enum class SingularType { node, cusp };

struct SingularPoint {
  Eigen::VectorXd location;
  SingularType type = SingularType::node;
};

struct SingularVisit {
  int marked_index;
  int sample_index;     // sample that was snapped onto the marked point
  Eigen::VectorXd tangent_in;
};

struct StepStats {
  int steps = 0;
  int corrector_failures = 0;
  double min_step = 1e300, max_step = 0;
};

struct TraceComponent {
  std::vector<Eigen::VectorXd> pts;
  bool closed = false;
  double closure_gap = 0;   // distance start <-> end
  double diameter = 0;
  double arc_length = 0;
  std::vector<SingularVisit> singular_visits;
  StepStats stats;

  double max_constraint_residual = 0;  // re-checked post hoc
};

struct StepPolicy {
  double h0 = 5e-3;
  double hmin = 1e-5;
  double hmax = 1e-1;
  int max_steps = 80000;
  int max_corrector_iters = 10;
  double corrector_tol = 1e-12;
  double snap_radius = 2e-3;  // marked singular point handling
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> box;  // chart boundary
  double dedup_hausdorff = 1e-4;
};

namespace tracer_detail {

inline bool corrector(const ConstraintSystem& sys, Eigen::VectorXd& x, const StepPolicy& pol,
                      int* iters_out = nullptr) {
  for (int it = 0; it < pol.max_corrector_iters; ++it) {
    Eigen::VectorXd f = sys.F(x);
    double scale = 1.0 + x.norm();
    if (f.norm() <= pol.corrector_tol * scale) {
      if (iters_out) *iters_out = it;
      return true;
    }
    Eigen::MatrixXd j = sys.jacobian(x);
    // least-norm Gauss-Newton step
    Eigen::VectorXd dx = j.colPivHouseholderQr().solve(-f);
    if (!dx.allFinite()) return false;
    if (dx.norm() > 1.0 + x.norm()) return false;  // diverging
    x += dx;
  }
  Eigen::VectorXd f = sys.F(x);
  if (iters_out) *iters_out = pol.max_corrector_iters;
  return f.norm() <= pol.corrector_tol * (1.0 + x.norm()) * 10;
}

inline Eigen::VectorXd kernel_tangent(const ConstraintSystem& sys, const Eigen::VectorXd& x) {
  Eigen::MatrixXd j = sys.jacobian(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);
  return svd.matrixV().col(sys.n - 1);
}

inline double polyline_diameter(const std::vector<Eigen::VectorXd>& pts) {
  double d = 0;
  // bounding-box diagonal is enough for a scale reference
  if (pts.empty()) return 0;
  Eigen::VectorXd lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  d = (hi - lo).norm();
  return d;
}

// one-sided Hausdorff from a to b, sampled
inline double hausdorff(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  double worst = 0;
  for (const auto& p : a) {
    double best = 1e300;
    for (const auto& q : b) best = std::min(best, (p - q).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

inline double point_to_segment(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  Eigen::VectorXd d = b - a;
  double len2 = d.squaredNorm();
  if (len2 == 0) return (p - a).norm();
  double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

inline double point_to_polyline(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& pts,
                                bool closed) {
  double best = 1e300;
  size_t n = pts.size();
  if (n == 1) return (p - pts[0]).norm();
  size_t segs = closed ? n : n - 1;
  for (size_t i = 0; i < segs; ++i)
    best = std::min(best, point_to_segment(p, pts[i], pts[(i + 1) % n]));
  return best;
}

}  // namespace tracer_detail

// Distance from a point to the curve arc between two on-curve samples,
// by corrected subdivision around the nearest parameter.
inline double distance_to_curve(const ConstraintSystem& sys, const Eigen::VectorXd& x0,
                                Eigen::VectorXd a, Eigen::VectorXd b, int levels = 10) {
  StepPolicy pol;
  double best = std::min((x0 - a).norm(), (x0 - b).norm());
  for (int l = 0; l < levels; ++l) {
    Eigen::VectorXd m = 0.5 * (a + b);
    if (!tracer_detail::corrector(sys, m, pol)) break;
    best = std::min(best, (x0 - m).norm());
    if ((x0 - a).norm() < (x0 - b).norm()) b = m; else a = m;
    if ((a - b).norm() < 1e-14 * (1.0 + x0.norm())) break;
  }
  return best;
}

// Hausdorff distance from the samples of `a` to the curve through the
// samples of `b` (segments refined by the corrector).
inline double hausdorff_to_curve(const ConstraintSystem& sys,
                                 const std::vector<Eigen::VectorXd>& a,
                                 const std::vector<Eigen::VectorXd>& b, bool b_closed) {
  double worst = 0;
  size_t nb = b.size();
  size_t segs = b_closed ? nb : nb - 1;
  for (const auto& p : a) {
    double best = 1e300;
    size_t argmin = 0;
    for (size_t i = 0; i < nb; ++i) {
      double d = (p - b[i]).norm();
      if (d < best) { best = d; argmin = i; }
    }
    for (size_t off = 0; off < 2; ++off) {
      size_t i = (argmin + nb - 1 + off) % nb;
      if (!b_closed && i + 1 >= nb) continue;
      if (i < segs)
        best = std::min(best, distance_to_curve(sys, p, b[i], b[(i + 1) % nb], 40));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// Arc length with midpoint refinement: each chord is replaced by the
// two-segment path through the corrected midpoint, Richardson-combined.
inline double refined_arc_length(const ConstraintSystem& sys, const std::vector<Eigen::VectorXd>& pts,
                                 bool closed, const StepPolicy& pol) {
  double total = 0;
  size_t n = pts.size();
  if (n < 2) return 0;
  size_t segs = closed ? n : n - 1;
  for (size_t i = 0; i < segs; ++i) {
    const Eigen::VectorXd& a = pts[i];
    const Eigen::VectorXd& b = pts[(i + 1) % n];
    double chord = (b - a).norm();
    Eigen::VectorXd m = 0.5 * (a + b);
    Eigen::VectorXd mc = m;
    if (tracer_detail::corrector(sys, mc, pol)) {
      double two = (mc - a).norm() + (b - mc).norm();
      total += (4 * two - chord) / 3.0;
    } else {
      total += chord;
    }
  }
  return total;
}

// Trace the level set {F = 0} from the given seeds. Components are
// deduplicated by Hausdorff proximity. Marked singular points are snapped
// onto the trace and crossed along the incoming branch.
inline std::vector<TraceComponent> trace_level_set(const ConstraintSystem& sys,
                                                   const std::vector<Eigen::VectorXd>& seeds,
                                                   const StepPolicy& pol = {},
                                                   const std::vector<SingularPoint>& marked = {}) {
  using namespace tracer_detail;
  if (sys.k != sys.n - 1)
    throw Error(Err::DegenerateInput, "curve tracing needs exactly n-1 constraints");

  std::vector<TraceComponent> components;

  auto near_existing = [&](const Eigen::VectorXd& x) {
    for (const auto& c : components) {
      double best = point_to_polyline(x, c.pts, c.closed);
      // a point on an already-traced curve sits within one chord sagitta
      double tol = std::max(pol.dedup_hausdorff, 0.75 * c.stats.max_step * c.stats.max_step);
      if (best < tol) return true;
    }
    return false;
  };

  for (const auto& seed : seeds) {
    Eigen::VectorXd x0 = seed;
    if (!corrector(sys, x0, pol)) continue;  // seed failed to project; skip quietly
    if (near_existing(x0)) continue;

    TraceComponent comp;
    comp.pts.push_back(x0);
    double h = pol.h0;
    Eigen::VectorXd t_prev = kernel_tangent(sys, x0);
    Eigen::VectorXd t_start = t_prev;
    Eigen::VectorXd x = x0;
    bool underflow = false;

    for (int step = 0; step < pol.max_steps; ++step) {
      Eigen::VectorXd t = kernel_tangent(sys, x);
      if (t.dot(t_prev) < 0) t = -t;

      // marked singular points: slow down on approach, then snap and cross
      // along the incoming branch (the branch is smooth through the point)
      double h_eff = h;
      bool snapped = false;
      for (size_t mi = 0; mi < marked.size(); ++mi) {
        double d = (marked[mi].location - x).norm();
        bool ahead = t.dot(marked[mi].location - x) > 0;
        if (!ahead) continue;
        double snap = std::max(pol.snap_radius, 10 * pol.hmin);
        if (d < snap) {
          comp.pts.push_back(marked[mi].location);
          SingularVisit v;
          v.marked_index = static_cast<int>(mi);
          v.sample_index = static_cast<int>(comp.pts.size()) - 1;
          v.tangent_in = t;
          comp.singular_visits.push_back(v);
          double hop = 2 * snap;
          Eigen::VectorXd xn = marked[mi].location + hop * t;
          if (!corrector(sys, xn, pol)) { underflow = true; break; }
          x = xn;
          t_prev = t;
          comp.pts.push_back(x);
          snapped = true;
          break;
        }
        if (d < 2 * h_eff) h_eff = std::max(d / 2, std::max(pol.hmin, 0.5 * snap));
      }
      if (underflow) break;
      if (snapped) continue;

      Eigen::VectorXd xn = x + h_eff * t;
      int iters = 0;
      bool ok = corrector(sys, xn, pol, &iters);
      // keep the corrector transverse: reject wild moves along the curve
      if (ok && (xn - x).norm() > 3 * h_eff) ok = false;
      if (!ok) {
        comp.stats.corrector_failures++;
        h *= 0.5;
        if (h < pol.hmin) { underflow = true; break; }
        continue;
      }
      comp.stats.steps++;
      comp.stats.min_step = std::min(comp.stats.min_step, h_eff);
      comp.stats.max_step = std::max(comp.stats.max_step, h_eff);
      if (iters <= 3 && h < pol.hmax) h = std::min(pol.hmax, h * 1.4);

      x = xn;
      t_prev = t;
      comp.pts.push_back(x);

      if (pol.box) {
        bool outside = false;
        for (int i = 0; i < sys.n; ++i)
          if (x(i) < pol.box->first(i) || x(i) > pol.box->second(i)) outside = true;
        if (outside) break;
      }

      // closed-loop detection: confirm by stepping past the start point and
      // measuring the start's distance to the refined returning strand
      if (comp.pts.size() > 6) {
        double gap = (x - x0).norm();
        if (gap < 1.2 * h_eff && t_prev.dot(t_start) > 0.5) {
          Eigen::VectorXd beyond = x + 1.5 * std::max(gap, 1e-12) * t_prev;
          if (corrector(sys, beyond, pol)) {
            comp.closure_gap = distance_to_curve(sys, x0, x, beyond, 40);
            double diam_est = polyline_diameter(comp.pts);
            if (comp.closure_gap <= 1e-6 * diam_est) {
              comp.closed = true;
              break;
            }
          }
        }
      }
    }

    if (underflow && comp.pts.size() < 3) continue;  // stuck immediately; drop

    comp.diameter = polyline_diameter(comp.pts);
    if (!comp.closed) comp.closure_gap = (comp.pts.back() - comp.pts.front()).norm();
    comp.arc_length = refined_arc_length(sys, comp.pts, comp.closed, pol);
    for (const auto& p : comp.pts) {
      double r = sys.F(p).norm();
      comp.max_constraint_residual = std::max(comp.max_constraint_residual, r);
    }
    components.push_back(std::move(comp));
  }
  return components;
}

// ----------------------------------------------------------------------
// Zeros of a periodic function on a circle
// ----------------------------------------------------------------------
struct CircleZero {
  double angle;
  int multiplicity_hint;  // 1 for sign change, 2 for a dip without one
};

struct CircleZeroResult {
  std::vector<CircleZero> zeros;  // sorted
  bool grid_too_coarse = false;
};

inline CircleZeroResult find_zeros_on_circle(const std::function<double(double)>& g,
                                             double period, int grid = 720,
                                             double dip_tol = 1e-8) {
  CircleZeroResult out;
  std::vector<double> val(static_cast<size_t>(grid));
  double scale = 0;
  for (int i = 0; i < grid; ++i) {
    val[static_cast<size_t>(i)] = g(period * i / grid);
    scale = std::max(scale, std::abs(val[static_cast<size_t>(i)]));
  }
  if (scale == 0) throw Error(Err::DegenerateInput, "function vanishes identically on the grid");
  for (int i = 0; i < grid; ++i) {
    double a = period * i / grid, b = period * (i + 1) / grid;
    double fa = val[static_cast<size_t>(i)], fb = val[static_cast<size_t>((i + 1) % grid)];
    if (fa == 0) {
      double prev = val[static_cast<size_t>((i + grid - 1) % grid)];
      out.zeros.push_back({a, prev * fb > 0 ? 2 : 1});
      continue;
    }
    if (fa * fb < 0) {
      for (int it = 0; it < 200; ++it) {  // bisection to ~1e-12 * period
        double m = 0.5 * (a + b);
        double fm = g(m);
        if (fm == 0 || (b - a) < 1e-13 * period) { a = b = m; break; }
        if (fa * fm < 0) { b = m; fb = fm; } else { a = m; fa = fm; }
      }
      out.zeros.push_back({0.5 * (a + b), 1});
    } else if (std::abs(fa) < dip_tol * scale &&
               std::abs(fa) <= std::abs(val[static_cast<size_t>((i + grid - 1) % grid)]) &&
               std::abs(fa) <= std::abs(fb)) {
      // local dip below tolerance without a sign change: double zero
      out.zeros.push_back({a, 2});
    }
  }
  // merge zeros closer than a grid cell and flag coarseness
  std::sort(out.zeros.begin(), out.zeros.end(),
            [](const CircleZero& x, const CircleZero& y) { return x.angle < y.angle; });
  std::vector<CircleZero> merged;
  for (const auto& z : out.zeros) {
    if (!merged.empty() && std::abs(z.angle - merged.back().angle) < 0.5 * period / grid) {
      out.grid_too_coarse = true;
      continue;
    }
    merged.push_back(z);
  }
  out.zeros = std::move(merged);
  return out;
}

// ----------------------------------------------------------------------
// Topology classification on a sphere chart with one marked node
// ----------------------------------------------------------------------
enum class TopologyTag {
  Empty,
  PointOnly,
  CircleOnly,
  Figure8,
  PointPlusCircle,
  CuspLoop,
  Ambiguous,
};

inline const char* topology_name(TopologyTag t) {
  switch (t) {
    case TopologyTag::Empty: return "Empty";
    case TopologyTag::PointOnly: return "PointOnly";
    case TopologyTag::CircleOnly: return "CircleOnly";
    case TopologyTag::Figure8: return "Figure8";
    case TopologyTag::PointPlusCircle: return "PointPlusCircle";
    case TopologyTag::CuspLoop: return "CuspLoop";
    case TopologyTag::Ambiguous: return "Ambiguous";
  }
  return "?";
}

struct TopologyReport {
  int component_count = 0;
  std::vector<bool> closed;
  std::vector<bool> through_marked;  // per component
  int branches_at_marked = 0;
  bool marked_is_isolated = false;
  TopologyTag tag = TopologyTag::Empty;
  std::string ambiguity;
};

// `node_real_branches`: branch count of the curve's real local structure at
// the marked point (2 = node with real branches, 1 = cusp, 0 = isolated).
inline TopologyReport classify_topology(const std::vector<TraceComponent>& comps,
                                        const Eigen::VectorXd& marked, int node_real_branches,
                                        double proximity_tol = 1e-3) {
  TopologyReport rep;
  rep.component_count = static_cast<int>(comps.size());
  rep.branches_at_marked = node_real_branches;
  double near = 1e300;
  for (const auto& c : comps) {
    rep.closed.push_back(c.closed);
    double best = 1e300;
    for (const auto& p : c.pts) best = std::min(best, (p - marked).norm());
    near = std::min(near, best);
    rep.through_marked.push_back(best <= proximity_tol);
  }
  bool any_through = false, all_closed = !comps.empty();
  for (size_t i = 0; i < comps.size(); ++i) {
    if (rep.through_marked[i]) any_through = true;
    if (!rep.closed[i]) all_closed = false;
  }
  rep.marked_is_isolated = !any_through;

  if (comps.empty()) {
    rep.tag = node_real_branches == 0 ? TopologyTag::PointOnly : TopologyTag::Empty;
    return rep;
  }
  if (near > proximity_tol && near < 3 * proximity_tol) {
    rep.tag = TopologyTag::Ambiguous;
    rep.ambiguity = "curve skims the marked point between thresholds";
    return rep;
  }
  if (!any_through) {
    rep.tag = node_real_branches == 0 ? TopologyTag::PointPlusCircle : TopologyTag::CircleOnly;
    return rep;
  }
  if (node_real_branches >= 2) {
    rep.tag = TopologyTag::Figure8;
  } else if (node_real_branches == 1) {
    rep.tag = TopologyTag::CuspLoop;
  } else {
    rep.tag = all_closed ? TopologyTag::CircleOnly : TopologyTag::Ambiguous;
    if (rep.tag == TopologyTag::Ambiguous) rep.ambiguity = "trace meets an isolated-type node";
  }
  return rep;
}

}  // namespace miniweyl
