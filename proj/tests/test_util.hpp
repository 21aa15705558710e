#pragma once

// shared helpers for the test suites: seeded random points on the spheres

#include <random>

#include "miniweyl/segre.hpp"

namespace mwtest {

using namespace miniweyl;

// uniform in the (theta, phi) chart, away from the poles and (optionally)
// away from the B3 stratum (theta = pi/2 on S1, 3pi/2 on S2)
inline Slice random_sphere_point(const Surface& s, Sphere which, std::mt19937_64& rng,
                                 double pole_margin = 0.08, double b3_margin = 0.0) {
  auto chart = segre_real::sphere_chart(s, which);
  std::uniform_real_distribution<double> uphi(0, 2 * M_PI);
  double span = chart.theta_hi - chart.theta_lo;
  std::uniform_real_distribution<double> uth(chart.theta_lo + pole_margin * span,
                                             chart.theta_hi - pole_margin * span);
  for (int tries = 0; tries < 1000; ++tries) {
    double th = uth(rng);
    double mid = 0.5 * (chart.theta_lo + chart.theta_hi);
    if (b3_margin > 0 && std::abs(th - mid) < b3_margin * span) continue;
    return segre_real::sphere_point(chart, th, uphi(rng));
  }
  throw Error(Err::DegenerateInput, "random point rejection loop failed");
}

// a point on the B3 stratum of S1: x3 = 0, x4 = 1, u^2+v^2 = b
inline Slice b3_stratum_point(const Surface& s, double phi) {
  double r = std::sqrt(to_double(s.params.b));
  return Slice(r * std::cos(phi), r * std::sin(phi), 0.0, 1.0);
}

// tau_j in slice coordinates
inline Slice tau_slice(int j, const Slice& q) {
  if (j == 2) return Slice(-q(0), -q(1), -q(2), -q(3));
  if (j == 3) return Slice(q(0), q(1), -q(2), q(3));
  return Slice(q(0), q(1), q(2), -q(3));
}

}  // namespace mwtest
