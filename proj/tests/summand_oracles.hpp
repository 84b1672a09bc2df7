#pragma once

// Independent oracles for the summand suites: planar edge matching and
// closed-form supports of disk and cone intersections.

#include "test_support.hpp"

#include <optional>

namespace strongconv::testing {

// Edge directions (as angles of outward normals) with their lengths.
inline std::vector<std::pair<double, double>> edge_profile(const PointList& hull) {
  std::vector<std::pair<double, double>> out;
  const std::size_t k = hull.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec d = hull[(i + 1) % k] - hull[i];
    out.emplace_back(std::atan2(-d(0), d(1)), d.norm());
  }
  return out;
}

// Planar summand test: every edge of A must be matched by a parallel,
// equally oriented edge of B that is at least as long.
inline bool edge_oracle(const PointList& a, const PointList& b) {
  const auto ea = edge_profile(convex_hull_2d(a, 1e-12));
  const auto eb = edge_profile(convex_hull_2d(b, 1e-12));
  for (const auto& [angle, len] : ea) {
    bool matched = false;
    for (const auto& [beta, blen] : eb) {
      double diff = std::remainder(angle - beta, 2 * std::numbers::pi);
      if (std::abs(diff) < 1e-7 && blen >= len - 1e-7) matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

inline PointList sum_vertices(const PointList& a, const PointList& b) {
  PointList s;
  for (const Vec& p : a)
    for (const Vec& q : b) s.push_back(p + q);
  return convex_hull_2d(s);
}

// Support of the intersection of two disks in direction v, or nothing when
// they are disjoint.
inline std::optional<double> lens_support(const Vec& c1, double r1, const Vec& c2, double r2, const Vec& v) {
  if (r1 < 0 || r2 < 0) return std::nullopt;
  const double dist = (c2 - c1).norm();
  if (dist > r1 + r2) return std::nullopt;
  const double vn = v.norm();
  if (vn == 0) return 0.0;
  const Vec p1 = c1 + r1 * v / vn, p2 = c2 + r2 * v / vn;
  if ((p1 - c2).norm() <= r2) return v.dot(p1);
  if ((p2 - c1).norm() <= r1) return v.dot(p2);
  if (dist < 1e-15) return std::nullopt;
  const double along = (dist * dist + r1 * r1 - r2 * r2) / (2 * dist);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - along * along));
  const Vec e = (c2 - c1) / dist;
  const Vec perp = make_vec({-e(1), e(0)});
  const Vec base = c1 + along * e;
  return std::max(v.dot(base + h * perp), v.dot(base - h * perp));
}

// h of (K - t1) and (K - t2) intersected, K the cone over the unit disk with
// apex height h: a dense scan over heights followed by ternary refinement.
inline double two_cone_support(double height, const Vec& t1, const Vec& t2, const Vec& u) {
  const Vec uh = u.head(2);
  auto value = [&](double z) {
    const double r1 = 1 - (z + t1(2)) / height, r2 = 1 - (z + t2(2)) / height;
    auto s = lens_support(-t1.head(2), r1, -t2.head(2), r2, uh);
    return s ? *s + u(2) * z : -1e300;
  };
  const double lo = std::max(-t1(2), -t2(2)), hi = std::min(height - t1(2), height - t2(2));
  const int steps = 20000;
  int best = 0;
  double bv = -1e300;
  for (int i = 0; i <= steps; ++i) {
    const double v = value(lo + (hi - lo) * i / steps);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / steps, b = lo + (hi - lo) * std::min(steps, best + 1) / steps;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    (value(m1) < value(m2) ? a : b) = value(m1) < value(m2) ? m1 : m2;
  }
  return std::max(bv, value(0.5 * (a + b)));
}

inline double cone_support(double height, const Vec& u) {
  return std::max(u.head(2).norm(), height * u(2));
}

}  // namespace strongconv::testing
