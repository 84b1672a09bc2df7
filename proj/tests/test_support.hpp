#pragma once

// Random instance generators and brute-force oracles shared by the suites.
// Oracles here deliberately avoid the library's solvers.

#include <strongconv/body.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace strongconv::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random convex polygon with `k` vertices on a perturbed circle around the
/// origin (k facets after the hull, almost surely). Angular gaps stay below
/// 0.8 pi so the origin is well inside.
inline PointList random_polygon_vertices(Rng& rng, int k, double radius = 1.0) {
  std::vector<double> angles;
  while (true) {
    angles.clear();
    for (int i = 0; i < k; ++i) angles.push_back(uniform(rng, 0.0, 2 * std::numbers::pi));
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2 * std::numbers::pi - angles.back();
    for (int i = 1; i < k; ++i) gap = std::max(gap, angles[static_cast<std::size_t>(i)] - angles[static_cast<std::size_t>(i - 1)]);
    if (gap < 0.8 * std::numbers::pi) break;
  }
  PointList v;
  for (double a : angles) {
    const double r = radius * uniform(rng, 0.8, 1.2);
    v.push_back(make_vec({r * std::cos(a), r * std::sin(a)}));
  }
  return v;
}

inline HPolytope random_polygon(Rng& rng, int k, double radius = 1.0) {
  while (true) {
    try {
      auto p = HPolytope::polygon(random_polygon_vertices(rng, k, radius));
      if (p.facet_count() >= 3) return p;
    } catch (const GeometryError&) {
    }
  }
}

/// Vertices of a planar polytope by intersecting every pair of lines and
/// keeping the feasible ones.
inline PointList brute_vertices_2d(const Mat& A, const Vec& b, double tol = 1e-9) {
  PointList out;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      const double det = A(i, 0) * A(j, 1) - A(i, 1) * A(j, 0);
      if (std::abs(det) < 1e-12) continue;
      const double x = (b(i) * A(j, 1) - A(i, 1) * b(j)) / det;
      const double y = (A(i, 0) * b(j) - b(i) * A(j, 0)) / det;
      bool ok = true;
      for (Eigen::Index r = 0; r < A.rows(); ++r) ok = ok && A(r, 0) * x + A(r, 1) * y <= b(r) + tol;
      if (ok) out.push_back(make_vec({x, y}));
    }
  }
  return out;
}

inline double brute_support(const PointList& verts, const Vec& u) {
  double best = -1e300;
  for (const Vec& v : verts) best = std::max(best, u.dot(v));
  return best;
}

inline Vec random_unit(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v.normalized();
}

inline Vec random_in_box(Rng& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

}  // namespace strongconv::testing
