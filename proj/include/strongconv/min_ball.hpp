#pragma once

// Smallest enclosing ball (Welzl's recursion) for small point sets in any
// dimension.

#include <strongconv/body.hpp>

namespace strongconv {

namespace detail {

inline Ball circumball(const PointList& support_pts, int n) {
  if (support_pts.empty()) return Ball{Vec::Zero(n), -1.0};
  const Vec& r0 = support_pts.front();
  const int k = static_cast<int>(support_pts.size());
  if (k == 1) return Ball{r0, 0.0};
  Mat D(n, k - 1);
  Vec rhs(k - 1);
  for (int j = 1; j < k; ++j) {
    D.col(j - 1) = support_pts[static_cast<std::size_t>(j)] - r0;
    rhs(j - 1) = 0.5 * D.col(j - 1).squaredNorm();
  }
  const Vec alpha = (D.transpose() * D).completeOrthogonalDecomposition().solve(rhs);
  const Vec c = r0 + D * alpha;
  double r = 0.0;
  for (const Vec& q : support_pts) r = std::max(r, (q - c).norm());
  return Ball{c, r};
}

inline Ball welzl(const PointList& pts, std::size_t count, PointList& boundary, int n) {
  if (count == 0 || static_cast<int>(boundary.size()) == n + 1) return circumball(boundary, n);
  const Vec& p = pts[count - 1];
  Ball b = welzl(pts, count - 1, boundary, n);
  if (b.radius >= 0 && (p - b.center).norm() <= b.radius * (1 + 1e-12) + 1e-15) return b;
  boundary.push_back(p);
  b = welzl(pts, count - 1, boundary, n);
  boundary.pop_back();
  return b;
}

}  // namespace detail

/// Smallest ball containing `pts`.
inline Ball min_enclosing_ball(const PointList& pts) {
  if (pts.empty()) throw GeometryError("min_enclosing_ball needs points");
  const int n = static_cast<int>(pts.front().size());
  PointList boundary;
  return detail::welzl(pts, pts.size(), boundary, n);
}

}  // namespace strongconv
