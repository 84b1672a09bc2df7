#pragma once

// Halfspace/vertex conversions for small polytopes.

#include <strongconv/core.hpp>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace strongconv {

/// Vertices of {x : A x <= b} found by solving every n-row subsystem and
/// keeping the feasible solutions. Intended for n <= 4 and a few dozen rows.
inline PointList enumerate_vertices(const Mat& A, const Vec& b, double tol = 1e-9) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double scale = 1.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(b(i)));
  PointList out;
  Mat S(n, n);
  Vec rhs(n);
  for_each_subset(m, n, [&](const std::vector<int>& rows) {
    for (int k = 0; k < n; ++k) {
      S.row(k) = A.row(rows[static_cast<std::size_t>(k)]);
      rhs(k) = b(rows[static_cast<std::size_t>(k)]);
    }
    Eigen::FullPivLU<Mat> lu(S);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) return true;
    Vec x = lu.solve(rhs);
    if (!x.allFinite()) return true;
    Vec slack = A * x - b;
    for (int i = 0; i < m; ++i)
      if (slack(i) > tol * scale * std::max(1.0, A.row(i).norm())) return true;
    for (const Vec& v : out)
      if ((v - x).norm() <= 1e-9 * scale) return true;
    out.push_back(x);
    return true;
  });
  return out;
}

/// Counter-clockwise convex hull (monotone chain); collinear points dropped.
inline PointList convex_hull_2d(PointList pts, double tol = 1e-12) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [tol](const Vec& a, const Vec& b) { return (a - b).norm() <= tol; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
  };
  double scale = 0.0;
  for (const Vec& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double ctol = tol * std::max(1.0, scale * scale);
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= ctol) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= ctol) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

/// Outward edge normals and offsets of a counter-clockwise convex polygon.
inline std::pair<Mat, Vec> halfspaces_from_polygon(const PointList& ccw) {
  const auto k = static_cast<Eigen::Index>(ccw.size());
  Mat A(k, 2);
  Vec b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Vec& p = ccw[static_cast<std::size_t>(i)];
    const Vec& q = ccw[static_cast<std::size_t>((i + 1) % k)];
    A(i, 0) = q(1) - p(1);
    A(i, 1) = p(0) - q(0);
    b(i) = A.row(i).dot(p);
  }
  return {A, b};
}

inline double polygon_area(const PointList& ccw) {
  double s = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec& p = ccw[i];
    const Vec& q = ccw[(i + 1) % ccw.size()];
    s += p(0) * q(1) - p(1) * q(0);
  }
  return 0.5 * s;
}

}  // namespace strongconv
