#pragma once

// Covering a point set by a translate of K, optionally avoiding a point, and
// the Helly-type check over small subsets.

#include <strongconv/min_ball.hpp>
#include <strongconv/strong_set.hpp>

#include <optional>
#include <vector>

namespace strongconv {

/// Some t with X inside K + t, or nullopt when no translate covers X.
inline std::optional<Vec> cover_translate(const Body& gauge, const PointList& points,
                                          const ToleranceConfig& tol = {}) {
  if (points.empty()) throw GeometryError("covering needs a nonempty point set");
  const int n = gauge.dim();
  for (const Vec& x : points)
    if (x.size() != n) throw DimensionError();
  if (gauge.is<HPolytope>()) {
    // a_i.t >= max_x a_i.x - b_i
    const auto& k = gauge.as<HPolytope>();
    Mat A = -k.normals();
    Vec b(k.facet_count());
    for (int i = 0; i < k.facet_count(); ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (const Vec& x : points) m = std::max(m, k.normals().row(i).dot(x));
      b(i) = k.offsets()(i) - m;
    }
    return lp_feasible_point(A, b);
  }
  if (gauge.is<Ball>()) {
    const auto& k = gauge.as<Ball>();
    Ball meb = min_enclosing_ball(points);
    if (meb.radius > k.radius + tol.eps_feas) return std::nullopt;
    return Vec(meb.center - k.center);
  }
  if (gauge.is<ProductBody>()) {
    const auto& factors = gauge.as<ProductBody>().factors;
    const auto dims = gauge.block_dims();
    Vec t(n);
    int off = 0;
    for (std::size_t b = 0; b < factors.size(); ++b) {
      auto f = cover_translate(factors[b], block_of(points, dims, static_cast<int>(b)), tol);
      if (!f) return std::nullopt;
      t.segment(off, dims[b]) = *f;
      off += dims[b];
    }
    return t;
  }
  TranslateSet ts(gauge, points, tol);
  if (ts.empty()) return std::nullopt;
  return ts.any_point();
}

/// A translate of K covering X and missing p, certified by revalidation.
/// nullopt means none was found at the configured resolution. Throws
/// NoCoveringTranslateError when X fits in no translate at all.
inline std::optional<CoverWitness> cover_avoiding(const Body& gauge, const PointList& points, const Vec& p,
                                                  const ToleranceConfig& tol = {}) {
  MemberResult r;
  try {
    r = hull_member_fast(gauge, points, p, tol);
  } catch (const HullUndefinedError&) {
    throw NoCoveringTranslateError();
  }
  if (r.member || !r.witness || !revalidate(gauge, points, p, *r.witness, tol)) return std::nullopt;
  return r.witness;
}

/// cover_avoiding, retried once at ten times the direction resolution when
/// the first pass finds nothing and the gauge has no exact route.
inline std::optional<CoverWitness> cover_avoiding_escalated(const Body& gauge, const PointList& points, const Vec& p,
                                                            const ToleranceConfig& tol = {}, bool* escalated = nullptr) {
  if (escalated) *escalated = false;
  auto w = cover_avoiding(gauge, points, p, tol);
  if (w || has_explicit_route(gauge)) return w;
  if (escalated) *escalated = true;
  return cover_avoiding(gauge, points, p, tol.scaled_grid(10));
}

/// Whether the origin lies outside conv X: some u has u.x >= 1 on X.
inline bool origin_outside_hull(const PointList& points) {
  const int n = static_cast<int>(points.front().size());
  Mat A(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = -points[i].transpose();
  return lp_feasible_point(A, Vec::Constant(static_cast<Eigen::Index>(points.size()), -1.0)).has_value();
}

struct HellyReport {
  bool fits = false;
  bool origin_outside_hull = false;
  bool hypothesis_ok = false;
  std::optional<std::vector<int>> failing_subset;
  std::optional<CoverWitness> conclusion_witness;
  bool escalated = false;
  int subsets_checked = 0;
};

/// Checks every subset of at most `n` points for a translate that covers it
/// and misses the origin, then looks for one translate that does this for
/// all of X.
inline HellyReport helly_check(const Body& gauge, const PointList& points, int n, const ToleranceConfig& tol = {}) {
  if (static_cast<int>(points.size()) < n) throw GeometryError("helly check needs at least n points");
  HellyReport rep;
  const Vec origin = Vec::Zero(gauge.dim());
  rep.hypothesis_ok = true;
  for (int k = 1; k <= n && rep.hypothesis_ok; ++k) {
    for_each_subset(static_cast<int>(points.size()), k, [&](const std::vector<int>& idx) {
      ++rep.subsets_checked;
      std::optional<CoverWitness> w;
      try {
        w = cover_avoiding_escalated(gauge, select(points, idx), origin, tol);
      } catch (const NoCoveringTranslateError&) {
      }
      if (!w) {
        rep.hypothesis_ok = false;
        rep.failing_subset = idx;
        return false;
      }
      return true;
    });
  }
  rep.origin_outside_hull = origin_outside_hull(points);
  rep.fits = cover_translate(gauge, points, tol).has_value();
  if (rep.fits) rep.conclusion_witness = cover_avoiding_escalated(gauge, points, origin, tol, &rep.escalated);
  return rep;
}

}  // namespace strongconv
