#pragma once

// Minkowski summands. A is a summand of B when A + (B * A) = B, which holds
// exactly when h_B - h_A is itself a support function.

#include <strongconv/strong_set.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace strongconv {

struct SummandReport {
  std::optional<StrongSet> summand;  // C = B * A; absent when empty
  double residual = std::numeric_limits<double>::infinity();
  double scale = 0.0;                // diameter of B
  bool verdict = false;
  std::optional<Vec> witness_direction;
  /// For summands known only through sampled support values: directions w_k
  /// and weights l_k >= 0 with sum l_k w_k = witness_direction and
  /// sum l_k g(w_k) < g(witness_direction), g = h_B - h_A.
  std::vector<std::pair<Vec, double>> envelope_combination;
  int probes = 0;
  std::string explanation;
};

namespace detail {

// Summands whose support is read off exactly.
inline bool exact_support(const StrongSet& c) {
  switch (c.form()) {
    case StrongForm::polytope:
    case StrongForm::ball:
    case StrongForm::translates:
      return true;
    case StrongForm::product:
      for (const StrongSet& f : c.factors())
        if (!exact_support(f)) return false;
      return true;
    default:
      return false;
  }
}

inline std::optional<PointList> polygon_vertices(const Body& b) {
  if (b.dim() != 2 || !b.is<HPolytope>() || !b.as<HPolytope>().has_vertices()) return std::nullopt;
  return convex_hull_2d(b.as<HPolytope>().vertices());
}

// Vertex chains of A + C and B agree up to `eps`.
inline bool same_chain(const PointList& a, const PointList& c, const PointList& b, double eps) {
  PointList sums;
  for (const Vec& p : a)
    for (const Vec& q : c) sums.push_back(p + q);
  PointList s = convex_hull_2d(sums, eps);
  PointList t = convex_hull_2d(b, eps);
  if (s.size() != t.size()) return false;
  for (const Vec& x : s) {
    bool hit = false;
    for (const Vec& y : t) hit = hit || (x - y).norm() <= eps;
    if (!hit) return false;
  }
  return true;
}

}  // namespace detail

/// Computes C = B * A and compares h_A + h_C with h_B on B's facet normals
/// and the direction grid. When C only has a sampled description its support
/// on the probes is the lower convex envelope of h_B - h_A over the probes.
inline SummandReport is_summand(const Body& a, const Body& b, const ToleranceConfig& tol = {}) {
  if (a.dim() != b.dim()) throw DimensionError();
  const int n = b.dim();
  SummandReport rep;

  PointList probes;
  if (b.is<HPolytope>()) {
    const auto& h = b.as<HPolytope>();
    for (int i = 0; i < h.facet_count(); ++i) probes.push_back(h.normal(i).normalized());
  }
  for (Vec& w : direction_grid(n, tol.direction_grid_size)) probes.push_back(std::move(w));
  rep.probes = static_cast<int>(probes.size());

  const auto m = static_cast<Eigen::Index>(probes.size());
  Vec hb(m), ha(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    hb(k) = support(b, probes[static_cast<std::size_t>(k)]);
    ha(k) = support(a, probes[static_cast<std::size_t>(k)]);
  }
  for (int i = 0; i < n; ++i)
    rep.scale = std::max(rep.scale, support(b, unit_vec(n, i)) + support(b, -unit_vec(n, i)));
  for (Eigen::Index k = 0; k < m; ++k) {
    const Vec& w = probes[static_cast<std::size_t>(k)];
    rep.scale = std::max(rep.scale, hb(k) + support(b, -w));
  }
  const double threshold = tol.eps_feas * std::max(rep.scale, 1.0);

  StrongSet c = erode(b, a, tol);
  if (c.empty()) {
    rep.explanation = "no translate of the first body fits in the second";
    return rep;
  }

  Vec gap(m);
  if (detail::exact_support(c)) {
    for (Eigen::Index k = 0; k < m; ++k)
      gap(k) = hb(k) - ha(k) - c.support(probes[static_cast<std::size_t>(k)]);
  } else {
    Mat W(n, m);
    for (Eigen::Index k = 0; k < m; ++k) W.col(k) = probes[static_cast<std::size_t>(k)];
    const Vec g = hb - ha;
    for (Eigen::Index k = 0; k < m; ++k) {
      auto r = lp_min_standard(g, W, W.col(k));
      gap(k) = r.optimal() ? g(k) - r.value : 0.0;
    }
  }

  Eigen::Index worst = 0;
  gap.cwiseAbs().maxCoeff(&worst);
  rep.residual = std::abs(gap(worst));
  rep.verdict = rep.residual <= threshold;
  rep.summand = c;

  if (!rep.verdict) {
    rep.witness_direction = probes[static_cast<std::size_t>(worst)];
    if (!detail::exact_support(c)) {
      Mat W(n, m);
      for (Eigen::Index k = 0; k < m; ++k) W.col(k) = probes[static_cast<std::size_t>(k)];
      auto r = lp_min_standard(hb - ha, W, W.col(worst));
      for (Eigen::Index k = 0; k < m; ++k)
        if (r.argmax(k) > 0) rep.envelope_combination.emplace_back(probes[static_cast<std::size_t>(k)], r.argmax(k));
    }
    rep.explanation = "support functions disagree";
    return rep;
  }

  if (n == 2 && c.form() == StrongForm::polytope) {
    auto va = detail::polygon_vertices(a);
    auto vb = detail::polygon_vertices(b);
    const auto& hc = *c.cached_hform();
    if (va && vb && hc.has_vertices() &&
        !detail::same_chain(*va, convex_hull_2d(hc.vertices()), *vb, 1e-7 * std::max(rep.scale, 1.0))) {
      rep.verdict = false;
      rep.explanation = "vertex chains of A + C and B differ";
      return rep;
    }
  }
  rep.explanation = "A + C = B";
  return rep;
}

struct GeneratingReport {
  bool pass = true;
  int pairs_tested = 0;
  int draws = 0;
  std::optional<Vec> t1, t2;
  std::optional<SummandReport> counterexample;
};

/// Samples pairs {t1, t2} from the bounding box of K - K, keeps those with
/// K * {t1, t2} nonempty and checks that the erosion is a summand of K.
/// Stops at the first failure.
inline GeneratingReport generating_pair_test(const Body& k, int sample_count, std::uint64_t seed,
                                             const ToleranceConfig& tol = {}) {
  const int n = k.dim();
  Vec half(n);
  for (int i = 0; i < n; ++i) half(i) = support(k, unit_vec(n, i)) + support(k, -unit_vec(n, i));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto draw = [&] {
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = half(i) * unit(rng);
    return t;
  };

  GeneratingReport rep;
  const int max_draws = 200 * std::max(sample_count, 1);
  while (rep.pairs_tested < sample_count && rep.draws < max_draws) {
    ++rep.draws;
    PointList pair{draw(), draw()};
    StrongSet a = erode(k, pair, tol);
    if (a.empty()) continue;
    ++rep.pairs_tested;
    SummandReport s = is_summand(as_body(a), k, tol);
    if (!s.verdict) {
      rep.pass = false;
      rep.t1 = pair[0];
      rep.t2 = pair[1];
      rep.counterexample = std::move(s);
      return rep;
    }
  }
  return rep;
}

namespace detail {

// Closed sets of parameters on a cycle of length `period`, as sorted
// disjoint intervals inside [0, period].
using Intervals = std::vector<std::pair<double, double>>;

inline Intervals intersect(const Intervals& x, const Intervals& y) {
  Intervals out;
  for (const auto& [a0, a1] : x)
    for (const auto& [b0, b1] : y) {
      const double lo = std::max(a0, b0), hi = std::min(a1, b1);
      if (lo <= hi) out.emplace_back(lo, hi);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Arc of angles theta in [0, 2 pi] with cos(theta - alpha) <= kappa.
inline Intervals angle_halfplane(double alpha, double kappa) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (kappa >= 1.0) return {{0.0, two_pi}};
  if (kappa < -1.0) return {};
  const double d = std::acos(std::max(-1.0, kappa));
  double lo = std::fmod(alpha + d, two_pi);
  if (lo < 0) lo += two_pi;
  const double hi = lo + two_pi - 2.0 * d;
  if (hi <= two_pi) return {{lo, hi}};
  return {{0.0, hi - two_pi}, {lo, two_pi}};
}

struct Components {
  int count = 0;
  bool whole = false;
};

// Connected components of a closed subset of a cycle, merging pieces that
// meet across the seam at 0 = period.
inline Components cyclic_components(Intervals pieces, double period, double gap) {
  Components out;
  if (pieces.empty()) return out;
  std::sort(pieces.begin(), pieces.end());
  Intervals merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.first <= merged.back().second + gap)
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }
  if (merged.size() == 1 && merged.front().first <= gap && merged.front().second >= period - gap) {
    out.count = 1;
    out.whole = true;
    return out;
  }
  out.count = static_cast<int>(merged.size());
  if (merged.size() > 1 && merged.front().first <= gap && merged.back().second >= period - gap) --out.count;
  return out;
}

// Parameters s in [0, 1] with p + s d inside body, enlarged by eps.
inline std::optional<std::pair<double, double>> clip_segment(const Body& body, const Vec& p, const Vec& d,
                                                             double eps) {
  double lo = 0.0, hi = 1.0;
  if (body.is<HPolytope>()) {
    const auto& h = body.as<HPolytope>();
    for (int i = 0; i < h.facet_count(); ++i) {
      const Vec a = h.normal(i);
      const double an = a.norm();
      const double num = h.offsets()(i) + eps * an - a.dot(p);
      const double den = a.dot(d);
      if (std::abs(den) <= 1e-300) {
        if (num < 0) return std::nullopt;
      } else if (den > 0) {
        hi = std::min(hi, num / den);
      } else {
        lo = std::max(lo, num / den);
      }
    }
  } else {
    const auto& ball = body.as<Ball>();
    const Vec q = p - ball.center;
    const double r = ball.radius + eps;
    const double aa = d.squaredNorm(), bb = 2.0 * q.dot(d), cc = q.squaredNorm() - r * r;
    const double disc = bb * bb - 4 * aa * cc;
    if (disc < 0) return std::nullopt;
    const double sq = std::sqrt(disc);
    lo = std::max(lo, (-bb - sq) / (2 * aa));
    hi = std::min(hi, (-bb + sq) / (2 * aa));
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

// Angles theta with center + r (cos, sin) inside body, enlarged by eps.
inline Intervals clip_circle(const Body& body, const Vec& center, double r, double eps) {
  const double two_pi = 2.0 * std::numbers::pi;
  Intervals out{{0.0, two_pi}};
  if (body.is<HPolytope>()) {
    const auto& h = body.as<HPolytope>();
    for (int i = 0; i < h.facet_count(); ++i) {
      const Vec a = h.normal(i);
      const double an = a.norm();
      const double kappa = (h.offsets()(i) + eps * an - a.dot(center)) / (r * an);
      out = intersect(out, angle_halfplane(std::atan2(a(1), a(0)), kappa));
      if (out.empty()) break;
    }
  } else {
    // |q + r w| <= rho  <=>  cos(theta - angle(q)) <= kappa
    const auto& ball = body.as<Ball>();
    const Vec q = center - ball.center;
    const double rho = ball.radius + eps;
    const double qn = q.norm();
    if (qn <= 1e-300) return std::abs(r) <= rho ? out : Intervals{};
    const double kappa = (rho * rho - qn * qn - r * r) / (2.0 * r * qn);
    out = angle_halfplane(std::atan2(q(1), q(0)), kappa);
  }
  return out;
}

}  // namespace detail

struct AcyclicityFailure {
  Vec translate;
  int components = 0;
  bool whole_boundary = false;
};

struct CriterionReport {
  bool hypothesis_ok = false;
  bool interior_translate = false;
  std::vector<AcyclicityFailure> acyclicity_failures;
  bool summand_verdict = false;
  SummandReport summand;
  int grid = 0;
  int translates_checked = 0;
};

/// Components of (A + t) meet the boundary of B, for planar polygons and
/// disks. The boundary is parametrized by edge index plus position for
/// polygons and by angle for disks.
inline detail::Components boundary_contact(const Body& a, const Body& b, const Vec& t, double eps) {
  const Body moved = translate(a, t);
  if (b.is<Ball>()) {
    const auto& ball = b.as<Ball>();
    return detail::cyclic_components(detail::clip_circle(moved, ball.center, ball.radius, eps),
                                     2.0 * std::numbers::pi, 1e-12);
  }
  const PointList v = convex_hull_2d(b.as<HPolytope>().vertices());
  const int k = static_cast<int>(v.size());
  detail::Intervals pieces;
  for (int i = 0; i < k; ++i) {
    const Vec& p = v[static_cast<std::size_t>(i)];
    const Vec d = v[static_cast<std::size_t>((i + 1) % k)] - p;
    if (auto s = detail::clip_segment(moved, p, d, eps)) pieces.emplace_back(i + s->first, i + s->second);
  }
  return detail::cyclic_components(std::move(pieces), k, 1e-12);
}

/// Planar check of the acyclicity criterion: scans translates t with
/// A + t inside B (a grid over the feasible region plus its boundary) and
/// records every t where (A + t) meets the boundary of B in more than one
/// piece or in all of it.
inline CriterionReport criterion_check_2d(const Body& a, const Body& b, int t_grid = 60,
                                          const ToleranceConfig& tol = {}) {
  if (a.dim() != 2 || b.dim() != 2) throw DimensionError("criterion check is planar");
  for (const Body* x : {&a, &b})
    if (!(x->is<Ball>() || (x->is<HPolytope>() && x->as<HPolytope>().has_vertices())))
      throw GeometryError("criterion check needs polygons or disks");

  CriterionReport rep;
  rep.grid = t_grid;
  rep.summand = is_summand(a, b, tol);
  rep.summand_verdict = rep.summand.verdict;
  if (!rep.summand.summand) return rep;
  const StrongSet& c = *rep.summand.summand;
  const double scale = std::max(rep.summand.scale, 1.0);
  const double eps = tol.eps_feas * scale;

  const PointList dirs = direction_grid(2, std::max(4 * t_grid, 16));
  double width = std::numeric_limits<double>::infinity();
  for (const Vec& w : dirs) width = std::min(width, c.support(w) + c.support(-w));
  rep.interior_translate = width > 1e3 * eps;

  PointList ts;
  auto add_boundary = [&](Vec t) {
    for (const Vec& s : ts)
      if ((s - t).norm() <= eps) return;
    ts.push_back(std::move(t));
  };
  for (const Vec& w : dirs) add_boundary(c.support_point(w));
  if (c.form() == StrongForm::polytope && c.cached_hform()->has_vertices()) {
    const PointList v = convex_hull_2d(c.cached_hform()->vertices());
    for (std::size_t i = 0; i < v.size(); ++i) {
      add_boundary(v[i]);
      add_boundary(0.5 * (v[i] + v[(i + 1) % v.size()]));
    }
  }
  const double x0 = -c.support(-unit_vec(2, 0)), x1 = c.support(unit_vec(2, 0));
  const double y0 = -c.support(-unit_vec(2, 1)), y1 = c.support(unit_vec(2, 1));
  for (int i = 0; i < t_grid; ++i)
    for (int j = 0; j < t_grid; ++j) {
      const double fx = t_grid == 1 ? 0.5 : static_cast<double>(i) / (t_grid - 1);
      const double fy = t_grid == 1 ? 0.5 : static_cast<double>(j) / (t_grid - 1);
      Vec t = make_vec({x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)});
      ToleranceConfig strict = tol;
      strict.eps_feas = eps;
      if (c.contains(t, strict)) ts.push_back(std::move(t));
    }

  for (const Vec& t : ts) {
    ++rep.translates_checked;
    const auto comp = boundary_contact(a, b, t, 10 * eps);
    if (comp.count > 1 || comp.whole) rep.acyclicity_failures.push_back({t, comp.count, comp.whole});
  }
  rep.hypothesis_ok = rep.interior_translate && rep.acyclicity_failures.empty();
  return rep;
}

}  // namespace strongconv
