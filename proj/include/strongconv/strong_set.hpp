#pragma once

// Erosion K * T, strongly convex hulls conv_K X = K * (K * X), and hull
// membership.

#include <strongconv/max_convex.hpp>
#include <strongconv/translate_set.hpp>

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace strongconv {

/// A translate K + t that contains a point set, together with a direction u
/// along which the designated point p sticks out:
/// u.(p - t) - h_K(u) = margin.
struct CoverWitness {
  Vec t;
  Vec u;
  double margin = 0.0;
};

/// Re-checks a witness from scratch: every point of X inside K + t within
/// eps_feas, p beyond the supporting hyperplane by more than eps_margin.
inline bool revalidate(const Body& gauge, const PointList& points, const Vec& p, const CoverWitness& w,
                       const ToleranceConfig& tol = {}) {
  if (w.t.size() != gauge.dim() || w.u.size() != gauge.dim()) return false;
  for (const Vec& x : points)
    if (!contains(gauge, x - w.t, tol)) return false;
  const double un = w.u.norm();
  if (!(un > 0)) return false;
  const Vec u = w.u / un;
  const double gap = u.dot(p - w.t) - support(gauge, u);
  return gap > tol.eps_margin;
}

enum class StrongForm {
  empty,           // no point
  polytope,        // gauge normals with adjusted offsets
  ball,            // closed-form ball (possibly a single point)
  translates,      // K * {t_1..t_k}, finite list
  hull_of_points,  // conv_K of a finite list, support resolved by sampling
  eroder,          // K * S for a convex body S, support resolved by sampling
  product,         // factorwise sets for product gauges
};

/// A K-strongly convex set: the gauge K together with what it is eroded by.
class StrongSet {
 public:
  const Body& gauge() const { return gauge_; }
  StrongForm form() const { return form_; }
  bool empty() const { return form_ == StrongForm::empty; }
  int dim() const { return gauge_.dim(); }

  /// Present when the gauge is polytopal: the set as an H-polytope sharing
  /// the gauge's normals.
  const std::optional<HPolytope>& cached_hform() const { return hform_; }
  const std::optional<Ball>& closed_ball() const { return ball_; }
  /// Translate list for `translates`, the generating points for
  /// `hull_of_points`; empty otherwise.
  const PointList& points() const { return points_; }
  const std::vector<StrongSet>& factors() const { return factors_; }

  double support(const Vec& u) const {
    if (u.size() != dim()) throw DimensionError();
    switch (form_) {
      case StrongForm::empty:
        throw EmptyError();
      case StrongForm::polytope:
        return hform_->support(u);
      case StrongForm::ball:
        return u.dot(ball_->center) + ball_->radius * u.norm();
      case StrongForm::translates:
        return translate_set().support(-u);
      case StrongForm::product: {
        double s = 0.0;
        int off = 0;
        for (const StrongSet& f : factors_) {
          s += f.support(u.segment(off, f.dim()));
          off += f.dim();
        }
        return s;
      }
      default:
        return sampled().support(u);
    }
  }

  Vec support_point(const Vec& u) const {
    switch (form_) {
      case StrongForm::empty:
        throw EmptyError();
      case StrongForm::polytope:
        return hform_->argmax(u);
      case StrongForm::ball:
        return strongconv::support_point(Body(*ball_), u);
      case StrongForm::translates:
        return -translate_set().argmax(-u);
      case StrongForm::product: {
        Vec x(dim());
        int off = 0;
        for (const StrongSet& f : factors_) {
          x.segment(off, f.dim()) = f.support_point(u.segment(off, f.dim()));
          off += f.dim();
        }
        return x;
      }
      default:
        return sampled().argmax(u);
    }
  }

  bool contains(const Vec& x, const ToleranceConfig& tol = {}) const {
    if (x.size() != dim()) throw DimensionError();
    switch (form_) {
      case StrongForm::empty:
        return false;
      case StrongForm::polytope:
        return hform_->violation(x) <= tol.eps_feas;
      case StrongForm::ball:
        return (x - ball_->center).norm() <= ball_->radius + tol.eps_feas;
      case StrongForm::translates:
        for (const Vec& t : points_)
          if (!strongconv::contains(gauge_, x + t, tol)) return false;
        return true;
      case StrongForm::product: {
        int off = 0;
        for (const StrongSet& f : factors_) {
          if (!f.contains(x.segment(off, f.dim()), tol)) return false;
          off += f.dim();
        }
        return true;
      }
      case StrongForm::hull_of_points: {
        if (const auto* balls = translate_set().balls()) {
          const auto& k = gauge_.as<Ball>();
          return balls->farthest(x - k.center).first <= k.radius + tol.eps_feas;
        }
        return max_convex_search(gauge_, translate_set(), x, tol).value <= tol.eps_margin;
      }
      case StrongForm::eroder: {
        for (const Vec& w : direction_grid(dim(), tol.direction_grid_size))
          if (w.dot(x) + strongconv::support(*eroder_, w) > strongconv::support(gauge_, w) + tol.eps_feas)
            return false;
        return true;
      }
    }
    return false;
  }

  // Construction helpers; use erode() and strong_hull() instead.
  static StrongSet make_empty(Body gauge) {
    StrongSet s(std::move(gauge));
    s.form_ = StrongForm::empty;
    return s;
  }
  static StrongSet make_polytope(Body gauge, HPolytope h, PointList translates = {}) {
    StrongSet s(std::move(gauge));
    s.form_ = h.empty() ? StrongForm::empty : StrongForm::polytope;
    s.hform_ = std::move(h);
    s.points_ = std::move(translates);
    return s;
  }
  static StrongSet make_ball(Body gauge, Ball b) {
    StrongSet s(std::move(gauge));
    s.form_ = b.radius < 0 ? StrongForm::empty : StrongForm::ball;
    s.ball_ = std::move(b);
    return s;
  }
  static StrongSet make_points(Body gauge, PointList pts, StrongForm form, const ToleranceConfig& tol) {
    StrongSet s(std::move(gauge));
    s.points_ = std::move(pts);
    s.tol_ = tol;
    s.form_ = form;
    s.lazy_->translates = std::make_shared<const TranslateSet>(s.gauge_, s.points_, tol);
    if (s.lazy_->translates->empty()) s.form_ = StrongForm::empty;
    return s;
  }
  static StrongSet make_eroder(Body gauge, Body eroder, const ToleranceConfig& tol) {
    StrongSet s(std::move(gauge));
    s.eroder_ = std::move(eroder);
    s.tol_ = tol;
    s.form_ = StrongForm::eroder;
    if (s.sampled().empty()) s.form_ = StrongForm::empty;
    return s;
  }
  static StrongSet make_product(Body gauge, std::vector<StrongSet> factors) {
    StrongSet s(std::move(gauge));
    s.form_ = StrongForm::product;
    for (const StrongSet& f : factors)
      if (f.empty()) s.form_ = StrongForm::empty;
    s.factors_ = std::move(factors);
    return s;
  }

  /// T(K, points) for the `translates` and `hull_of_points` forms.
  const TranslateSet& translate_set() const {
    if (!lazy_->translates) throw GeometryError("strong set carries no translate list");
    return *lazy_->translates;
  }

 private:
  explicit StrongSet(Body gauge) : gauge_(std::move(gauge)), lazy_(std::make_shared<Lazy>()) {}

  struct Lazy {
    std::shared_ptr<const TranslateSet> translates;
    std::once_flag outer_once;
    std::optional<HPolytope> outer;
  };

  // Circumscribed polytope on the direction grid:
  // { z : w.z <= h_K(w) - h_S(w) }.
  const HPolytope& sampled() const {
    std::call_once(lazy_->outer_once, [this] {
      const int n = dim();
      auto dirs = direction_grid(n, tol_.direction_grid_size);
      Mat A(static_cast<Eigen::Index>(dirs.size()), n);
      Vec b(static_cast<Eigen::Index>(dirs.size()));
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        const Vec& w = dirs[i];
        const double inner = form_ == StrongForm::eroder ? strongconv::support(*eroder_, w)
                                                         : translate_set().support(-w);
        A.row(static_cast<Eigen::Index>(i)) = w.transpose();
        b(static_cast<Eigen::Index>(i)) = strongconv::support(gauge_, w) - inner;
      }
      lazy_->outer = HPolytope(A, b);
    });
    return *lazy_->outer;
  }

  Body gauge_;
  StrongForm form_ = StrongForm::empty;
  std::optional<HPolytope> hform_;
  std::optional<Ball> ball_;
  PointList points_;
  std::optional<Body> eroder_;
  std::vector<StrongSet> factors_;
  ToleranceConfig tol_;
  std::shared_ptr<Lazy> lazy_;
};

namespace detail {

inline HPolytope erode_polytope(const HPolytope& k, const std::function<double(const Vec&)>& h) {
  Vec off(k.facet_count());
  for (int i = 0; i < k.facet_count(); ++i) off(i) = k.offsets()(i) - h(k.normal(i));
  return HPolytope(k.normals(), off);
}

}  // namespace detail

/// K * X for a finite point list: the points y with y + X inside K.
inline StrongSet erode(const Body& gauge, const PointList& points, const ToleranceConfig& tol = {}) {
  if (points.empty()) throw GeometryError("erosion needs a nonempty point set");
  for (const Vec& x : points)
    if (x.size() != gauge.dim()) throw DimensionError();
  if (gauge.is<HPolytope>()) {
    auto h = detail::erode_polytope(gauge.as<HPolytope>(), [&](const Vec& a) {
      double m = -std::numeric_limits<double>::infinity();
      for (const Vec& x : points) m = std::max(m, a.dot(x));
      return m;
    });
    return StrongSet::make_polytope(gauge, std::move(h), points);
  }
  if (gauge.is<ProductBody>()) {
    const auto dims = gauge.block_dims();
    std::vector<StrongSet> f;
    const auto& factors = gauge.as<ProductBody>().factors;
    for (std::size_t b = 0; b < factors.size(); ++b)
      f.push_back(erode(factors[b], block_of(points, dims, static_cast<int>(b)), tol));
    return StrongSet::make_product(gauge, std::move(f));
  }
  return StrongSet::make_points(gauge, points, StrongForm::translates, tol);
}

/// K * S for a convex body S: the points y with y + S inside K.
inline StrongSet erode(const Body& gauge, const Body& eroder, const ToleranceConfig& tol = {}) {
  if (eroder.dim() != gauge.dim()) throw DimensionError();
  if (eroder.is<HPolytope>() && eroder.as<HPolytope>().has_vertices()) {
    const auto& v = eroder.as<HPolytope>().vertices();
    if (v.empty()) throw EmptyError();
    return erode(gauge, v, tol);
  }
  if (gauge.is<HPolytope>())
    return StrongSet::make_polytope(
        gauge, detail::erode_polytope(gauge.as<HPolytope>(), [&](const Vec& a) { return support(eroder, a); }));
  if (gauge.is<Ball>() && eroder.is<Ball>()) {
    const auto& k = gauge.as<Ball>();
    const auto& s = eroder.as<Ball>();
    if (s.radius > k.radius + tol.eps_feas) return StrongSet::make_empty(gauge);
    return StrongSet::make_ball(gauge, Ball{k.center - s.center, std::max(0.0, k.radius - s.radius)});
  }
  if (gauge.is<ProductBody>() && eroder.is<ProductBody>() && gauge.block_dims() == eroder.block_dims()) {
    std::vector<StrongSet> f;
    const auto& gk = gauge.as<ProductBody>().factors;
    const auto& gs = eroder.as<ProductBody>().factors;
    for (std::size_t b = 0; b < gk.size(); ++b) f.push_back(erode(gk[b], gs[b], tol));
    return StrongSet::make_product(gauge, std::move(f));
  }
  return StrongSet::make_eroder(gauge, eroder, tol);
}

/// Wraps a strong set as a support-oracle body.
inline Body as_body(const StrongSet& s) {
  if (s.empty()) throw EmptyError();
  if (s.form() == StrongForm::polytope) return *s.cached_hform();
  if (s.form() == StrongForm::ball) return *s.closed_ball();
  SupportOracle o;
  o.dim = s.dim();
  o.label = "strong set";
  o.support_fn = [s](const Vec& u) { return s.support(u); };
  o.contains_fn = [s](const Vec& x, double eps) {
    ToleranceConfig t;
    t.eps_feas = eps;
    t.eps_margin = std::max(t.eps_margin, 10 * eps);
    return s.contains(x, t);
  };
  return o;
}

namespace detail {

// K * (K * X), given inner = K * X.
inline StrongSet erode_by_inner(const Body& gauge, const StrongSet& inner, const PointList& points,
                                const ToleranceConfig& tol) {
  if (inner.empty()) throw HullUndefinedError();
  if (gauge.is<HPolytope>()) {
    auto h = erode_polytope(gauge.as<HPolytope>(), [&](const Vec& a) { return inner.support(a); });
    return StrongSet::make_polytope(gauge, std::move(h));
  }
  if (gauge.is<ProductBody>()) {
    const auto& factors = gauge.as<ProductBody>().factors;
    const auto dims = gauge.block_dims();
    std::vector<StrongSet> f;
    for (std::size_t b = 0; b < factors.size(); ++b)
      f.push_back(erode_by_inner(factors[b], inner.factors()[b], block_of(points, dims, static_cast<int>(b)), tol));
    return StrongSet::make_product(gauge, std::move(f));
  }
  if (gauge.is<Ball>() && gauge.dim() == 2) {
    // The planar ball hull is cut out by the disks centred at the corners of
    // the centre region.
    const auto& k = gauge.as<Ball>();
    PointList centers;
    for (const Vec& x : points) centers.push_back(k.center - x);
    BallIntersection region = BallIntersection::equal_radius(centers, k.radius);
    PointList corners = region.vertices_2d();
    if (corners.empty()) return StrongSet::make_ball(gauge, Ball{points.front(), 0.0});
    return StrongSet::make_points(gauge, corners, StrongForm::translates, tol);
  }
  return StrongSet::make_points(gauge, points, StrongForm::hull_of_points, tol);
}

}  // namespace detail

/// conv_K X = K * (K * X). Throws HullUndefinedError when X fits in no
/// translate of K.
inline StrongSet strong_hull(const Body& gauge, const PointList& points, const ToleranceConfig& tol = {}) {
  StrongSet inner = erode(gauge, points, tol);
  if (inner.empty()) throw HullUndefinedError();
  return detail::erode_by_inner(gauge, inner, points, tol);
}

struct MemberResult {
  bool member = false;
  bool low_margin = false;  // |separation| within eps_margin
  double margin = 0.0;      // separation value: positive means outside
  std::optional<CoverWitness> witness;
  std::string route;        // "explicit" or "search"
  bool cross_checked = false;
  bool cross_check_agrees = true;
};

namespace detail {

inline MemberResult finish(double value, const Vec& t, const Vec& u, const ToleranceConfig& tol, std::string route) {
  MemberResult r;
  r.route = std::move(route);
  r.margin = value;
  r.member = !(value > tol.eps_margin);
  r.low_margin = r.member && value > -tol.eps_margin;
  if (!r.member) r.witness = CoverWitness{t, u, value};
  return r;
}

inline std::optional<MemberResult> explicit_member(const Body& gauge, const PointList& points, const Vec& p,
                                                   const ToleranceConfig& tol) {
  if (gauge.is<HPolytope>()) {
    const auto& k = gauge.as<HPolytope>();
    StrongSet inner = erode(gauge, points, tol);
    if (inner.empty()) throw HullUndefinedError();
    const HPolytope& e = *inner.cached_hform();
    // Among tied vertices the one nearest the origin, i.e. the shortest shift.
    auto face_point = [&](const Vec& a) -> Vec {
      if (!e.has_vertices()) return e.argmax(a);
      const double top = e.support(a);
      const double slack = 1e-12 * (1.0 + std::abs(top));
      const Vec* pick = nullptr;
      for (const Vec& v : e.vertices())
        if (a.dot(v) >= top - slack && (!pick || v.norm() < pick->norm())) pick = &v;
      return *pick;
    };
    double best = -std::numeric_limits<double>::infinity();
    Vec best_t, best_u;
    for (int i = 0; i < k.facet_count(); ++i) {
      const Vec a = k.normal(i);
      const Vec y = face_point(a);
      const Vec u = a / a.norm();
      const double v = u.dot(p + y) - support(gauge, u);
      if (v > best) {
        best = v;
        best_t = -y;
        best_u = u;
      }
    }
    return finish(best, best_t, best_u, tol, "explicit");
  }
  if (gauge.is<Ball>()) {
    const auto& k = gauge.as<Ball>();
    TranslateSet ts(gauge, points, tol);
    if (ts.empty()) throw HullUndefinedError();
    auto [d, t] = ts.balls()->farthest(p - k.center);
    Vec u = p - k.center - t;
    u = u.norm() > 0 ? Vec(u / u.norm()) : unit_vec(gauge.dim(), 0);
    return finish(d - k.radius, t, u, tol, "explicit");
  }
  if (gauge.is<ProductBody>()) {
    const auto& factors = gauge.as<ProductBody>().factors;
    const auto dims = gauge.block_dims();
    std::vector<MemberResult> parts;
    for (std::size_t b = 0; b < factors.size(); ++b) {
      auto r = explicit_member(factors[b], block_of(points, dims, static_cast<int>(b)),
                               block_of(p, dims, static_cast<int>(b)), tol);
      if (!r) return std::nullopt;
      parts.push_back(std::move(*r));
    }
    std::size_t worst = 0;
    for (std::size_t b = 1; b < parts.size(); ++b)
      if (parts[b].margin > parts[worst].margin) worst = b;
    if (parts[worst].member) {
      MemberResult r = parts[worst];
      r.witness.reset();
      return r;
    }
    Vec t(gauge.dim()), u = Vec::Zero(gauge.dim());
    int off = 0;
    for (std::size_t b = 0; b < factors.size(); ++b) {
      const int d = dims[b];
      if (b == worst) {
        t.segment(off, d) = parts[b].witness->t;
        u.segment(off, d) = parts[b].witness->u;
      } else {
        t.segment(off, d) = TranslateSet(factors[b], block_of(points, dims, static_cast<int>(b)), tol).any_point();
      }
      off += d;
    }
    return finish(parts[worst].margin, t, u, tol, "explicit");
  }
  return std::nullopt;
}

}  // namespace detail

/// Whether the gauge admits the exact membership route.
inline bool has_explicit_route(const Body& gauge) {
  if (gauge.is<HPolytope>() || gauge.is<Ball>()) return true;
  if (gauge.is<ProductBody>()) {
    for (const Body& f : gauge.as<ProductBody>().factors)
      if (!has_explicit_route(f)) return false;
    return true;
  }
  return false;
}

/// Membership through the translate search alone.
inline MemberResult hull_member_search(const Body& gauge, const PointList& points, const Vec& p,
                                       const ToleranceConfig& tol = {}) {
  TranslateSet ts(gauge, points, tol);
  if (ts.empty()) throw HullUndefinedError();
  auto res = max_convex_search(gauge, ts, p, tol);
  return detail::finish(res.value, res.best_t, res.best_u, tol, "search");
}

/// Membership through the exact route when the gauge has one, else the search.
inline MemberResult hull_member_fast(const Body& gauge, const PointList& points, const Vec& p,
                                     const ToleranceConfig& tol = {}) {
  if (p.size() != gauge.dim()) throw DimensionError();
  if (auto r = detail::explicit_member(gauge, points, p, tol)) return *r;
  return hull_member_search(gauge, points, p, tol);
}

/// p lies in conv_K X iff every translate of K containing X contains p.
///
/// Runs the translate search; for gauges with an exact route the explicit
/// answer is computed as well and returned, with `cross_check_agrees`
/// recording whether the two verdicts match.
inline MemberResult hull_member(const Body& gauge, const PointList& points, const Vec& p,
                                const ToleranceConfig& tol = {}) {
  if (p.size() != gauge.dim()) throw DimensionError();
  MemberResult searched = hull_member_search(gauge, points, p, tol);
  auto exact = detail::explicit_member(gauge, points, p, tol);
  if (!exact) return searched;
  MemberResult r = *exact;
  r.cross_checked = true;
  r.cross_check_agrees = r.member == searched.member;
  return r;
}

}  // namespace strongconv
