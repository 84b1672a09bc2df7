#pragma once

// The set of translates T = { t : X is contained in K + t } for a gauge K and
// a finite point set X. Since x lies in K + t exactly when t lies in x - K,
// T is the intersection of the reflected copies x - K, and it equals
// -(K erode X).

#include <strongconv/ball_intersection.hpp>
#include <strongconv/body.hpp>
#include <strongconv/disk2d.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <variant>

namespace strongconv {

class TranslateSet;

namespace detail {

struct PolytopeTranslates {
  HPolytope set;
};

struct BallTranslates {
  BallIntersection set;
};

/// Horizontal slices of the translate set of a cone are disk intersections
/// whose radii grow linearly with the vertical translate; the support in a
/// direction is a concave function of that coordinate.
class ConeTranslates {
 public:
  ConeTranslates(const ConeBody& cone, const PointList& pts, double eps)
      : cone_(cone), pts_(pts), eps_(eps) {
    hi_ = std::numeric_limits<double>::infinity();
    double lo = -std::numeric_limits<double>::infinity();
    for (const Vec& x : pts_) {
      const double z = x(2) - cone_.base_center(2);
      hi_ = std::min(hi_, z);
      lo = std::max(lo, z - cone_.apex_height);
    }
    empty_ = lo > hi_ + eps_ || !slice_nonempty(hi_);
    if (empty_) return;
    if (slice_nonempty(lo)) {
      lo_ = lo;
    } else {
      double a = lo, b = hi_;
      for (int it = 0; it < 200 && b - a > 1e-15 * (1 + std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        (slice_nonempty(mid) ? b : a) = mid;
      }
      lo_ = b;
    }
  }

  bool empty() const { return empty_; }

  Vec argmax(const Vec& w) const {
    if (empty_) throw EmptyError();
    auto value = [&](double tz, disk2d::Point& at) {
      auto disks = slice(tz);
      if (!disk2d::argmax(disks, w(0), w(1), eps_, at)) {
        // Roundoff at the lowest feasible level; fall back to the top.
        return -std::numeric_limits<double>::infinity();
      }
      return w(0) * at.x + w(1) * at.y + w(2) * tz;
    };
    double a = lo_, b = hi_;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    disk2d::Point pc{}, pd{};
    double fc = value(c, pc), fd = value(d, pd);
    for (int it = 0; it < 90 && b - a > 1e-14 * (1 + std::abs(a) + std::abs(b)); ++it) {
      if (fc < fd) {
        a = c;
        c = d;
        fc = fd;
        pc = pd;
        d = a + g * (b - a);
        fd = value(d, pd);
      } else {
        b = d;
        d = c;
        fd = fc;
        pd = pc;
        c = b - g * (b - a);
        fc = value(c, pc);
      }
    }
    double best_z = c;
    disk2d::Point best_p = pc;
    double best = fc;
    if (fd > best) {
      best = fd;
      best_z = d;
      best_p = pd;
    }
    for (double tz : {lo_, hi_}) {
      disk2d::Point p{};
      const double f = value(tz, p);
      if (f > best) {
        best = f;
        best_z = tz;
        best_p = p;
      }
    }
    if (!std::isfinite(best)) throw ConsistencyError("cone translate slices lost feasibility");
    return make_vec({best_p.x, best_p.y, best_z});
  }

  const ConeBody& cone() const { return cone_; }
  const PointList& points() const { return pts_; }

 private:
  std::vector<disk2d::Disk> slice(double tz) const {
    std::vector<disk2d::Disk> disks;
    disks.reserve(pts_.size());
    for (const Vec& x : pts_) {
      const double height = x(2) - cone_.base_center(2) - tz;
      disks.push_back({x(0) - cone_.base_center(0), x(1) - cone_.base_center(1),
                       std::max(0.0, cone_.slice_radius(height))});
    }
    return disks;
  }

  bool slice_nonempty(double tz) const { return disk2d::nonempty(slice(tz), eps_); }

  ConeBody cone_;
  PointList pts_;
  double eps_;
  double lo_ = 0.0, hi_ = 0.0;
  bool empty_ = true;
};

/// Gauges known only through a support function are replaced by their
/// circumscribed polytope on the direction grid.
inline HPolytope outer_polytope(const Body& body, int grid) {
  const int n = body.dim();
  auto dirs = direction_grid(n, grid);
  Mat A(static_cast<Eigen::Index>(dirs.size()), n);
  Vec b(static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    A.row(static_cast<Eigen::Index>(i)) = dirs[i].transpose();
    b(static_cast<Eigen::Index>(i)) = support(body, dirs[i]);
  }
  return HPolytope(A, b);
}

}  // namespace detail

/// T = { t : X is contained in K + t }, queried through its support function.
class TranslateSet {
 public:
  TranslateSet(const Body& gauge, const PointList& points, const ToleranceConfig& tol = {})
      : dim_(gauge.dim()) {
    if (points.empty()) throw GeometryError("translate set needs a nonempty point set");
    for (const Vec& x : points)
      if (x.size() != dim_) throw DimensionError();
    build(gauge, points, tol);
  }

  int dim() const { return dim_; }
  bool empty() const { return empty_; }

  double support(const Vec& w) const { return w.dot(argmax(w)); }

  Vec argmax(const Vec& w) const {
    if (empty_) throw EmptyError();
    return std::visit(
        [&](const auto& impl) -> Vec {
          using T = std::decay_t<decltype(impl)>;
          if constexpr (std::is_same_v<T, detail::PolytopeTranslates>) {
            return impl.set.argmax(w);
          } else if constexpr (std::is_same_v<T, detail::BallTranslates>) {
            return impl.set.argmax(w);
          } else if constexpr (std::is_same_v<T, detail::ConeTranslates>) {
            return impl.argmax(w);
          } else {
            Vec t(dim_);
            int off = 0;
            for (const TranslateSet& f : *impl) {
              t.segment(off, f.dim()) = f.argmax(w.segment(off, f.dim()));
              off += f.dim();
            }
            return t;
          }
        },
        impl_);
  }

  /// A deterministic member of T.
  Vec any_point() const {
    if (empty_) throw EmptyError();
    if (auto* p = std::get_if<detail::PolytopeTranslates>(&impl_)) {
      if (p->set.has_vertices()) {
        Vec c = Vec::Zero(dim_);
        for (const Vec& v : p->set.vertices()) c += v;
        return c / static_cast<double>(p->set.vertices().size());
      }
      return *lp_feasible_point(p->set.normals(), p->set.offsets());
    }
    if (auto* f = std::get_if<std::shared_ptr<const std::vector<TranslateSet>>>(&impl_)) {
      Vec t(dim_);
      int off = 0;
      for (const TranslateSet& s : **f) {
        t.segment(off, s.dim()) = s.any_point();
        off += s.dim();
      }
      return t;
    }
    Vec e = unit_vec(dim_, 0);
    return 0.5 * (argmax(e) + argmax(-e));
  }

  /// Halfspace description, available when the gauge is polytopal.
  const HPolytope* polytope() const {
    if (auto* p = std::get_if<detail::PolytopeTranslates>(&impl_)) return &p->set;
    return nullptr;
  }
  const BallIntersection* balls() const {
    if (auto* p = std::get_if<detail::BallTranslates>(&impl_)) return &p->set;
    return nullptr;
  }

 private:
  using Factors = std::shared_ptr<const std::vector<TranslateSet>>;

  void build(const Body& gauge, const PointList& points, const ToleranceConfig& tol) {
    if (gauge.is<HPolytope>() || gauge.is<SupportOracle>()) {
      const HPolytope k = gauge.is<HPolytope>() ? gauge.as<HPolytope>()
                                                : detail::outer_polytope(gauge, tol.direction_grid_size);
      Vec off(k.facet_count());
      for (int i = 0; i < k.facet_count(); ++i) {
        double hx = -std::numeric_limits<double>::infinity();
        for (const Vec& x : points) hx = std::max(hx, k.normals().row(i).dot(x));
        off(i) = k.offsets()(i) - hx;
      }
      HPolytope t(-k.normals(), off);
      empty_ = t.empty();
      impl_ = detail::PolytopeTranslates{std::move(t)};
    } else if (gauge.is<Ball>()) {
      const auto& ball = gauge.as<Ball>();
      PointList centers;
      for (const Vec& x : points) centers.push_back(x - ball.center);
      auto set = BallIntersection::equal_radius(std::move(centers), ball.radius);
      empty_ = set.empty();
      impl_ = detail::BallTranslates{std::move(set)};
    } else if (gauge.is<ConeBody>()) {
      detail::ConeTranslates set(gauge.as<ConeBody>(), points, tol.eps_feas);
      empty_ = set.empty();
      impl_ = std::move(set);
    } else {
      const auto& prod = gauge.as<ProductBody>();
      const auto dims = gauge.block_dims();
      auto factors = std::make_shared<std::vector<TranslateSet>>();
      empty_ = false;
      for (std::size_t b = 0; b < prod.factors.size(); ++b) {
        factors->emplace_back(prod.factors[b], block_of(points, dims, static_cast<int>(b)), tol);
        empty_ = empty_ || factors->back().empty();
      }
      impl_ = Factors(std::move(factors));
    }
  }

  int dim_ = 0;
  bool empty_ = true;
  std::variant<detail::PolytopeTranslates, detail::BallTranslates, detail::ConeTranslates, Factors> impl_;
};

/// Builds T for `gauge` and `points`; check `empty()` before querying.
inline TranslateSet translate_feasible_set(const Body& gauge, const PointList& points,
                                           const ToleranceConfig& tol = {}) {
  return TranslateSet(gauge, points, tol);
}

}  // namespace strongconv
