#pragma once

// Convex body representations and their primitive queries.

#include <strongconv/core.hpp>
#include <strongconv/directions.hpp>
#include <strongconv/lp.hpp>
#include <strongconv/polytope.hpp>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace strongconv {

/// {x : normals * x <= offsets}. Vertices are cached on construction when the
/// system is small enough to enumerate; support queries fall back to the LP
/// otherwise. Callers constructing from untrusted data should go through
/// `HPolytope::checked`.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(Mat normals, Vec offsets) : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.rows() != offsets_.size()) throw DimensionError("normals/offsets size mismatch");
    cache_vertices();
  }

  /// Validates nonzero normals, nonemptiness and boundedness.
  static HPolytope checked(Mat normals, Vec offsets) {
    if (normals.rows() == 0) throw GeometryError("polytope needs at least one halfspace");
    for (Eigen::Index i = 0; i < normals.rows(); ++i)
      if (!(normals.row(i).norm() > 0)) throw GeometryError("degenerate normal");
    if (!normals.allFinite() || !offsets.allFinite()) throw GeometryError("non-finite polytope data");
    HPolytope p(std::move(normals), std::move(offsets));
    const int n = p.dim();
    for (int i = 0; i < n; ++i) {
      for (double s : {1.0, -1.0}) {
        auto r = lp_max(s * unit_vec(n, i), p.normals_, p.offsets_);
        if (r.status == LpStatus::infeasible) throw EmptyError();
        if (r.status == LpStatus::unbounded) throw UnboundedError();
      }
    }
    return p;
  }

  static HPolytope box(const Vec& lo, const Vec& hi) {
    const auto n = lo.size();
    Mat A = Mat::Zero(2 * n, n);
    Vec b(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      A(2 * i, i) = 1.0;
      b(2 * i) = hi(i);
      A(2 * i + 1, i) = -1.0;
      b(2 * i + 1) = -lo(i);
    }
    return HPolytope(A, b);
  }

  static HPolytope cube(int n, double half_width) {
    return box(Vec::Constant(n, -half_width), Vec::Constant(n, half_width));
  }

  /// {x : sum |x_i| <= radius}.
  static HPolytope cross_polytope(int n, double radius) {
    const int m = 1 << n;
    Mat A(m, n);
    for (int s = 0; s < m; ++s)
      for (int i = 0; i < n; ++i) A(s, i) = (s >> i & 1) ? -1.0 : 1.0;
    return HPolytope(A, Vec::Constant(m, radius));
  }

  /// Segment [p, q] in any dimension (a degenerate polytope).
  static HPolytope segment(const Vec& p, const Vec& q) {
    const auto n = p.size();
    const Vec d = q - p;
    if (!(d.norm() > 0)) throw GeometryError("segment endpoints coincide");
    Mat D(n, 1);
    D.col(0) = d.normalized();
    const Mat Q = Eigen::HouseholderQR<Mat>(D).householderQ();
    Mat A(2 * n, n);
    Vec b(2 * n);
    A.row(0) = D.col(0).transpose();
    b(0) = A.row(0).dot(q);
    A.row(1) = -D.col(0).transpose();
    b(1) = A.row(1).dot(p);
    for (Eigen::Index j = 1; j < n; ++j) {
      A.row(2 * j) = Q.col(j).transpose();
      b(2 * j) = A.row(2 * j).dot(p);
      A.row(2 * j + 1) = -Q.col(j).transpose();
      b(2 * j + 1) = A.row(2 * j + 1).dot(p);
    }
    return HPolytope(A, b);
  }

  /// Convex hull of planar points.
  static HPolytope polygon(const PointList& points) {
    PointList hull = convex_hull_2d(points);
    if (hull.size() < 3) throw GeometryError("polygon needs three non-collinear vertices");
    auto [A, b] = halfspaces_from_polygon(hull);
    return HPolytope(A, b);
  }

  int dim() const { return static_cast<int>(normals_.cols()); }
  int facet_count() const { return static_cast<int>(normals_.rows()); }
  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }
  Vec normal(int i) const { return normals_.row(i).transpose(); }

  bool has_vertices() const { return static_cast<bool>(vertices_); }
  /// Cached vertex list; empty when the polytope is empty. Throws when the
  /// system was too large to enumerate.
  const PointList& vertices() const {
    if (!vertices_) throw GeometryError("vertex cache unavailable for this polytope");
    return *vertices_;
  }

  bool empty() const {
    if (vertices_) return vertices_->empty();
    if (tall()) {
      // Farkas: empty iff some l >= 0 with A^T l = 0, sum l = 1 has b.l < 0.
      const int n = dim();
      Mat M(n + 1, facet_count());
      M.topRows(n) = normals_.transpose();
      M.row(n).setOnes();
      Vec r = Vec::Zero(n + 1);
      r(n) = 1.0;
      auto f = lp_min_standard(offsets_, M, r);
      const double scale = std::max(1.0, offsets_.cwiseAbs().maxCoeff());
      return f.optimal() && f.value < -1e-9 * scale;
    }
    return lp_max(Vec::Zero(dim()), normals_, offsets_).status == LpStatus::infeasible;
  }

  double support(const Vec& u) const {
    if (vertices_) {
      if (vertices_->empty()) throw EmptyError();
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& v : *vertices_) best = std::max(best, u.dot(v));
      return best;
    }
    return support_lp(u);
  }

  Vec argmax(const Vec& u) const {
    if (vertices_) {
      if (vertices_->empty()) throw EmptyError();
      const Vec* best = &vertices_->front();
      for (const Vec& v : *vertices_)
        if (u.dot(v) > u.dot(*best)) best = &v;
      return *best;
    }
    auto r = lp_max(u, normals_, offsets_);
    if (r.status == LpStatus::infeasible) throw EmptyError();
    if (r.status == LpStatus::unbounded) throw UnboundedError();
    return r.argmax;
  }

  double support_lp(const Vec& u) const {
    if (tall()) {
      // Dual: min b.l subject to A^T l = u, l >= 0.
      auto d = lp_min_standard(offsets_, normals_.transpose(), u);
      if (d.optimal()) return d.value;
      if (d.status == LpStatus::unbounded) throw EmptyError();
    }
    auto r = lp_max(u, normals_, offsets_);
    if (r.status == LpStatus::infeasible) throw EmptyError();
    if (r.status == LpStatus::unbounded) throw UnboundedError();
    return r.value;
  }

  /// Largest normalized constraint violation (negative inside).
  double violation(const Vec& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < normals_.rows(); ++i)
      worst = std::max(worst, (normals_.row(i).dot(x) - offsets_(i)) / normals_.row(i).norm());
    return worst;
  }

 private:
  // Many more facets than dimensions: LPs go through the standard form.
  bool tall() const { return facet_count() > 8 * std::max(dim(), 1); }

  void cache_vertices() {
    const int n = dim();
    const int m = facet_count();
    if (n == 0 || m == 0 || n > 4) return;
    double combos = 1.0;
    for (int i = 0; i < n; ++i) combos = combos * (m - i) / (i + 1);
    if (combos > 20000) return;
    auto v = enumerate_vertices(normals_, offsets_);
    vertices_ = std::make_shared<const PointList>(std::move(v));
  }

  Mat normals_;
  Vec offsets_;
  std::shared_ptr<const PointList> vertices_;
};

struct Ball {
  Vec center;
  double radius = 0.0;

  int dim() const { return static_cast<int>(center.size()); }
};

/// Convex hull of a horizontal disk and the apex straight above its center.
/// The base lies in the plane z = base_center.z.
struct ConeBody {
  Vec base_center = Vec::Zero(3);
  double base_radius = 1.0;
  double apex_height = 1.0;

  Vec apex() const { return base_center + apex_height * unit_vec(3, 2); }
  /// Radius of the horizontal slice at height `z` above the base plane.
  double slice_radius(double z) const { return base_radius * (1.0 - z / apex_height); }
};

/// A body known only through its support function. `contains_fn` is optional;
/// without it membership is tested on a direction grid.
struct SupportOracle {
  int dim = 0;
  std::function<double(const Vec&)> support_fn;
  std::function<bool(const Vec&, double)> contains_fn;
  std::string label;
};

class Body;

struct ProductBody {
  std::vector<Body> factors;
};

class Body {
 public:
  using Variant = std::variant<HPolytope, Ball, ConeBody, ProductBody, SupportOracle>;

  Body(HPolytope p) : v_(std::move(p)) {}
  Body(Ball b) : v_(std::move(b)) {
    if (!(v_.index() == 1 && std::get<Ball>(v_).radius >= 0))
      throw GeometryError("ball radius must be non-negative");
  }
  Body(ConeBody c) : v_(std::move(c)) {
    const auto& cone = std::get<ConeBody>(v_);
    if (cone.base_center.size() != 3) throw DimensionError("cone lives in R^3");
    if (!(cone.base_radius > 0) || !(cone.apex_height > 0))
      throw GeometryError("cone radius and height must be positive");
  }
  Body(ProductBody p) : v_(std::move(p)) {
    if (std::get<ProductBody>(v_).factors.empty()) throw GeometryError("empty product");
  }
  Body(SupportOracle o) : v_(std::move(o)) {}

  const Variant& variant() const { return v_; }

  template <class T>
  bool is() const { return std::holds_alternative<T>(v_); }
  template <class T>
  const T& as() const { return std::get<T>(v_); }

  int dim() const;
  std::vector<int> block_dims() const;

 private:
  Variant v_;
};

inline int Body::dim() const {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConeBody>) {
          return 3;
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          int n = 0;
          for (const Body& f : b.factors) n += f.dim();
          return n;
        } else if constexpr (std::is_same_v<T, SupportOracle>) {
          return b.dim;
        } else {
          return b.dim();
        }
      },
      v_);
}

inline std::vector<int> Body::block_dims() const {
  if (!is<ProductBody>()) return {dim()};
  std::vector<int> out;
  for (const Body& f : as<ProductBody>().factors) out.push_back(f.dim());
  return out;
}

namespace detail {

inline void require_dim(const Body& body, const Vec& v) {
  if (v.size() != body.dim()) throw DimensionError();
}

template <class Fn>
void for_each_block(const ProductBody& p, Fn&& fn) {
  int offset = 0;
  for (const Body& f : p.factors) {
    const int d = f.dim();
    fn(f, offset, d);
    offset += d;
  }
}

inline double cone_support(const ConeBody& c, const Vec& u) {
  const double base = u.dot(c.base_center) + c.base_radius * std::hypot(u(0), u(1));
  const double apex = u.dot(c.apex());
  return std::max(base, apex);
}

}  // namespace detail

/// h(u) = max over the body of u.x.
inline double support(const Body& body, const Vec& u) {
  detail::require_dim(body, u);
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          return b.support(u);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return u.dot(b.center) + b.radius * u.norm();
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          return detail::cone_support(b, u);
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          double s = 0.0;
          detail::for_each_block(b, [&](const Body& f, int off, int d) { s += support(f, u.segment(off, d)); });
          return s;
        } else {
          return b.support_fn(u);
        }
      },
      body.variant());
}

/// A maximizer of u.x over the body.
inline Vec support_point(const Body& body, const Vec& u) {
  detail::require_dim(body, u);
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          return b.argmax(u);
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double nu = u.norm();
          return nu > 0 ? Vec(b.center + b.radius * u / nu) : b.center;
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          const double r = std::hypot(u(0), u(1));
          Vec base = b.base_center;
          if (r > 0) {
            base(0) += b.base_radius * u(0) / r;
            base(1) += b.base_radius * u(1) / r;
          }
          return u.dot(base) >= u.dot(b.apex()) ? base : b.apex();
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          Vec x(u.size());
          detail::for_each_block(b, [&](const Body& f, int off, int d) {
            x.segment(off, d) = support_point(f, u.segment(off, d));
          });
          return x;
        } else {
          // Central-difference gradient of the support function.
          Vec x(u.size());
          const double h = 1e-6 * std::max(1.0, u.norm());
          for (Eigen::Index i = 0; i < u.size(); ++i) {
            Vec up = u, um = u;
            up(i) += h;
            um(i) -= h;
            x(i) = (b.support_fn(up) - b.support_fn(um)) / (2 * h);
          }
          return x;
        }
      },
      body.variant());
}

/// Closed membership with `eps_feas` slack. SupportOracle bodies without a
/// membership callback are checked on a direction grid plus a local
/// refinement of the worst direction, so the answer is approximate.
inline bool contains(const Body& body, const Vec& x, const ToleranceConfig& tol = {}) {
  detail::require_dim(body, x);
  const double eps = tol.eps_feas;
  return std::visit(
      [&](const auto& b) -> bool {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          return b.violation(x) <= eps;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - b.center).norm() <= b.radius + eps;
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          const Vec q = x - b.base_center;
          if (q(2) < -eps || q(2) > b.apex_height + eps) return false;
          const double slope = b.base_radius / b.apex_height;
          const double excess = std::hypot(q(0), q(1)) - b.slice_radius(q(2));
          return excess / std::sqrt(1.0 + slope * slope) <= eps;
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          bool ok = true;
          detail::for_each_block(b, [&](const Body& f, int off, int d) {
            ok = ok && contains(f, x.segment(off, d), tol);
          });
          return ok;
        } else {
          if (b.contains_fn) return b.contains_fn(x, eps);
          const int n = b.dim;
          Vec worst_u;
          double worst = -std::numeric_limits<double>::infinity();
          for (const Vec& u : direction_grid(n, tol.direction_grid_size)) {
            const double gap = u.dot(x) - b.support_fn(u);
            if (gap > worst) {
              worst = gap;
              worst_u = u;
            }
          }
          double step = grid_spacing(n, tol.direction_grid_size);
          for (int it = 0; it < tol.refine_iters && worst <= eps; ++it) {
            bool improved = false;
            for (int i = 0; i < n; ++i) {
              for (double s : {step, -step}) {
                Vec u = worst_u;
                u(i) += s;
                u.normalize();
                const double gap = u.dot(x) - b.support_fn(u);
                if (gap > worst) {
                  worst = gap;
                  worst_u = u;
                  improved = true;
                }
              }
            }
            if (!improved) step *= 0.5;
          }
          return worst <= eps;
        }
      },
      body.variant());
}

/// Rigid translate of any body; exact for every variant.
inline Body translate(const Body& body, const Vec& t) {
  detail::require_dim(body, t);
  return std::visit(
      [&](const auto& b) -> Body {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          return HPolytope(b.normals(), b.offsets() + b.normals() * t);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return Ball{b.center + t, b.radius};
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          return ConeBody{b.base_center + t, b.base_radius, b.apex_height};
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          ProductBody out;
          detail::for_each_block(b, [&](const Body& f, int off, int d) {
            out.factors.push_back(translate(f, t.segment(off, d)));
          });
          return out;
        } else {
          SupportOracle o = b;
          auto h = b.support_fn;
          o.support_fn = [h, t](const Vec& u) { return h(u) + u.dot(t); };
          if (b.contains_fn) {
            auto c = b.contains_fn;
            o.contains_fn = [c, t](const Vec& x, double eps) { return c(x - t, eps); };
          }
          return o;
        }
      },
      body.variant());
}

/// Homothety about the origin by a positive factor.
inline Body scale(const Body& body, double s) {
  if (!(s > 0)) throw GeometryError("scale factor must be positive");
  return std::visit(
      [&](const auto& b) -> Body {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          return HPolytope(b.normals(), s * b.offsets());
        } else if constexpr (std::is_same_v<T, Ball>) {
          return Ball{s * b.center, s * b.radius};
        } else if constexpr (std::is_same_v<T, ConeBody>) {
          return ConeBody{s * b.base_center, s * b.base_radius, s * b.apex_height};
        } else if constexpr (std::is_same_v<T, ProductBody>) {
          ProductBody out;
          for (const Body& f : b.factors) out.factors.push_back(scale(f, s));
          return out;
        } else {
          SupportOracle o = b;
          auto h = b.support_fn;
          o.support_fn = [h, s](const Vec& u) { return s * h(u); };
          if (b.contains_fn) {
            auto c = b.contains_fn;
            o.contains_fn = [c, s](const Vec& x, double eps) { return c(x / s, eps / s); };
          }
          return o;
        }
      },
      body.variant());
}

/// Image of `body` under x -> L x + shift.
///
/// Polytope normals map by the inverse transpose. A ball stays a ball under
/// similarities; any other linear image of a ball, cone or product becomes a
/// SupportOracle.
inline Body transform(const Body& body, const Mat& linear_map, const Vec& shift) {
  const int n = body.dim();
  if (linear_map.rows() != n || linear_map.cols() != n || shift.size() != n) throw DimensionError();
  Eigen::FullPivLU<Mat> lu(linear_map);
  if (!lu.isInvertible()) throw SingularMapError();
  const Mat inv = lu.inverse();
  const Mat inv_t = inv.transpose();
  if ((linear_map - Mat::Identity(n, n)).norm() == 0.0) return translate(body, shift);

  if (body.is<HPolytope>()) {
    const auto& p = body.as<HPolytope>();
    Mat A = p.normals() * inv;  // rows are (L^{-T} a_i)^T
    Vec b = p.offsets() + A * shift;
    return HPolytope(A, b);
  }
  if (body.is<Ball>()) {
    const auto& ball = body.as<Ball>();
    const Mat gram = linear_map.transpose() * linear_map;
    const double lambda2 = gram.trace() / n;
    if ((gram - lambda2 * Mat::Identity(n, n)).norm() <= 1e-12 * lambda2 * n)
      return Ball{linear_map * ball.center + shift, std::sqrt(lambda2) * ball.radius};
  }
  SupportOracle o;
  o.dim = n;
  o.label = "linear image";
  const Mat lt = linear_map.transpose();
  o.support_fn = [body, lt, shift](const Vec& u) { return support(body, lt * u) + u.dot(shift); };
  o.contains_fn = [body, inv, shift](const Vec& x, double eps) {
    ToleranceConfig t;
    t.eps_feas = eps;
    t.eps_margin = std::max(eps * 10, t.eps_margin);
    return contains(body, inv * (x - shift), t);
  };
  return o;
}

/// Minkowski sum. Exact for ball+ball, anything plus a point (radius-0 ball),
/// planar polytopes and blockwise-compatible products; a SupportOracle with
/// h = h_a + h_b otherwise.
inline Body minkowski_sum(const Body& a, const Body& b) {
  if (a.dim() != b.dim()) throw DimensionError();
  if (b.is<Ball>() && b.as<Ball>().radius == 0.0) return translate(a, b.as<Ball>().center);
  if (a.is<Ball>() && a.as<Ball>().radius == 0.0) return translate(b, a.as<Ball>().center);
  if (a.is<Ball>() && b.is<Ball>()) {
    const auto& x = a.as<Ball>();
    const auto& y = b.as<Ball>();
    return Ball{x.center + y.center, x.radius + y.radius};
  }
  if (a.is<HPolytope>() && b.is<HPolytope>() && a.dim() == 2) {
    const auto& va = a.as<HPolytope>().vertices();
    const auto& vb = b.as<HPolytope>().vertices();
    PointList sums;
    for (const Vec& p : va)
      for (const Vec& q : vb) sums.push_back(p + q);
    return HPolytope::polygon(sums);
  }
  if (a.is<ProductBody>() && b.is<ProductBody>() && a.block_dims() == b.block_dims()) {
    ProductBody out;
    const auto& fa = a.as<ProductBody>().factors;
    const auto& fb = b.as<ProductBody>().factors;
    for (std::size_t i = 0; i < fa.size(); ++i) out.factors.push_back(minkowski_sum(fa[i], fb[i]));
    return out;
  }
  SupportOracle o;
  o.dim = a.dim();
  o.label = "minkowski sum";
  o.support_fn = [a, b](const Vec& u) { return support(a, u) + support(b, u); };
  return o;
}

/// Projection of a point onto one block of a product decomposition.
inline Vec block_of(const Vec& x, const std::vector<int>& dims, int block) {
  int off = 0;
  for (int i = 0; i < block; ++i) off += dims[static_cast<std::size_t>(i)];
  return x.segment(off, dims[static_cast<std::size_t>(block)]);
}

inline PointList block_of(const PointList& xs, const std::vector<int>& dims, int block) {
  PointList out;
  out.reserve(xs.size());
  for (const Vec& x : xs) out.push_back(block_of(x, dims, block));
  return out;
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

/// Line segment [lo, hi] as a 1D polytope.
inline HPolytope segment_1d(double lo, double hi) { return HPolytope::box(make_vec({lo}), make_vec({hi})); }

}  // namespace strongconv
