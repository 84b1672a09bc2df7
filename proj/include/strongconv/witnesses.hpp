#pragma once

// Constructive lower-bound instances: the n-point witness built from the
// inscribed ellipsoid, products of witnesses, and the cone family whose
// Caratheodory number grows with the number of points.

#include <strongconv/covering.hpp>
#include <strongconv/ellipsoid.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace strongconv {

/// A gauge, a point set and a test point inside conv_K X, together with
/// translates separating p from the hulls of proper subsets.
struct WitnessInstance {
  Body gauge = Ball{Vec(), 0.0};
  PointList points;
  Vec test_point;
  int expected_min_subset = 0;
  std::vector<std::pair<std::vector<int>, CoverWitness>> certificates;
  std::vector<std::pair<std::string, double>> parameters;

  double parameter(const std::string& key) const {
    for (const auto& [k, v] : parameters)
      if (k == key) return v;
    throw GeometryError("no parameter " + key);
  }
};

namespace detail {

// Exact test a * b >= num / den for positive finite doubles and den < 2^20.
inline bool product_at_least(double a, double b, std::uint64_t num, std::uint64_t den) {
  using u128 = unsigned __int128;
  if (den >= (1u << 20)) throw GeometryError("denominator too large for exact comparison");
  int ea = 0, eb = 0;
  const auto ma = static_cast<std::uint64_t>(std::ldexp(std::frexp(a, &ea), 53));
  const auto mb = static_cast<std::uint64_t>(std::ldexp(std::frexp(b, &eb), 53));
  // a * b * den = m * 2^e with m < 2^126.
  const u128 m = static_cast<u128>(ma) * mb * den;
  const int e = ea + eb - 106;
  const u128 target = num;
  if (e >= 0) return e >= 64 || (m >> (127 - e)) != 0 || (m << e) >= target;
  const int k = -e;
  if (k >= 127) return target == 0;
  // m / 2^k >= num  <=>  floor(m / 2^k) >= num, num being an integer.
  return (m >> k) >= target;
}

inline Vec plane(double x, double y) { return make_vec({x, y}); }

}  // namespace detail

/// R = n + 1/(4n) as the smallest double that is at least the rational value.
inline double required_radius(int n) {
  double r = n + 1.0 / (4.0 * n);
  const auto num = static_cast<std::uint64_t>(4 * n * n + 1), den = static_cast<std::uint64_t>(4 * n);
  while (!detail::product_at_least(r, 1.0, num, den)) r = std::nextafter(r, 2 * r);
  while (true) {
    const double lower = std::nextafter(r, 0.0);
    if (!detail::product_at_least(lower, 1.0, num, den)) break;
    r = lower;
  }
  return r;
}

namespace detail {

// Separators for X = {e_1..e_n}, p = sum e_i / n, given the touching points
// p_j (outer normal e_j) of the final gauge.
inline void add_basis_certificates(WitnessInstance& w, const PointList& touch, double inner_radius,
                                   const ToleranceConfig& tol) {
  const int n = w.gauge.dim();
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const Vec e = unit_vec(n, j);
    CoverWitness c;
    c.t = e / (2.0 * n) - touch[static_cast<std::size_t>(j)];
    c.u = e;
    c.margin = e.dot(w.test_point - c.t) - support(w.gauge, e);
    // The inner ball of the translate reaches every other basis vector.
    const Vec centre = (1.0 / (2.0 * n) - inner_radius) * e;
    for (int k = 0; k < n; ++k)
      if (k != j && (unit_vec(n, k) - centre).norm() > inner_radius)
        throw ConsistencyError("inner tangent ball misses a basis vector");
    std::vector<int> subset;
    for (int k = 0; k < n; ++k)
      if (k != j) subset.push_back(k);
    if (!revalidate(w.gauge, select(w.points, subset), w.test_point, c, tol))
      throw ConsistencyError("separating translate does not revalidate");
    worst = std::min(worst, c.margin);
    w.certificates.emplace_back(std::move(subset), std::move(c));
  }
  w.parameters.emplace_back("min_margin", worst);
}

inline WitnessInstance basis_instance(int n) {
  WitnessInstance w;
  for (int i = 0; i < n; ++i) w.points.push_back(unit_vec(n, i));
  w.test_point = Vec::Constant(n, 1.0 / n);
  w.expected_min_subset = n;
  return w;
}

}  // namespace detail

/// The n-point witness for a polytope gauge: an affine image of K whose
/// strong hull of {e_1..e_n} contains their centroid but no proper subset
/// hull does.
inline WitnessInstance witness_at_least_n(const HPolytope& k, const ToleranceConfig& tol = {}) {
  const int n = k.dim();
  if (n < 2) throw GeometryError("witness needs dimension at least 2");
  const InscribedEllipsoid ie = inscribed_ellipsoid(k);
  const Mat& B = ie.ellipsoid.shape;
  const Vec& d = ie.ellipsoid.center;
  const Eigen::LDLT<Mat> bsolve(B);

  // Tangency directions in the frame where the ellipsoid is the unit ball;
  // greedy choice of a well-conditioned basis.
  PointList dirs;
  for (const Vec& q : ie.tangency) dirs.push_back(bsolve.solve(q - d).normalized());
  Mat V(n, n);
  PointList ortho;
  std::vector<bool> used(dirs.size(), false);
  for (int c = 0; c < n; ++c) {
    int best = -1;
    double best_len = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (used[i]) continue;
      Vec r = dirs[i];
      for (const Vec& o : ortho) r -= r.dot(o) * o;
      if (r.norm() > best_len + 1e-12) {
        best_len = r.norm();
        best = static_cast<int>(i);
      }
    }
    if (best < 0 || best_len < 1e-6) throw GeometryError("tangency points fail to span");
    used[static_cast<std::size_t>(best)] = true;
    Vec r = dirs[static_cast<std::size_t>(best)];
    for (const Vec& o : ortho) r -= r.dot(o) * o;
    ortho.push_back(r.normalized());
    V.col(c) = dirs[static_cast<std::size_t>(best)];
  }

  // L = V^T sends the chosen normals to e_1..e_n. The image of the unit ball
  // has semi-axes = singular values of L; a ball of radius
  // sigma_min^2 / sigma_max rolls freely inside it.
  const Mat L = V.transpose();
  Eigen::JacobiSVD<Mat> svd(L);
  const Vec sv = svd.singularValues();
  const double r = sv.minCoeff() * sv.minCoeff() / sv.maxCoeff();
  const double R = required_radius(n);
  const auto num = static_cast<std::uint64_t>(4 * n * n + 1), den = static_cast<std::uint64_t>(4 * n);
  double s = R / r;
  while (!detail::product_at_least(s, r, num, den)) s = std::nextafter(s, 2 * s);

  const Mat M = s * L * bsolve.solve(Mat::Identity(n, n));
  WitnessInstance w = detail::basis_instance(n);
  w.gauge = transform(Body(k), M, -M * d);
  PointList touch;
  for (int j = 0; j < n; ++j) touch.push_back(s * (L * V.col(j)));
  w.parameters = {{"scale", s}, {"rolling_radius", r}, {"inner_radius", s * r}, {"required_radius", R}};
  detail::add_basis_certificates(w, touch, s * r, tol);
  return w;
}

/// Ball gauges: the instance is directly Ball(0, n + 1/(4n)).
inline WitnessInstance witness_at_least_n(const Ball& k, const ToleranceConfig& tol = {}) {
  const int n = static_cast<int>(k.center.size());
  if (n < 2) throw GeometryError("witness needs dimension at least 2");
  const double R = required_radius(n);
  WitnessInstance w = detail::basis_instance(n);
  w.gauge = Ball{Vec::Zero(n), R};
  PointList touch;
  for (int j = 0; j < n; ++j) touch.push_back(R * unit_vec(n, j));
  w.parameters = {{"scale", R / k.radius}, {"rolling_radius", k.radius}, {"inner_radius", R}, {"required_radius", R}};
  detail::add_basis_certificates(w, touch, R, tol);
  return w;
}

inline WitnessInstance witness_at_least_n(const Body& k, const ToleranceConfig& tol = {}) {
  if (k.is<HPolytope>()) return witness_at_least_n(k.as<HPolytope>(), tol);
  if (k.is<Ball>()) return witness_at_least_n(k.as<Ball>(), tol);
  throw GeometryError("lower-bound witness needs a polytope or ball gauge");
}

/// A witness for one factor: p lies in conv_G of the points but in no hull
/// of a proper subset.
struct FactorWitness {
  Body gauge = Ball{Vec(), 0.0};
  PointList points;
  Vec point;
};

namespace detail {

// Separating translates for every maximal proper subset; throws when the
// factor witness is not minimal.
inline std::vector<CoverWitness> factor_separators(const FactorWitness& f, const ToleranceConfig& tol) {
  if (f.points.empty()) throw GeometryError("factor witness has no points");
  if (!hull_member_fast(f.gauge, f.points, f.point, tol).member)
    throw GeometryError("factor point is not in the strong hull");
  std::vector<CoverWitness> out;
  if (f.points.size() == 1) return out;
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    PointList rest = f.points;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    auto w = cover_avoiding_escalated(f.gauge, rest, f.point, tol);
    if (!w) throw GeometryError("factor witness is not minimal");
    out.push_back(*w);
  }
  return out;
}

}  // namespace detail

/// X = (Y x {q_Z}) u ({q_Y} x Z) and p = (p_Y, p_Z) for K = L x M, with
/// q_Y, q_Z the first points of Y and Z.
inline WitnessInstance witness_product(const FactorWitness& lw, const FactorWitness& mw,
                                       const ToleranceConfig& tol = {}) {
  const auto sep_l = detail::factor_separators(lw, tol);
  const auto sep_m = detail::factor_separators(mw, tol);
  const int dl = lw.gauge.dim(), dm = mw.gauge.dim();
  const int ny = static_cast<int>(lw.points.size()), nz = static_cast<int>(mw.points.size());
  auto join = [&](const Vec& a, const Vec& b) {
    Vec x(dl + dm);
    x << a, b;
    return x;
  };

  WitnessInstance w;
  w.gauge = ProductBody{{lw.gauge, mw.gauge}};
  for (const Vec& y : lw.points) w.points.push_back(join(y, mw.points.front()));
  for (int j = 1; j < nz; ++j) w.points.push_back(join(lw.points.front(), mw.points[static_cast<std::size_t>(j)]));
  w.test_point = join(lw.point, mw.point);
  w.expected_min_subset = std::max(0, ny + nz - 2);

  const Vec cover_l = *cover_translate(lw.gauge, lw.points, tol);
  const Vec cover_m = *cover_translate(mw.gauge, mw.points, tol);
  auto all_but = [&](int skip) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(w.points.size()); ++i)
      if (i != skip) idx.push_back(i);
    return idx;
  };
  auto record = [&](std::vector<int> subset, const CoverWitness& f, bool first) {
    CoverWitness c;
    c.t = first ? join(f.t, cover_m) : join(cover_l, f.t);
    c.u = first ? join(f.u, Vec::Zero(dm)) : join(Vec::Zero(dl), f.u);
    c.margin = f.margin;
    if (!revalidate(w.gauge, select(w.points, subset), w.test_point, c, tol))
      throw ConsistencyError("projected separator does not revalidate");
    w.certificates.emplace_back(std::move(subset), std::move(c));
  };
  for (int i = 1; i < ny; ++i) record(all_but(i), sep_l[static_cast<std::size_t>(i)], true);
  for (int j = 1; j < nz; ++j) record(all_but(ny + j - 1), sep_m[static_cast<std::size_t>(j)], false);
  w.parameters = {{"lower_bound", static_cast<double>(w.expected_min_subset)},
                  {"upper_bound", static_cast<double>(dl + dm)}};
  return w;
}

/// Base-plane geometry of the cone family: the m-gon on the circle of
/// radius 1/2, the unit arcs bounding its disk hull, and the unit circle
/// through the two neighbours of a dropped vertex.
struct ConeBaseGeometry {
  int m = 0;
  PointList vertices;     // 2D
  PointList arc_centers;  // arc k joins vertices k and k+1
  int dropped = 0;
  Vec big_center;         // unit circle through the neighbours of `dropped`
  double d_min = 0.0;     // distance from the centre to the hull boundary
};

namespace detail {

// Centre of the unit circle through a and b on the side away from
// `outward`, so the arc between them bulges towards `outward`.
inline Vec far_center(const Vec& a, const Vec& b, const Vec& outward) {
  const Vec mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a).norm();
  Vec normal = make_vec({b(1) - a(1), a(0) - b(0)}).normalized();
  if (normal.dot(outward) < 0) normal = -normal;
  return mid - std::sqrt(1.0 - half * half) * normal;
}

}  // namespace detail

inline double cone_d_min(int m) {
  const double a = std::numbers::pi / m;
  return 1.0 + 0.5 * std::cos(a) - std::sqrt(1.0 - 0.25 * std::sin(a) * std::sin(a));
}

inline ConeBaseGeometry cone_base_geometry(int m, int dropped = 0) {
  if (m < 4) throw GeometryError("cone witness needs at least 4 points");
  ConeBaseGeometry g;
  g.m = m;
  for (int k = 0; k < m; ++k) {
    const double a = 2 * std::numbers::pi * k / m;
    g.vertices.push_back(detail::plane(0.5 * std::cos(a), 0.5 * std::sin(a)));
  }
  for (int k = 0; k < m; ++k) {
    const double a = std::numbers::pi * (2 * k + 1) / m;
    g.arc_centers.push_back(detail::far_center(g.vertices[static_cast<std::size_t>(k)],
                                               g.vertices[static_cast<std::size_t>((k + 1) % m)],
                                               detail::plane(std::cos(a), std::sin(a))));
  }
  g.dropped = ((dropped % m) + m) % m;
  g.big_center = detail::far_center(g.vertices[static_cast<std::size_t>((g.dropped + m - 1) % m)],
                                    g.vertices[static_cast<std::size_t>((g.dropped + 1) % m)],
                                    g.vertices[static_cast<std::size_t>(g.dropped)]);
  g.d_min = cone_d_min(m);
  return g;
}

/// The cone family: unit-disk base, apex at height `apex_height`, X the
/// regular m-gon of radius 1/2 in the base plane, p on the axis at height
/// apex_height * d_min. Every vertex is needed.
inline WitnessInstance witness_cone(int m, double apex_height = 1.0, const ToleranceConfig& tol = {}) {
  if (m < 4) throw GeometryError("cone witness needs at least 4 points");
  if (!(apex_height > 0)) throw GeometryError("apex height must be positive");
  WitnessInstance w;
  const ConeBody cone{Vec::Zero(3), 1.0, apex_height};
  w.gauge = cone;
  const ConeBaseGeometry g = cone_base_geometry(m);
  for (const Vec& v : g.vertices) w.points.push_back(make_vec({v(0), v(1), 0.0}));
  w.test_point = make_vec({0.0, 0.0, apex_height * g.d_min});
  w.expected_min_subset = m;
  w.parameters = {{"m", static_cast<double>(m)}, {"apex_height", apex_height}, {"d_min", g.d_min}};

  for (int j = 0; j < m; ++j) {
    std::vector<int> subset;
    for (int k = 0; k < m; ++k)
      if (k != j) subset.push_back(k);
    const PointList rest = select(w.points, subset);
    // Cone over the unit disk through the two neighbours of x_j, pushed to
    // the far side; its generatrix facing the axis cuts below p.
    const Vec c = cone_base_geometry(m, j).big_center;
    CoverWitness cw;
    cw.t = make_vec({c(0), c(1), 0.0});
    const Vec e = -c.normalized();
    cw.u = make_vec({e(0), e(1), 1.0 / apex_height}).normalized();
    cw.margin = cw.u.dot(w.test_point - cw.t) - support(w.gauge, cw.u);
    if (!(cw.margin > tol.eps_margin) || !revalidate(w.gauge, rest, w.test_point, cw, tol)) {
      auto found = cover_avoiding_escalated(w.gauge, rest, w.test_point, tol);
      if (!found) throw ConsistencyError("no separating translate for a dropped vertex");
      cw = *found;
    }
    w.certificates.emplace_back(std::move(subset), std::move(cw));
  }
  return w;
}

}  // namespace strongconv
