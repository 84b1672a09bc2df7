#pragma once

// Small subsets of X whose strong hull still contains p: exhaustive minimal
// subsets, the reduction for product gauges, and the two-subhull property.

#include <strongconv/strong_set.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace strongconv {

/// A subset of X whose strong hull contains p.
struct SubsetCertificate {
  std::vector<int> indices;
  std::vector<std::string> roles;  // one per index
  double margin = 0.0;             // separation value of p against the subset hull (<= eps_margin)
  bool minimal = false;            // every smaller subset was refuted
  /// Refuted smaller subsets with their separating translates.
  std::vector<std::pair<std::vector<int>, CoverWitness>> excluded;
};

namespace detail {

inline bool witness_covers(const Body& gauge, const PointList& points, const std::vector<int>& idx,
                           const CoverWitness& w, const ToleranceConfig& tol) {
  for (int i : idx)
    if (!contains(gauge, points[static_cast<std::size_t>(i)] - w.t, tol)) return false;
  return true;
}

inline void require_member(const Body& gauge, const PointList& points, const Vec& p, const ToleranceConfig& tol) {
  if (!hull_member_fast(gauge, points, p, tol).member)
    throw NotMemberError();
}

}  // namespace detail

/// Smallest subset (lexicographically first among equal sizes) whose strong
/// hull contains p. Witnesses found for refuted subsets are reused for later
/// subsets they also cover.
inline SubsetCertificate minimal_subset(const Body& gauge, const PointList& points, const Vec& p,
                                        const ToleranceConfig& tol = {}) {
  detail::require_member(gauge, points, p, tol);
  const int count = static_cast<int>(points.size());
  SubsetCertificate cert;
  std::vector<CoverWitness> cache;
  for (int k = 1; k <= count; ++k) {
    bool found = false;
    for_each_subset(count, k, [&](const std::vector<int>& idx) {
      for (const CoverWitness& w : cache) {
        if (detail::witness_covers(gauge, points, idx, w, tol)) {
          cert.excluded.emplace_back(idx, w);
          return true;
        }
      }
      MemberResult r = hull_member_fast(gauge, select(points, idx), p, tol);
      if (r.member) {
        cert.indices = idx;
        cert.margin = r.margin;
        found = true;
        return false;
      }
      cache.push_back(*r.witness);
      cert.excluded.emplace_back(idx, *r.witness);
      return true;
    });
    if (found) break;
  }
  cert.roles.assign(cert.indices.size(), "hull");
  cert.minimal = true;
  return cert;
}

namespace detail {

// Some member of `pool` whose swap for `extra` keeps p in the hull:
// p in conv_G(pool + extra - z). Returns the index of z in `points`.
inline int swap_partner(const Body& gauge, const PointList& points, const std::vector<int>& pool, int extra,
                        const Vec& p, const ToleranceConfig& tol) {
  for (int z : pool) {
    std::vector<int> idx;
    for (int q : pool)
      if (q != z) idx.push_back(q);
    idx.push_back(extra);
    if (hull_member_fast(gauge, select(points, idx), p, tol).member) return z;
  }
  throw ConsistencyError("no exchangeable point: the factor gauge does not behave as a generating set");
}

inline std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

inline std::vector<int> without(std::vector<int> a, std::initializer_list<int> drop) {
  a.erase(std::remove_if(a.begin(), a.end(),
                         [&](int i) { return std::find(drop.begin(), drop.end(), i) != drop.end(); }),
          a.end());
  return a;
}

}  // namespace detail

namespace detail {

inline SubsetCertificate product_certificate(const Body& gauge, const PointList& points, const Vec& p,
                                             std::vector<int> chosen, const std::vector<int>& ys,
                                             const std::vector<int>& zs, const ToleranceConfig& tol) {
  std::sort(chosen.begin(), chosen.end());
  MemberResult r = hull_member_fast(gauge, select(points, chosen), p, tol);
  if (!r.member) throw ConsistencyError("reduced subset lost the point");
  SubsetCertificate cert;
  cert.indices = chosen;
  cert.margin = r.margin;
  for (int i : chosen) {
    const bool in_y = std::find(ys.begin(), ys.end(), i) != ys.end();
    const bool in_z = std::find(zs.begin(), zs.end(), i) != zs.end();
    cert.roles.push_back(in_y && in_z ? "both" : in_y ? "first" : in_z ? "second" : "pair");
  }
  return cert;
}

}  // namespace detail

/// The reduction step for K = L x M, starting from index sets Y and Z whose
/// projected hulls contain the projections of p (|Y| <= dim L + 1,
/// |Z| <= dim M + 1). Drops points through the exchange maps until at most
/// dim L + dim M remain.
inline SubsetCertificate product_reduce_from(const Body& l, const Body& m, const PointList& points, const Vec& p,
                                             std::vector<int> ys, std::vector<int> zs,
                                             const ToleranceConfig& tol = {}) {
  const int dl = l.dim(), dm = m.dim(), n = dl + dm;
  const std::vector<int> dims = {dl, dm};
  const PointList px = block_of(points, dims, 0), qx = block_of(points, dims, 1);
  const Vec pp = p.head(dl), qp = p.tail(dm);
  std::sort(ys.begin(), ys.end());
  std::sort(zs.begin(), zs.end());
  if (static_cast<int>(ys.size()) > dl + 1 || static_cast<int>(zs.size()) > dm + 1)
    throw GeometryError("factor subsets too large");

  std::vector<int> u = detail::sorted_union(ys, zs);
  std::vector<int> chosen;
  const int size = static_cast<int>(u.size());
  if (size <= n) {
    chosen = u;
  } else if (size == n + 2) {
    // Disjoint Y, Z: exchange maps f : Y -> Z and g : Z -> Y, then drop
    // f(y*) and g(z*) for a pair y*, z* joined by neither map.
    std::vector<int> f, g;
    for (int y : ys) f.push_back(detail::swap_partner(m, qx, zs, y, qp, tol));
    for (int z : zs) g.push_back(detail::swap_partner(l, px, ys, z, pp, tol));
    for (std::size_t a = 0; a < ys.size() && chosen.empty(); ++a) {
      for (std::size_t b = 0; b < zs.size(); ++b) {
        if (f[a] == zs[b] || g[b] == ys[a]) continue;
        chosen = detail::without(u, {f[a], g[b]});
        break;
      }
    }
    if (chosen.empty()) throw ConsistencyError("exchange graph is complete");
  } else {
    // One point too many.
    std::vector<int> shared;
    std::set_intersection(ys.begin(), ys.end(), zs.begin(), zs.end(), std::back_inserter(shared));
    if (static_cast<int>(ys.size()) <= dl) {
      chosen = detail::without(u, {detail::swap_partner(m, qx, zs, ys.front(), qp, tol)});
    } else if (static_cast<int>(zs.size()) <= dm) {
      chosen = detail::without(u, {detail::swap_partner(l, px, ys, zs.front(), pp, tol)});
    } else {
      const int w = shared.front();
      const int y = *std::find_if(ys.begin(), ys.end(), [&](int i) { return i != w; });
      const int z = *std::find_if(zs.begin(), zs.end(), [&](int i) { return i != w; });
      const int fy = detail::swap_partner(m, qx, zs, y, qp, tol);
      const int gz = detail::swap_partner(l, px, ys, z, pp, tol);
      if (fy != w)
        chosen = detail::without(u, {fy});
      else if (gz != w)
        chosen = detail::without(u, {gz});
      else
        chosen = detail::without(u, {w});
    }
  }
  return detail::product_certificate(ProductBody{{l, m}}, points, p, std::move(chosen), ys, zs, tol);
}

/// For K = L x M and p in conv_K X, a subset of at most dim L + dim M points
/// whose hull still contains p, built factor by factor.
inline SubsetCertificate product_reduce(const Body& l, const Body& m, const PointList& points, const Vec& p,
                                        const ToleranceConfig& tol = {}) {
  const Body gauge = ProductBody{{l, m}};
  const int dl = l.dim(), dm = m.dim(), n = dl + dm;
  const std::vector<int> dims = {dl, dm};
  detail::require_member(gauge, points, p, tol);
  const int count = static_cast<int>(points.size());

  if (count <= n) {
    std::vector<int> all(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) all[static_cast<std::size_t>(i)] = i;
    return detail::product_certificate(gauge, points, p, all, {}, {}, tol);
  }
  if (dl == 1 && dm == 1) {
    // Square gauge: two points in opposite closed quadrants around p.
    for (int i = 0; i < count; ++i) {
      for (int j = i + 1; j < count; ++j) {
        const Vec a = points[static_cast<std::size_t>(i)] - p, b = points[static_cast<std::size_t>(j)] - p;
        if (a(0) * b(0) <= tol.eps_feas && a(1) * b(1) <= tol.eps_feas)
          return detail::product_certificate(gauge, points, p, {i, j}, {}, {}, tol);
      }
    }
    throw ConsistencyError("no opposite-quadrant pair");
  }
  auto ys = minimal_subset(l, block_of(points, dims, 0), p.head(dl), tol).indices;
  auto zs = minimal_subset(m, block_of(points, dims, 1), p.tail(dm), tol).indices;
  return product_reduce_from(l, m, points, p, std::move(ys), std::move(zs), tol);
}

/// For |X| = n + 2: the first two (n+1)-subsets whose strong hulls contain p.
inline std::pair<std::vector<int>, std::vector<int>> two_subhulls(const Body& gauge, const PointList& points,
                                                                  const Vec& p, const ToleranceConfig& tol = {}) {
  const int n = gauge.dim();
  if (static_cast<int>(points.size()) != n + 2) throw GeometryError("two_subhulls needs exactly n + 2 points");
  std::vector<std::vector<int>> hits;
  for_each_subset(n + 2, n + 1, [&](const std::vector<int>& idx) {
    if (hull_member_fast(gauge, select(points, idx), p, tol).member) hits.push_back(idx);
    return hits.size() < 2;
  });
  if (hits.size() < 2) throw ConsistencyError("fewer than two subsets keep the point");
  return {hits[0], hits[1]};
}

}  // namespace strongconv
