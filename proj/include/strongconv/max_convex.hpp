#pragma once

// Search for a translate K + t that covers X yet leaves p outside.
//
// For a unit direction u the best translate is the one minimizing u.t over
// T, and the separation it achieves is
//
//     value(u) = u.(p - t*(u)) - h_K(u),
//
// which is positive exactly when the hyperplane with normal u separates p
// from K + t*. The search scans a direction grid (plus the facet normals of
// polytopal gauges, where the sign of the optimum is attained), then
// hill-climbs from the best grid direction.

#include <strongconv/translate_set.hpp>

#include <limits>

namespace strongconv {

struct MaxConvexResult {
  Vec best_t;
  Vec best_u;
  double value = -std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

namespace detail {

inline void collect_facet_normals(const Body& gauge, PointList& out, int offset, int n) {
  if (gauge.is<HPolytope>()) {
    const auto& k = gauge.as<HPolytope>();
    for (int i = 0; i < k.facet_count(); ++i) {
      Vec u = Vec::Zero(n);
      u.segment(offset, k.dim()) = k.normal(i).normalized();
      out.push_back(u);
    }
  } else if (gauge.is<ProductBody>()) {
    for (const Body& f : gauge.as<ProductBody>().factors) {
      collect_facet_normals(f, out, offset, n);
      offset += f.dim();
    }
  }
}

}  // namespace detail

inline MaxConvexResult max_convex_search(const Body& gauge, const TranslateSet& translates, const Vec& p,
                                         const ToleranceConfig& tol = {}) {
  if (translates.empty()) throw NoCoveringTranslateError();
  const int n = gauge.dim();
  if (p.size() != n || translates.dim() != n) throw DimensionError();

  MaxConvexResult res;
  auto evaluate = [&](const Vec& u) {
    ++res.evaluations;
    const Vec t = translates.argmax(-u);
    const double v = u.dot(p - t) - support(gauge, u);
    if (v > res.value || (v == res.value && lex_less(u, res.best_u))) {
      res.value = v;
      res.best_u = u;
      res.best_t = t;
      return true;
    }
    return false;
  };

  PointList probes = direction_grid(n, tol.direction_grid_size);
  detail::collect_facet_normals(gauge, probes, 0, n);
  for (const Vec& u : probes) evaluate(u);

  double step = grid_spacing(n, tol.direction_grid_size);
  for (int it = 0; it < tol.refine_iters; ++it) {
    bool improved = false;
    const Vec base = res.best_u;
    for (int i = 0; i < n; ++i) {
      for (double s : {step, -step}) {
        Vec u = base;
        u(i) += s;
        const double nu = u.norm();
        if (!(nu > 0)) continue;
        improved = evaluate(u / nu) || improved;
      }
    }
    if (!improved) step *= 0.5;
  }
  return res;
}

}  // namespace strongconv
