#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace strongconv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using PointList = std::vector<Vec>;

/// Numerical knobs shared by every query.
///
/// `eps_feas` is the slack granted to closed-set membership tests, while
/// `eps_margin` is the gap a separation must exceed before it counts as a
/// genuine exclusion. The grid size and refinement rounds drive the direction
/// search used where no closed form exists.
struct ToleranceConfig {
  double eps_feas = 1e-9;
  double eps_margin = 1e-6;
  int direction_grid_size = 2000;
  int refine_iters = 50;

  void validate() const {
    if (!(eps_feas > 0) || !(eps_margin > 0) || direction_grid_size <= 0 ||
        refine_iters <= 0)
      throw std::invalid_argument("tolerances must be positive");
    if (!(eps_feas < eps_margin))
      throw std::invalid_argument("eps_feas must be smaller than eps_margin");
  }

  ToleranceConfig scaled_grid(int factor) const {
    ToleranceConfig t = *this;
    t.direction_grid_size *= factor;
    return t;
  }
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedError : public GeometryError {
 public:
  UnboundedError() : GeometryError("unbounded") {}
};

class EmptyError : public GeometryError {
 public:
  EmptyError() : GeometryError("empty") {}
};

class SingularMapError : public GeometryError {
 public:
  SingularMapError() : GeometryError("singular linear map") {}
};

class DimensionError : public GeometryError {
 public:
  explicit DimensionError(const std::string& what = "dimension mismatch")
      : GeometryError(what) {}
};

/// Raised when a point set fits in no translate of the gauge.
class HullUndefinedError : public GeometryError {
 public:
  HullUndefinedError() : GeometryError("hull undefined") {}
};

class NoCoveringTranslateError : public GeometryError {
 public:
  NoCoveringTranslateError() : GeometryError("no covering translate") {}
};

/// The designated point lies outside the strong hull.
class NotMemberError : public GeometryError {
 public:
  NotMemberError() : GeometryError("point is not in the strong hull of the given set") {}
};

class ConvergenceError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A guarantee of the underlying theory was observed to fail.
class ConsistencyError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Vec unit_vec(int n, int i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

/// Lexicographic order on equal-length vectors.
inline bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

inline PointList select(const PointList& pts, const std::vector<int>& idx) {
  PointList out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(pts[static_cast<std::size_t>(i)]);
  return out;
}

/// Calls `fn(indices)` for every size-k subset of {0..n-1} in lexicographic
/// order. Stops early when `fn` returns false.
template <class Fn>
bool for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace strongconv
