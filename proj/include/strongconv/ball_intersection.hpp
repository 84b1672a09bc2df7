#pragma once

// Exact extremal queries on an intersection of finitely many Euclidean balls.
//
// A maximizer of a linear function, or of the distance to a fixed point, over
// the intersection lies on the common boundary of some affinely independent
// set S of at most n balls, and there it is the unique maximizer over the
// sphere where those boundaries meet (both candidates when that sphere is
// 0-dimensional). Enumerating those spheres once and filtering candidates by
// feasibility gives exact answers in any dimension.

#include <strongconv/core.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace strongconv {

class BallIntersection {
 public:
  struct Sphere {
    std::vector<int> members;
    Vec center;
    double radius = 0.0;
    Mat complement;  // orthonormal basis of the directions normal to aff(members)
  };

  BallIntersection() = default;
  BallIntersection(PointList centers, std::vector<double> radii)
      : centers_(std::move(centers)), radii_(std::move(radii)) {
    if (centers_.empty()) throw GeometryError("ball intersection needs at least one ball");
    if (centers_.size() != radii_.size()) throw DimensionError("centers/radii size mismatch");
    n_ = static_cast<int>(centers_.front().size());
    scale_ = 1.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      if (centers_[i].size() != n_) throw DimensionError();
      scale_ = std::max({scale_, centers_[i].cwiseAbs().maxCoeff(), radii_[i]});
    }
    tol_ = 1e-9 * scale_;
    build_spheres();
    empty_ = !best_linear(unit_vec(n_, 0)).has_value();
  }

  static BallIntersection equal_radius(PointList centers, double radius) {
    std::vector<double> r(centers.size(), radius);
    return BallIntersection(std::move(centers), std::move(r));
  }

  int dim() const { return n_; }
  bool empty() const { return empty_; }
  const PointList& centers() const { return centers_; }
  const std::vector<double>& radii() const { return radii_; }
  double tolerance() const { return tol_; }

  bool contains(const Vec& z, double eps) const {
    for (std::size_t i = 0; i < centers_.size(); ++i)
      if ((z - centers_[i]).norm() > radii_[i] + eps) return false;
    return true;
  }

  /// Maximizer of w.z; throws EmptyError on an empty intersection.
  Vec argmax(const Vec& w) const {
    auto r = best_linear(w);
    if (!r) throw EmptyError();
    return *r;
  }
  double support(const Vec& w) const { return w.dot(argmax(w)); }

  /// Point of the intersection farthest from `q`, with its distance.
  std::pair<double, Vec> farthest(const Vec& q) const {
    std::optional<Vec> best;
    double best_d = -1.0;
    for (const Sphere& s : spheres_) {
      Vec dir = s.complement * (s.complement.transpose() * (s.center - q));
      consider(s, dir, [&](const Vec& z) {
        const double d = (z - q).norm();
        if (d > best_d) {
          best_d = d;
          best = z;
        }
      });
    }
    if (!best) throw EmptyError();
    return {best_d, *best};
  }

  /// Corners of a planar intersection (pairwise boundary crossings that lie
  /// in every disk), deduplicated.
  PointList vertices_2d() const {
    if (n_ != 2) throw DimensionError("vertices_2d needs planar disks");
    PointList out;
    for (const Sphere& s : spheres_) {
      if (s.members.size() != 2) continue;
      for (double sign : {1.0, -1.0}) {
        Vec z = s.center + sign * s.radius * s.complement.col(0);
        if (!contains(z, tol_)) continue;
        bool dup = false;
        for (const Vec& v : out) dup = dup || (v - z).norm() <= 1e-9 * scale_;
        if (!dup) out.push_back(z);
      }
    }
    return out;
  }

 private:
  template <class Fn>
  void consider(const Sphere& s, const Vec& dir, Fn&& fn) const {
    const double nd = dir.norm();
    const bool zero_sphere = s.complement.cols() == 1;
    Vec u = nd > 1e-14 * scale_ ? Vec(dir / nd) : Vec(s.complement.col(0));
    for (double sign : {1.0, -1.0}) {
      if (sign < 0 && !zero_sphere && nd > 1e-14 * scale_) break;
      Vec z = s.center + sign * s.radius * u;
      if (contains(z, tol_)) fn(z);
    }
  }

  std::optional<Vec> best_linear(const Vec& w) const {
    std::optional<Vec> best;
    double best_v = -std::numeric_limits<double>::infinity();
    for (const Sphere& s : spheres_) {
      Vec dir = s.complement * (s.complement.transpose() * w);
      consider(s, dir, [&](const Vec& z) {
        const double v = w.dot(z);
        if (v > best_v) {
          best_v = v;
          best = z;
        }
      });
    }
    return best;
  }

  void build_spheres() {
    const int count = static_cast<int>(centers_.size());
    for (int k = 1; k <= std::min(n_, count); ++k) {
      for_each_subset(count, k, [&](const std::vector<int>& idx) {
        if (auto s = make_sphere(idx)) spheres_.push_back(std::move(*s));
        return true;
      });
    }
  }

  std::optional<Sphere> make_sphere(const std::vector<int>& idx) const {
    const int k = static_cast<int>(idx.size());
    const Vec& c0 = centers_[static_cast<std::size_t>(idx[0])];
    const double r0 = radii_[static_cast<std::size_t>(idx[0])];
    Sphere s;
    s.members = idx;
    if (k == 1) {
      s.center = c0;
      s.radius = r0;
      s.complement = Mat::Identity(n_, n_);
      return s;
    }
    Mat D(n_, k - 1);
    Vec rhs(k - 1);
    for (int j = 1; j < k; ++j) {
      const Vec& cj = centers_[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      const double rj = radii_[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      D.col(j - 1) = cj - c0;
      // (cj - c0).(z - c0) = (|cj - c0|^2 - rj^2 + r0^2) / 2
      rhs(j - 1) = 0.5 * ((cj - c0).squaredNorm() - rj * rj + r0 * r0);
    }
    Eigen::HouseholderQR<Mat> qr(D);
    const Mat R = qr.matrixQR().topLeftCorner(k - 1, k - 1).triangularView<Eigen::Upper>();
    for (int j = 0; j < k - 1; ++j)
      if (std::abs(R(j, j)) <= 1e-10 * scale_) return std::nullopt;
    const Mat gram = D.transpose() * D;
    const Vec alpha = gram.ldlt().solve(rhs);
    s.center = c0 + D * alpha;
    const double rho2 = r0 * r0 - (s.center - c0).squaredNorm();
    if (rho2 < -1e-9 * scale_ * scale_) return std::nullopt;
    s.radius = std::sqrt(std::max(0.0, rho2));
    const Mat Q = qr.householderQ();
    s.complement = Q.rightCols(n_ - (k - 1));
    return s;
  }

  PointList centers_;
  std::vector<double> radii_;
  std::vector<Sphere> spheres_;
  int n_ = 0;
  double scale_ = 1.0;
  double tol_ = 1e-9;
  bool empty_ = true;
};

}  // namespace strongconv
