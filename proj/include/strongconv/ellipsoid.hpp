#pragma once

// Maximal-volume ellipsoid inscribed in an H-polytope.
//
// Maximizes log det B over {d + B s : |s| <= 1} subject to
// |B a_i| <= b_i - a_i.d, with a log barrier on each second-order cone
// constraint and damped Newton steps.

#include <strongconv/body.hpp>
#include <strongconv/lp.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>
#include <vector>

namespace strongconv {

/// {center + shape * s : |s| <= 1}, shape symmetric positive definite.
struct Ellipsoid {
  Vec center;
  Mat shape;

  int dim() const { return static_cast<int>(center.size()); }
  double support(const Vec& u) const { return u.dot(center) + (shape * u).norm(); }
  Vec support_point(const Vec& u) const {
    const Vec bu = shape * u;
    return center + shape * bu / bu.norm();
  }
  bool contains(const Vec& x, double eps = 1e-9) const {
    return shape.ldlt().solve(x - center).norm() <= 1.0 + eps;
  }
};

struct InscribedEllipsoid {
  Ellipsoid ellipsoid;
  std::vector<int> active;  // facets touched within the activity tolerance
  PointList tangency;       // touching point on each active facet
  double max_violation = 0.0;
  int newton_steps = 0;
};

namespace detail {

class EllipsoidBarrier {
 public:
  EllipsoidBarrier(const Mat& A, const Vec& b) : A_(A), b_(b), n_(static_cast<int>(A.cols())) {
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) pairs_.emplace_back(i, j);
    nb_ = static_cast<int>(pairs_.size());
  }

  int size() const { return nb_ + n_; }

  Mat shape(const Vec& x) const {
    Mat B(n_, n_);
    for (int k = 0; k < nb_; ++k) {
      B(pairs_[k].first, pairs_[k].second) = x(k);
      B(pairs_[k].second, pairs_[k].first) = x(k);
    }
    return B;
  }
  Vec center(const Vec& x) const { return x.tail(n_); }

  Vec pack(const Mat& B, const Vec& d) const {
    Vec x(size());
    for (int k = 0; k < nb_; ++k) x(k) = B(pairs_[k].first, pairs_[k].second);
    x.tail(n_) = d;
    return x;
  }

  bool feasible(const Vec& x) const {
    const Mat B = shape(x);
    Eigen::LLT<Mat> llt(B);
    if (llt.info() != Eigen::Success) return false;
    const Vec d = center(x);
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      const double s = b_(i) - A_.row(i).dot(d);
      if (!(s > 0) || !(s * s - (B * A_.row(i).transpose()).squaredNorm() > 0)) return false;
    }
    return true;
  }

  // t * (-log det B) - sum log(s_i^2 - |B a_i|^2)
  double value(const Vec& x, double t) const {
    const Mat B = shape(x);
    Eigen::LLT<Mat> llt(B);
    double logdet = 0.0;
    for (int i = 0; i < n_; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    const Vec d = center(x);
    double f = -t * logdet;
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      const double s = b_(i) - A_.row(i).dot(d);
      f -= std::log(s * s - (B * A_.row(i).transpose()).squaredNorm());
    }
    return f;
  }

  void derivatives(const Vec& x, double t, Vec& g, Mat& H) const {
    const int N = size();
    const Mat B = shape(x);
    const Mat Binv = B.inverse();
    const Vec d = center(x);
    g = Vec::Zero(N);
    H = Mat::Zero(N, N);
    // -t log det B.
    std::vector<Mat> BE(static_cast<std::size_t>(nb_));
    for (int k = 0; k < nb_; ++k) BE[static_cast<std::size_t>(k)] = Binv * basis(k);
    for (int k = 0; k < nb_; ++k) {
      g(k) -= t * BE[static_cast<std::size_t>(k)].trace();
      for (int l = k; l < nb_; ++l) {
        const double h = t * (BE[static_cast<std::size_t>(k)] * BE[static_cast<std::size_t>(l)]).trace();
        H(k, l) += h;
        if (l != k) H(l, k) += h;
      }
    }
    // Cone barriers; s and v = B a are affine in x.
    Mat Jv(n_, N);
    Vec Js(N);
    for (Eigen::Index i = 0; i < A_.rows(); ++i) {
      const Vec a = A_.row(i).transpose();
      const double s = b_(i) - a.dot(d);
      const Vec v = B * a;
      Jv.setZero();
      Js.setZero();
      for (int k = 0; k < nb_; ++k) Jv.col(k) = basis(k) * a;
      Js.tail(n_) = -a;
      const double q = s * s - v.squaredNorm();
      const Vec dq = 2.0 * s * Js - 2.0 * Jv.transpose() * v;
      const Mat d2q = 2.0 * Js * Js.transpose() - 2.0 * Jv.transpose() * Jv;
      g -= dq / q;
      H += dq * dq.transpose() / (q * q) - d2q / q;
    }
  }

 private:
  Mat basis(int k) const {
    Mat E = Mat::Zero(n_, n_);
    E(pairs_[k].first, pairs_[k].second) = 1.0;
    E(pairs_[k].second, pairs_[k].first) = 1.0;
    return E;
  }

  Mat A_;
  Vec b_;
  int n_;
  int nb_ = 0;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace detail

/// Maximal-volume inscribed ellipsoid of a bounded polytope with interior.
inline InscribedEllipsoid inscribed_ellipsoid(const HPolytope& k, double activity_tol = 1e-5) {
  const int n = k.dim();
  const Mat& A0 = k.normals();
  // Row-normalize so residuals are distances.
  Vec norms = A0.rowwise().norm();
  const Mat A = norms.asDiagonal().inverse() * A0;
  const Vec b = norms.asDiagonal().inverse() * k.offsets();

  // Chebyshev centre as the starting point: max r s.t. a_i.d + r <= b_i.
  Mat Ac(A.rows(), n + 1);
  Ac << A, Vec::Ones(A.rows());
  Vec c = Vec::Zero(n + 1);
  c(n) = 1.0;
  LpResult cheb = lp_max(c, Ac, b);
  if (cheb.status != LpStatus::optimal) throw UnboundedError();
  const double r = cheb.argmax(n);
  if (!(r > 0)) throw GeometryError("polytope has empty interior");

  detail::EllipsoidBarrier bar(A, b);
  Vec x = bar.pack(0.5 * r * Mat::Identity(n, n), cheb.argmax.head(n));
  const double m = static_cast<double>(A.rows());
  int steps = 0;
  double t = 1.0;
  Vec g;
  Mat H;
  while (2.0 * m / t > 1e-10) {
    double dec2 = 0.0;
    for (int it = 0; it < 100; ++it) {
      bar.derivatives(x, t, g, H);
      const Vec dx = -H.ldlt().solve(g);
      dec2 = -g.dot(dx);
      ++steps;
      if (dec2 < 1e-10) break;
      double alpha = 1.0;
      const double f0 = bar.value(x, t);
      bool moved = false;
      while (alpha > 1e-12 && !moved) {
        Vec y = x + alpha * dx;
        if (bar.feasible(y) && bar.value(y, t) <= f0 - 0.25 * alpha * dec2) {
          x = y;
          moved = true;
        }
        alpha *= 0.5;
      }
      if (!moved) break;  // roundoff floor
    }
    if (dec2 > 1e-4) {
      std::ostringstream msg;
      msg << "inscribed ellipsoid: Newton stalled at t = " << t << ", decrement " << dec2;
      throw ConvergenceError(msg.str());
    }
    t *= 8.0;
  }

  InscribedEllipsoid out;
  out.ellipsoid = Ellipsoid{bar.center(x), bar.shape(x)};
  out.newton_steps = steps;
  const Mat& B = out.ellipsoid.shape;
  const Vec& d = out.ellipsoid.center;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const Vec a = A.row(i).transpose();
    const double slack = b(i) - a.dot(d) - (B * a).norm();
    out.max_violation = std::max(out.max_violation, -slack);
    if (slack <= activity_tol) {
      out.active.push_back(static_cast<int>(i));
      out.tangency.push_back(out.ellipsoid.support_point(a));
    }
  }
  if (out.max_violation > 1e-7) {
    std::ostringstream msg;
    msg << "inscribed ellipsoid violates a facet by " << out.max_violation;
    throw ConvergenceError(msg.str());
  }
  return out;
}

}  // namespace strongconv
