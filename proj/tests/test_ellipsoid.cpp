#include <strongconv/ellipsoid.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace strongconv;
using namespace strongconv::testing;

namespace {

double log_det(const Mat& B) { return std::log(B.determinant()); }

double worst_slack(const HPolytope& k, const Mat& B, const Vec& d) {
  double worst = 1e300;
  for (int i = 0; i < k.facet_count(); ++i) {
    const Vec a = k.normal(i);
    worst = std::min(worst, (k.offsets()(i) - a.dot(d) - (B * a).norm()) / a.norm());
  }
  return worst;
}

HPolytope random_polytope(Rng& rng, int n, int extra) {
  Mat A(2 * n + extra, n);
  Vec b(2 * n + extra);
  for (int i = 0; i < n; ++i) {
    A.row(2 * i) = unit_vec(n, i).transpose();
    A.row(2 * i + 1) = -unit_vec(n, i).transpose();
    b(2 * i) = uniform(rng, 0.8, 1.5);
    b(2 * i + 1) = uniform(rng, 0.8, 1.5);
  }
  for (int i = 0; i < extra; ++i) {
    A.row(2 * n + i) = random_unit(rng, n).transpose();
    b(2 * n + i) = uniform(rng, 0.5, 1.0);
  }
  return HPolytope(A, b);
}

}  // namespace

TEST(InscribedEllipsoid, SquareGivesUnitDisk) {
  auto r = inscribed_ellipsoid(HPolytope::cube(2, 1.0));
  EXPECT_LT((r.ellipsoid.shape - Mat::Identity(2, 2)).norm(), 1e-6);
  EXPECT_LT(r.ellipsoid.center.norm(), 1e-6);
  ASSERT_EQ(r.tangency.size(), 4u);
  for (const Vec& t : r.tangency) {
    EXPECT_NEAR(t.norm(), 1.0, 1e-6);
    EXPECT_NEAR(t.cwiseAbs().maxCoeff(), 1.0, 1e-6);
  }
}

TEST(InscribedEllipsoid, BoxGivesAxisAlignedEllipse) {
  auto r = inscribed_ellipsoid(HPolytope::box(make_vec({-2, -1}), make_vec({2, 1})));
  EXPECT_NEAR(r.ellipsoid.shape(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(r.ellipsoid.shape(1, 1), 1.0, 1e-6);
  EXPECT_NEAR(r.ellipsoid.shape(0, 1), 0.0, 1e-6);
}

TEST(InscribedEllipsoid, TriangleGivesSteinerInellipse) {
  auto tri = HPolytope::polygon({make_vec({0, 0}), make_vec({1, 0}), make_vec({0, 1})});
  auto r = inscribed_ellipsoid(tri);
  EXPECT_NEAR(r.ellipsoid.center(0), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.ellipsoid.center(1), 1.0 / 3.0, 1e-6);
  // Steiner inellipse area is pi / (3 sqrt 3) times the triangle area.
  EXPECT_NEAR(r.ellipsoid.shape.determinant(), 0.5 / (3 * std::sqrt(3.0)), 1e-7);
  EXPECT_EQ(r.active.size(), 3u);
  // It touches each side at the midpoint.
  PointList mids = {make_vec({0.5, 0}), make_vec({0, 0.5}), make_vec({0.5, 0.5})};
  for (const Vec& m : mids) {
    double best = 1e300;
    for (const Vec& t : r.tangency) best = std::min(best, (t - m).norm());
    EXPECT_LT(best, 1e-5);
  }
}

TEST(InscribedEllipsoid, FeasibleAndLocallyMaximal) {
  Rng rng(3);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 8; ++trial) {
      HPolytope k = n == 2 ? random_polygon(rng, 7) : random_polytope(rng, n, 6);
      auto r = inscribed_ellipsoid(k);
      const Mat& B = r.ellipsoid.shape;
      const Vec& d = r.ellipsoid.center;
      EXPECT_GE(worst_slack(k, B, d), -1e-7);
      const double base = log_det(B);
      const double scale = B.norm() + d.norm();
      int feasible = 0;
      for (int s = 0; s < 300; ++s) {
        Mat dB = Mat::Random(n, n);
        dB = 0.5 * (dB + dB.transpose());
        Vec dd = Vec::Random(n);
        const double len = std::sqrt(dB.squaredNorm() + dd.squaredNorm());
        const double step = 1e-3 * scale / len;
        Mat B2 = B + step * dB;
        Vec d2 = d + step * dd;
        // Shrink the shape until every facet constraint holds again.
        double shrink = 1.0;
        for (int i = 0; i < k.facet_count(); ++i) {
          const Vec a = k.normal(i);
          shrink = std::min(shrink, (k.offsets()(i) - a.dot(d2)) / (B2 * a).norm());
        }
        B2 *= shrink;
        if (Eigen::LLT<Mat>(B2).info() != Eigen::Success || worst_slack(k, B2, d2) < -1e-12) continue;
        ++feasible;
        EXPECT_LE(log_det(B2), base + 1e-9);
      }
      EXPECT_GT(feasible, 0);
      // Tangency directions span the space.
      Mat T(n, static_cast<Eigen::Index>(r.tangency.size()));
      for (std::size_t i = 0; i < r.tangency.size(); ++i)
        T.col(static_cast<Eigen::Index>(i)) = B.ldlt().solve(r.tangency[i] - d);
      EXPECT_EQ(Eigen::FullPivLU<Mat>(T).rank(), n);
    }
  }
}

TEST(InscribedEllipsoid, RejectsFlatPolytope) {
  EXPECT_THROW(inscribed_ellipsoid(HPolytope::box(make_vec({0, 0}), make_vec({1, 0}))), GeometryError);
}
