#include <strongconv/caratheodory.hpp>
#include <strongconv/witnesses.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace strongconv;
using namespace strongconv::testing;

namespace {

// a * b - num / den via error-free transformations; sign only.
int compare_product(double a, double b, double num, double den) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  const double pd = p * den;
  const double e2 = std::fma(p, den, -pd);
  const double diff = (pd - num) + e2 + err * den;
  return diff > 0 ? 1 : diff < 0 ? -1 : 0;
}

// Minimum distance from the origin to the boundary arcs of the disk hull of
// the m-gon, sampled densely on each arc.
double sampled_d_min(int m) {
  double best = 1e300;
  for (int k = 0; k < m; ++k) {
    const double a0 = 2 * std::numbers::pi * k / m, a1 = 2 * std::numbers::pi * (k + 1) / m;
    const Vec p = 0.5 * make_vec({std::cos(a0), std::sin(a0)});
    const Vec q = 0.5 * make_vec({std::cos(a1), std::sin(a1)});
    // Both unit circles through p and q; the one whose centre is nearer the
    // origin side carries the outward-bulging arc.
    const Vec mid = 0.5 * (p + q);
    const double h = std::sqrt(1.0 - 0.25 * (q - p).squaredNorm());
    const Vec dir = mid.normalized();
    const Vec c = mid - h * dir;
    const double t0 = std::atan2(p(1) - c(1), p(0) - c(0));
    double t1 = std::atan2(q(1) - c(1), q(0) - c(0));
    if (t1 < t0) t1 += 2 * std::numbers::pi;
    const int samples = 200001;
    for (int s = 0; s < samples; ++s) {
      const double t = t0 + (t1 - t0) * s / (samples - 1);
      best = std::min(best, (c + make_vec({std::cos(t), std::sin(t)})).norm());
    }
  }
  return best;
}

}  // namespace

TEST(ExactComparison, MatchesTwoProductOracle) {
  EXPECT_TRUE(detail::product_at_least(1.5, 2.0, 3, 1));
  EXPECT_FALSE(detail::product_at_least(1.5, 2.0, 301, 100));
  EXPECT_TRUE(detail::product_at_least(2.125, 1.0, 17, 8));
  EXPECT_FALSE(detail::product_at_least(std::nextafter(2.125, 0.0), 1.0, 17, 8));
  Rng rng(1);
  for (int i = 0; i < 20000; ++i) {
    const double a = uniform(rng, 0.1, 10), b = uniform(rng, 0.1, 10);
    const auto den = static_cast<std::uint64_t>(1 + rng() % 64);
    const auto num = static_cast<std::uint64_t>(std::floor(a * b * den)) + rng() % 2;
    const int sign = compare_product(a, b, static_cast<double>(num), static_cast<double>(den));
    if (sign == 0) continue;
    EXPECT_EQ(detail::product_at_least(a, b, num, den), sign > 0);
  }
}

TEST(RequiredRadius, IsTheSmallestDoubleAboveTheBound) {
  for (int n = 2; n <= 6; ++n) {
    const double r = required_radius(n);
    const auto num = static_cast<std::uint64_t>(4 * n * n + 1), den = static_cast<std::uint64_t>(4 * n);
    EXPECT_GE(compare_product(r, 1.0, static_cast<double>(num), static_cast<double>(den)), 0);
    EXPECT_LT(compare_product(std::nextafter(r, 0.0), 1.0, static_cast<double>(num), static_cast<double>(den)), 0);
  }
  EXPECT_EQ(required_radius(2), 2.125);
}

TEST(WitnessAtLeastN, CubeInstanceMatchesHandValues) {
  auto w = witness_at_least_n(HPolytope::cube(3, 1.0));
  const double c = 3.0 + 1.0 / 12.0;
  for (const Vec& u : direction_grid(3, 50)) EXPECT_NEAR(support(w.gauge, u), c * u.cwiseAbs().sum(), 1e-9);
  EXPECT_TRUE(w.test_point.isApprox(Vec::Constant(3, 1.0 / 3.0)));
  ASSERT_EQ(w.certificates.size(), 3u);
  const auto& [subset, cw] = w.certificates[0];
  EXPECT_EQ(subset, (std::vector<int>{1, 2}));
  EXPECT_NEAR(cw.t(0), 1.0 / 6.0 - c, 1e-9);
  EXPECT_NEAR(cw.t(1), 0.0, 1e-9);
  EXPECT_NEAR(cw.t(2), 0.0, 1e-9);
  // K + t = [1/6 - 2c, 1/6] x [-c, c]^2 holds e_2, e_3 and misses p.
  EXPECT_TRUE(contains(w.gauge, w.points[1] - cw.t));
  EXPECT_TRUE(contains(w.gauge, w.points[2] - cw.t));
  EXPECT_FALSE(contains(w.gauge, w.test_point - cw.t));
  for (const auto& [s, x] : w.certificates) EXPECT_GE(x.margin, 0.1);
  EXPECT_GE(w.parameter("inner_radius"), w.parameter("required_radius"));
}

TEST(WitnessAtLeastN, MinimalSubsetIsExactlyN) {
  for (int n : {2, 3}) {
    std::vector<Body> gauges = {Body(HPolytope::cube(n, 1.0)), Body(Ball{Vec::Zero(n), 1.0}),
                                Body(HPolytope::cross_polytope(n, 1.0))};
    for (const Body& k : gauges) {
      auto w = witness_at_least_n(k);
      EXPECT_TRUE(hull_member(w.gauge, w.points, w.test_point).member);
      auto c = minimal_subset(w.gauge, w.points, w.test_point);
      EXPECT_EQ(static_cast<int>(c.indices.size()), n);
      for (const auto& [subset, cw] : w.certificates) EXPECT_TRUE(revalidate(w.gauge, select(w.points, subset), w.test_point, cw));
    }
  }
}

TEST(WitnessAtLeastN, SkewedPolygons) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    HPolytope k = random_polygon(rng, 5 + trial % 4);
    auto w = witness_at_least_n(k);
    EXPECT_EQ(static_cast<int>(minimal_subset(w.gauge, w.points, w.test_point).indices.size()), 2);
    // The chosen normals became the coordinate axes: support attained with
    // outer normal e_j at the touching points.
    EXPECT_GE(w.parameter("inner_radius"), w.parameter("required_radius"));
  }
}

TEST(WitnessAtLeastN, BallExample) {
  auto w = witness_at_least_n(Ball{Vec::Zero(2), 1.0});
  ASSERT_TRUE(w.gauge.is<Ball>());
  EXPECT_EQ(w.gauge.as<Ball>().radius, 2.125);
  EXPECT_TRUE(w.test_point.isApprox(make_vec({0.5, 0.5})));
  EXPECT_EQ(minimal_subset(w.gauge, w.points, w.test_point).indices.size(), 2u);
}

TEST(WitnessAtLeastN, RejectsDimensionOne) {
  EXPECT_THROW(witness_at_least_n(segment_1d(-1, 1)), GeometryError);
}

TEST(WitnessProduct, SegmentTimesSegment) {
  Body seg = segment_1d(-1, 1);
  FactorWitness f{seg, {make_vec({-1}), make_vec({1})}, make_vec({0})};
  auto w = witness_product(f, f);
  ASSERT_EQ(w.points.size(), 3u);
  EXPECT_TRUE(w.points[0].isApprox(make_vec({-1, -1})));
  EXPECT_TRUE(w.points[1].isApprox(make_vec({1, -1})));
  EXPECT_TRUE(w.points[2].isApprox(make_vec({-1, 1})));
  EXPECT_TRUE(w.test_point.isZero());
  EXPECT_EQ(w.expected_min_subset, 2);
  // No single point's box hull contains p.
  for (const Vec& x : w.points) EXPECT_FALSE(hull_member(w.gauge, {x}, w.test_point).member);
  EXPECT_GE(static_cast<int>(minimal_subset(w.gauge, w.points, w.test_point).indices.size()), 2);
  for (const auto& [subset, cw] : w.certificates) EXPECT_TRUE(revalidate(w.gauge, select(w.points, subset), w.test_point, cw));
}

TEST(WitnessProduct, SquareFactors) {
  Body sq = HPolytope::cube(2, 1.0);
  FactorWitness fs{sq, {make_vec({-0.5, -0.5}), make_vec({0.5, 0.5})}, make_vec({0, 0})};
  FactorWitness fseg{segment_1d(-1, 1), {make_vec({-1}), make_vec({1})}, make_vec({0})};
  for (const auto& [a, b] : {std::pair{fs, fseg}, std::pair{fs, fs}}) {
    auto w = witness_product(a, b);
    const auto c = minimal_subset(w.gauge, w.points, w.test_point);
    EXPECT_GE(static_cast<int>(c.indices.size()), w.expected_min_subset);
    EXPECT_LE(static_cast<int>(c.indices.size()), w.gauge.dim());
  }
}

TEST(WitnessProduct, DegenerateFactorsAndNonMinimalInput) {
  Body seg = segment_1d(-1, 1);
  FactorWitness single{seg, {make_vec({0.3})}, make_vec({0.3})};
  auto w = witness_product(single, single);
  EXPECT_EQ(w.expected_min_subset, 0);
  EXPECT_TRUE(hull_member(w.gauge, w.points, w.test_point).member);
  FactorWitness loose{seg, {make_vec({-1}), make_vec({0}), make_vec({1})}, make_vec({0})};
  EXPECT_THROW(witness_product(loose, single), GeometryError);
}

TEST(WitnessCone, ClosedFormDistance) {
  EXPECT_NEAR(cone_d_min(4), 0.418139, 1e-6);
  EXPECT_NEAR(1 + 0.353553 - 0.935414, 0.418139, 1e-6);
  for (int m = 4; m <= 8; ++m) EXPECT_NEAR(cone_d_min(m), sampled_d_min(m), 1e-9);
  // The disk hull approaches the circle of radius 1/2 as m grows.
  for (int m = 4; m < 8; ++m) EXPECT_LT(cone_d_min(m), cone_d_min(m + 1));
  EXPECT_LT(cone_d_min(64), 0.5);
  EXPECT_NEAR(cone_d_min(4096), 0.5, 1e-6);
}

TEST(WitnessCone, InstanceAndCertificates) {
  for (int m = 4; m <= 8; ++m) {
    auto w = witness_cone(m, 1.0);
    EXPECT_EQ(w.expected_min_subset, m);
    EXPECT_NEAR(w.test_point(2), cone_d_min(m), 1e-15);
    ASSERT_EQ(static_cast<int>(w.certificates.size()), m);
    for (const auto& [subset, cw] : w.certificates) {
      EXPECT_EQ(static_cast<int>(subset.size()), m - 1);
      EXPECT_GT(cw.margin, 1e-6);
      EXPECT_TRUE(revalidate(w.gauge, select(w.points, subset), w.test_point, cw));
      // Margin of the tilted generatrix: (|c'| + d_min - 1) / sqrt(1 + 1/h^2).
      const double cn = cw.t.head(2).norm();
      EXPECT_NEAR(cw.margin, (cn + cone_d_min(m) - 1.0) / std::sqrt(2.0), 1e-12);
    }
  }
  EXPECT_THROW(witness_cone(3), GeometryError);
}

TEST(WitnessCone, TallerApex) {
  auto w = witness_cone(5, 2.5);
  EXPECT_NEAR(w.test_point(2), 2.5 * cone_d_min(5), 1e-12);
  for (const auto& [subset, cw] : w.certificates) EXPECT_TRUE(revalidate(w.gauge, select(w.points, subset), w.test_point, cw));
}

TEST(WitnessCone, FullSetHasNoWitnessAtDefaultResolution) {
  auto w = witness_cone(4, 1.0);
  auto r = hull_member_search(w.gauge, w.points, w.test_point);
  EXPECT_TRUE(r.member);
}
