#include <strongconv/strong_set.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace strongconv;
using namespace strongconv::testing;

namespace {

Body unit_square() { return HPolytope::box(make_vec({0, 0}), make_vec({1, 1})); }
Body square02() { return HPolytope::box(make_vec({0, 0}), make_vec({2, 2})); }

PointList random_points(Rng& rng, int count, int n, double half) {
  PointList xs;
  for (int i = 0; i < count; ++i) xs.push_back(random_in_box(rng, n, -half, half));
  return xs;
}

void expect_same_support(const StrongSet& s, const Body& b, int n, double tol) {
  for (const Vec& u : direction_grid(n, 64)) EXPECT_NEAR(s.support(u), support(b, u), tol);
}

}  // namespace

TEST(Erode, ByOriginIsIdentity) {
  Rng rng(1);
  Body k = random_polygon(rng, 7);
  expect_same_support(erode(k, PointList{Vec::Zero(2)}), k, 2, 1e-12);
}

TEST(Erode, SquareBySegment) {
  auto s = erode(unit_square(), HPolytope::segment(make_vec({0, 0}), make_vec({0.5, 0})));
  expect_same_support(s, HPolytope::box(make_vec({0, 0}), make_vec({0.5, 1})), 2, 1e-12);
  ASSERT_TRUE(s.cached_hform().has_value());
  EXPECT_TRUE(s.cached_hform()->normals() == unit_square().as<HPolytope>().normals());
}

TEST(Erode, BallByBall) {
  auto s = erode(Ball{Vec::Zero(2), 2.0}, Ball{Vec::Zero(2), 1.0});
  ASSERT_EQ(s.form(), StrongForm::ball);
  EXPECT_NEAR(s.closed_ball()->radius, 1.0, 1e-15);
  EXPECT_TRUE(s.closed_ball()->center.isZero());
  EXPECT_TRUE(erode(Ball{Vec::Zero(2), 1.0}, Ball{Vec::Zero(2), 2.0}).empty());
}

TEST(Erode, PointListMatchesIntersectionOfTranslates) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Body k = Ball{Vec::Zero(2), 1.0};
    PointList xs = random_points(rng, 3, 2, 0.4);
    auto s = erode(k, xs);
    for (int i = 0; i < 200; ++i) {
      Vec y = random_in_box(rng, 2, -1, 1);
      bool inside = true;
      double slack = 1e300;
      for (const Vec& x : xs) {
        const double d = (y + x).norm() - 1.0;
        inside = inside && d <= 0;
        slack = std::min(slack, std::abs(d));
      }
      if (slack < 1e-9) continue;
      EXPECT_EQ(s.contains(y), inside);
    }
  }
}

TEST(StrongHull, SingletonCollapses) {
  Rng rng(5);
  Vec x = make_vec({0.3, -0.2});
  for (Body k : {Body(random_polygon(rng, 6)), Body(Ball{Vec::Zero(2), 1.0})}) {
    auto h = strong_hull(k, {x});
    for (const Vec& u : direction_grid(2, 32)) EXPECT_NEAR(h.support(u), u.dot(x), 1e-9);
  }
}

TEST(StrongHull, SquareGaugeGivesUnitBox) {
  auto h = strong_hull(square02(), {make_vec({0, 0}), make_vec({1, 1})});
  expect_same_support(h, unit_square(), 2, 1e-12);
}

TEST(StrongHull, UndefinedWhenPointsDoNotFit) {
  EXPECT_THROW(strong_hull(Ball{Vec::Zero(2), 0.9}, {make_vec({-1, 0}), make_vec({1, 0})}), HullUndefinedError);
  EXPECT_THROW(strong_hull(unit_square(), {make_vec({0, 0}), make_vec({2, 0})}), HullUndefinedError);
}

TEST(StrongHull, BallLens) {
  const double c = std::sqrt(0.75);
  EXPECT_NEAR(c, 0.866025, 1e-6);
  auto h = strong_hull(Ball{Vec::Zero(2), 1.0}, {make_vec({-0.5, 0}), make_vec({0.5, 0})});
  // Dense family of admissible centres: every unit disk holding both points.
  PointList centers;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      Vec t = make_vec({-0.5 + i / 400.0, -1.0 + 2.0 * j / 400.0});
      if ((t - make_vec({-0.5, 0})).norm() <= 1 && (t - make_vec({0.5, 0})).norm() <= 1) centers.push_back(t);
    }
  Rng rng(7);
  int checked = 0;
  for (int s = 0; s < 3000; ++s) {
    Vec z = random_in_box(rng, 2, -0.6, 0.6);
    const double lens = std::max((z - make_vec({0, c})).norm(), (z - make_vec({0, -c})).norm()) - 1.0;
    double sampled = -1e300;
    for (const Vec& t : centers) sampled = std::max(sampled, (z - t).norm() - 1.0);
    if (std::abs(lens) < 1e-2) continue;
    ++checked;
    EXPECT_EQ(lens <= 0, sampled <= 0);
    EXPECT_EQ(h.contains(z), lens <= 0);
  }
  EXPECT_GT(checked, 1000);
  EXPECT_NEAR(h.support(make_vec({1, 0})), 0.5, 1e-9);
  EXPECT_NEAR(h.support(make_vec({0, 1})), 1.0 - c, 1e-9);
}

TEST(StrongHull, TripleErosionIsIdempotent) {
  Rng rng(11);
  int done = 0;
  while (done < 500) {
    Body k = random_polygon(rng, 3 + static_cast<int>(rng() % 6), 1.5);
    PointList xs = random_points(rng, 2 + static_cast<int>(rng() % 4), 2, 0.5);
    auto e1 = erode(k, xs);
    if (e1.empty()) continue;
    auto e2 = erode(k, as_body(e1));
    auto e3 = erode(k, as_body(e2));
    ASSERT_FALSE(e3.empty());
    const auto& kp = k.as<HPolytope>();
    for (int i = 0; i < kp.facet_count(); ++i) {
      const Vec a = kp.normal(i);
      EXPECT_NEAR(e3.support(a), e1.support(a), 1e-7);
    }
    ++done;
  }
}

TEST(StrongHull, ContainsOrdinaryHull) {
  Rng rng(13);
  std::vector<Body> gauges = {Body(random_polygon(rng, 6, 1.5)), Body(Ball{Vec::Zero(2), 1.0}),
                              Body(Ball{Vec::Zero(3), 1.0}), Body(ConeBody{Vec::Zero(3), 1.0, 1.0})};
  ToleranceConfig tol;
  tol.direction_grid_size = 400;
  for (const Body& k : gauges) {
    const int n = k.dim();
    PointList xs = random_points(rng, 3, n, 0.25);
    if (k.is<ConeBody>())
      for (Vec& x : xs) x(2) = 0.1;
    for (int s = 0; s < 10; ++s) {
      Vec w = Vec::Zero(3);
      for (int i = 0; i < 3; ++i) w(i) = uniform(rng, 0, 1);
      w /= w.sum();
      Vec p = w(0) * xs[0] + w(1) * xs[1] + w(2) * xs[2];
      EXPECT_TRUE(hull_member_fast(k, xs, p, tol).member);
    }
  }
}

TEST(StrongHull, MonotoneInPoints) {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    Body k = trial % 2 ? Body(random_polygon(rng, 6, 1.5)) : Body(Ball{Vec::Zero(2), 1.0});
    PointList xs = random_points(rng, 2, 2, 0.3);
    PointList bigger = xs;
    bigger.push_back(random_in_box(rng, 2, -0.3, 0.3));
    if (TranslateSet(k, bigger).empty()) continue;
    auto a = strong_hull(k, xs);
    auto b = strong_hull(k, bigger);
    for (const Vec& u : direction_grid(2, 64)) EXPECT_LE(a.support(u), b.support(u) + 1e-9);
  }
}

TEST(StrongHull, ProductMatchesBlockPolytope) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    HPolytope l = random_polygon(rng, 5, 1.5);
    HPolytope m = segment_1d(-1.0, uniform(rng, 0.5, 1.5));
    Body prod = ProductBody{{Body(l), Body(m)}};
    // Same body written as one 3D polytope.
    Mat A = Mat::Zero(l.facet_count() + 2, 3);
    Vec b(l.facet_count() + 2);
    A.topLeftCorner(l.facet_count(), 2) = l.normals();
    b.head(l.facet_count()) = l.offsets();
    A.bottomRightCorner(2, 1) = m.normals();
    b.tail(2) = m.offsets();
    Body flat = HPolytope(A, b);
    PointList xs = random_points(rng, 4, 3, 0.3);
    if (TranslateSet(flat, xs).empty()) continue;
    auto hp = strong_hull(prod, xs);
    auto hf = strong_hull(flat, xs);
    ASSERT_EQ(hp.form(), StrongForm::product);
    auto hl = strong_hull(l, block_of(xs, {2, 1}, 0));
    auto hm = strong_hull(m, block_of(xs, {2, 1}, 1));
    for (int d = 0; d < 30; ++d) {
      Vec u = random_unit(rng, 3);
      EXPECT_NEAR(hp.support(u), hf.support(u), 1e-8);
      EXPECT_NEAR(hp.support(u), hl.support(u.head(2)) + hm.support(u.tail(1)), 1e-8);
    }
  }
}

TEST(StrongHull, PlanarBallHullMatchesFarthestPointRoute) {
  Rng rng(19);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Body k = Ball{make_vec({0.1, -0.2}), uniform(rng, 0.8, 1.3)};
    PointList xs = random_points(rng, 2 + trial % 4, 2, 0.5);
    if (TranslateSet(k, xs).empty()) continue;
    auto h = strong_hull(k, xs);
    for (int s = 0; s < 50; ++s) {
      Vec p = random_in_box(rng, 2, -0.7, 0.7);
      auto r = hull_member_fast(k, xs, p);
      if (std::abs(r.margin) < 1e-6) continue;
      ++checked;
      EXPECT_EQ(h.contains(p), r.member);
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(HullMember, SquareExamples) {
  Body k = square02();
  PointList xs = {make_vec({0, 0}), make_vec({1, 1})};
  auto in = hull_member(k, xs, make_vec({0.2, 0.8}));
  EXPECT_TRUE(in.member);
  EXPECT_TRUE(in.cross_checked);
  EXPECT_TRUE(in.cross_check_agrees);

  Vec p = make_vec({1.5, 0.5});
  auto out = hull_member(k, xs, p);
  ASSERT_FALSE(out.member);
  ASSERT_TRUE(out.witness.has_value());
  EXPECT_NEAR(out.witness->t(0), -1.0, 1e-9);
  EXPECT_TRUE(revalidate(k, xs, p, *out.witness));
  EXPECT_TRUE(contains(k, xs[0] - make_vec({-1, 0})) && contains(k, xs[1] - make_vec({-1, 0})));
  EXPECT_FALSE(contains(k, p - make_vec({-1, 0})));

  for (const Vec& x : xs) EXPECT_TRUE(hull_member(k, xs, x).member);
}

TEST(HullMember, UndefinedHullPropagates) {
  EXPECT_THROW(hull_member(unit_square(), {make_vec({0, 0}), make_vec({3, 0})}, make_vec({0, 0})),
               HullUndefinedError);
}

TEST(HullMember, SearchAgreesWithExplicitHullAwayFromBoundary) {
  Rng rng(23);
  int checked = 0;
  while (checked < 300) {
    Body k = random_polygon(rng, 4 + static_cast<int>(rng() % 5), 1.5);
    PointList xs = random_points(rng, 3, 2, 0.5);
    if (TranslateSet(k, xs).empty()) continue;
    auto hull = strong_hull(k, xs);
    Vec p = random_in_box(rng, 2, -0.8, 0.8);
    auto r = hull_member(k, xs, p);
    if (std::abs(r.margin) <= 1e-3) continue;
    ++checked;
    EXPECT_TRUE(r.cross_check_agrees);
    EXPECT_EQ(r.member, hull.contains(p));
    if (!r.member) {
      EXPECT_TRUE(revalidate(k, xs, p, *r.witness));
    }
  }
}

TEST(HullMember, ProductWitnessRevalidates) {
  Rng rng(29);
  Body k = ProductBody{{Body(Ball{Vec::Zero(2), 1.0}), Body(segment_1d(-1, 1))}};
  int outside = 0;
  for (int s = 0; s < 100; ++s) {
    PointList xs = random_points(rng, 3, 3, 0.4);
    Vec p = random_in_box(rng, 3, -0.9, 0.9);
    auto r = hull_member(k, xs, p);
    EXPECT_TRUE(r.cross_check_agrees || std::abs(r.margin) < 1e-3);
    if (r.member) continue;
    ++outside;
    EXPECT_TRUE(revalidate(k, xs, p, *r.witness));
  }
  EXPECT_GT(outside, 10);
}

TEST(HullMember, LowMarginFlag) {
  Body k = square02();
  PointList xs = {make_vec({0, 0}), make_vec({1, 1})};
  auto r = hull_member(k, xs, make_vec({1.0, 0.5}));
  EXPECT_TRUE(r.member);
  EXPECT_TRUE(r.low_margin);
  EXPECT_FALSE(hull_member(k, xs, make_vec({0.5, 0.5})).low_margin);
}
