#include <gtest/gtest.h>

#include "support.hpp"

using namespace latnav;
using namespace latnav::testing;

TEST(Bvc, TwoAgentHalfPlane) {
  const std::vector<Vec2> nb{{4.0, 0.0}};
  const auto cell = computeBvc({0.0, 0.0}, 1.0, nb);
  ASSERT_EQ(cell.constraints.size(), 1u);
  EXPECT_EQ(cell.constraints[0].normal, (Vec2{1.0, 0.0}));
  EXPECT_DOUBLE_EQ(cell.constraints[0].offset, 1.0);
  EXPECT_TRUE(contains(cell, {0.5, 0.0}));
  EXPECT_TRUE(contains(cell, {1.0, 0.0}));
  EXPECT_TRUE(contains(cell, {0.999, 0.0}));
  EXPECT_FALSE(contains(cell, {1.5, 0.0}));
  for (Vec2 p : {Vec2{0.5, 0.0}, Vec2{1.0, 0.0}, Vec2{0.999, 0.0}, Vec2{1.5, 0.0}})
    EXPECT_EQ(contains(cell, p), bvcOracle({0, 0}, 1.0, nb, p));
}

TEST(Bvc, NoNeighborsContainsEverything) {
  const auto cell = computeBvc({1.0, 2.0}, 0.5, std::vector<Vec2>{});
  EXPECT_TRUE(contains(cell, {-1e6, 1e6}));
  EXPECT_TRUE(contains(cell, {1.0, 2.0}));
}

TEST(Bvc, OwnerInsideNeighborOutside) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const double R = uniform(rng, 0.1, 0.5);
    const auto pts = separatedPoints(rng, uniformInt(rng, 2, 8), 5.0, 2 * R + 1e-6);
    for (size_t i = 0; i < pts.size(); ++i) {
      std::vector<Vec2> others;
      for (size_t j = 0; j < pts.size(); ++j)
        if (j != i) others.push_back(pts[j]);
      const auto cell = computeBvc(pts[i], R, others);
      EXPECT_TRUE(contains(cell, pts[i]));
      for (const auto& q : others) EXPECT_FALSE(contains(cell, q));
    }
  }
}

TEST(Bvc, MembershipMatchesOracleInequality) {
  Rng rng(2);
  int disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double R = uniform(rng, 0.1, 0.5);
    const auto pts = separatedPoints(rng, 5, 6.0, 2 * R);
    const std::vector<Vec2> others(pts.begin() + 1, pts.end());
    const auto cell = computeBvc(pts[0], R, others);
    for (int k = 0; k < 100; ++k) {
      const Vec2 p{uniform(rng, -1.0, 7.0), uniform(rng, -1.0, 7.0)};
      disagreements += contains(cell, p) != bvcOracle(pts[0], R, others, p);
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Bvc, CellIsConvex) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pts = separatedPoints(rng, 6, 5.0, 0.6);
    const std::vector<Vec2> others(pts.begin() + 1, pts.end());
    const auto cell = computeBvc(pts[0], 0.25, others);
    for (int k = 0; k < 50; ++k) {
      const Vec2 a{uniform(rng, -1, 6), uniform(rng, -1, 6)};
      const Vec2 b{uniform(rng, -1, 6), uniform(rng, -1, 6)};
      if (!contains(cell, a) || !contains(cell, b)) continue;
      const double t = uniform(rng, 0.0, 1.0);
      EXPECT_TRUE(contains(cell, a + (b - a) * t));
    }
  }
}

TEST(Bvc, SegmentChecks) {
  const auto cell = computeBvc({0.0, 0.0}, 1.0, std::vector<Vec2>{{4.0, 0.0}});
  EXPECT_TRUE(segmentInside(cell, {0.0, 0.0}, {0.9, 0.5}));
  EXPECT_FALSE(segmentInside(cell, {0.0, 0.0}, {1.2, 0.0}));
}

TEST(Bvc, SegmentAgreesWithDenseSampling) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pts = separatedPoints(rng, 5, 4.0, 0.6);
    const std::vector<Vec2> others(pts.begin() + 1, pts.end());
    const auto cell = computeBvc(pts[0], 0.25, others);
    const Vec2 a = pts[0] + Vec2{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
    const Vec2 b = pts[0] + Vec2{uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5)};
    bool sampled = true;
    for (int k = 0; k <= 100; ++k) sampled = sampled && contains(cell, a + (b - a) * (k / 100.0));
    EXPECT_EQ(segmentInside(cell, a, b), sampled);
  }
}

TEST(Bvc, CoincidentNeighborIsVacuous) {
  const auto cell = computeBvc({1.0, 1.0}, 0.3, std::vector<Vec2>{{1.0, 1.0}});
  EXPECT_TRUE(contains(cell, {5.0, 5.0}));
}

TEST(Bvc, PolygonVerticesLieOnTheCell) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = separatedPoints(rng, 5, 4.0, 0.6);
    const std::vector<Vec2> others(pts.begin() + 1, pts.end());
    const auto cell = computeBvc(pts[0], 0.25, others);
    const auto poly = cellPolygon(cell, {-1, -1}, {5, 5});
    ASSERT_GE(poly.size(), 3u);
    for (const auto& v : poly)
      for (const auto& h : cell.constraints) EXPECT_TRUE(h.contains(v, 1e-9));
    double area = 0.0;
    for (size_t k = 0; k < poly.size(); ++k) area += cross(poly[k], poly[(k + 1) % poly.size()]);
    EXPECT_GT(area, 0.0);  // counter-clockwise
  }
}
