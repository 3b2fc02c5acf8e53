// Copyright 2026 The STORM Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "storm/temporal_opt.hpp"

namespace storm {
namespace {

double windowSum(const WindowRow& row, std::span<const double> spans) {
  double s = 0.0;
  for (int j : row.spans) s += spans[static_cast<std::size_t>(j)];
  return s;
}

// Only Q_2 -> Q_3 moves, by d along x.
Points stepPoints(double d) {
  Points q = Points::Zero(7, 3);
  for (int i = 3; i < 7; ++i) q(i, 0) = d;
  return q;
}

TEST(DecayFactor, InverseSquareRoot) {
  EXPECT_DOUBLE_EQ(decayFactor(1, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(decayFactor(4, 0.3), 0.15);
  EXPECT_DOUBLE_EQ(decayFactor(9, 0.3), 0.1);
  EXPECT_THROW(decayFactor(0, 0.3), std::invalid_argument);
}

TEST(VelocityRows, StillPointsGiveZeroBound) {
  const Points q = Points::Constant(7, 3, 1.5);
  const auto rows = velocityRows(q, 3, 4, {});
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) EXPECT_EQ(r.bound, 0.0);
}

TEST(VelocityRows, BoundAndWindow) {
  Points q = Points::Zero(7, 3);
  q.row(3) = Vec3(0.5, -2.0, 1.0).transpose();
  KinodynamicLimits lim;
  lim.v_max = 3.0;
  const auto rows = velocityRows(q, 3, 4, lim);
  EXPECT_DOUBLE_EQ(rows[2].bound, 2.0);
  EXPECT_EQ(rows[2].spans, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(rows[0].spans, (std::vector<int>{0}));
  EXPECT_EQ(rows[5].spans, (std::vector<int>{3}));
  EXPECT_EQ(rows[4].spans, (std::vector<int>{2, 3}));
}

TEST(VelocityRows, TightRowGivesLimitVelocity) {
  std::mt19937_64 rng(51);
  KinodynamicLimits lim;
  lim.v_max = 1.7;
  for (int trial = 0; trial < 10; ++trial) {
    const auto rt = oracle::randomTrajectory(rng, 3, 5);
    const auto rows = velocityRows(rt.q, 3, 5, lim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      // Rescale spans so this row holds with equality.
      const double s = rows[i].bound / windowSum(rows[i], rt.spans);
      std::vector<double> spans = rt.spans;
      for (double& t : spans) t *= s;
      const auto knots = oracle::knotVector(spans, 3);
      const double denom = knots[i + 4] - knots[i + 1];
      const double v = 3.0 * (rt.q.row(i + 1) - rt.q.row(i)).cwiseAbs().maxCoeff() / denom;
      EXPECT_NEAR(v, lim.v_max, 1e-12);
    }
  }
}

TEST(AccelRows, StillVelocityIsVacuous) {
  const auto rows = accelRows(Points::Zero(7, 3), std::vector<double>{1, 1, 1, 1}, 3, {});
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) EXPECT_EQ(r.bound, 0.0);
  EXPECT_EQ(rows[2].spans, (std::vector<int>{1, 2}));
  EXPECT_EQ(rows[0].spans, (std::vector<int>{0}));
}

TEST(AccelRows, RowHoldsIffAccelPointWithinLimit) {
  std::mt19937_64 rng(52);
  KinodynamicLimits lim;
  lim.a_max = 2.5;
  for (int trial = 0; trial < 10; ++trial) {
    const auto rt = oracle::randomTrajectory(rng, 3, 6);
    const auto rows = accelRows(rt.q, rt.spans, 3, lim);
    const auto knots = oracle::knotVector(rt.spans, 3);
    // Velocity and acceleration points written out from the knot vector.
    std::vector<Vec3> v;
    for (int i = 0; i + 1 < rt.q.rows(); ++i)
      v.push_back(3.0 * (rt.q.row(i + 1) - rt.q.row(i)).transpose() / (knots[i + 4] - knots[i + 1]));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vec3 a = 2.0 * (v[i + 1] - v[i]) / (knots[i + 4] - knots[i + 2]);
      // |A_i| * window == bound * a_max, so the row is tight exactly at the limit.
      EXPECT_NEAR(a.cwiseAbs().maxCoeff() * windowSum(rows[i], rt.spans), rows[i].bound * lim.a_max,
                  1e-9 * std::max(1.0, rows[i].bound * lim.a_max));
    }
  }
}

TEST(JerkRows, SingleSpanWindows) {
  const Points q = oracle::Points::Zero(7, 3);
  const auto rows = jerkRows(q, std::vector<double>{1, 2, 1, 2}, 3, {});
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(rows[i].spans, std::vector<int>{i});
    EXPECT_EQ(rows[i].bound, 0.0);
  }
}

TEST(JerkRows, BoundIsSegmentJerkOverLimit) {
  std::mt19937_64 rng(53);
  KinodynamicLimits lim;
  lim.j_max = 7.0;
  const auto rt = oracle::randomTrajectory(rng, 3, 5);
  const auto rows = jerkRows(rt.q, rt.spans, 3, lim);
  for (int j = 0; j < 5; ++j) {
    const double jerk = oracle::curve(rt.q, rt.spans, 3, j, 0.0, 3).cwiseAbs().maxCoeff();
    const double t0 = std::accumulate(rt.spans.begin(), rt.spans.begin() + j, 0.0);
    const double jmid = oracle::curve(rt.q, rt.spans, 3, j, t0 + 0.5 * rt.spans[j], 3).cwiseAbs().maxCoeff();
    EXPECT_NEAR(jerk, jmid, 1e-9 * std::max(1.0, jerk));
    EXPECT_NEAR(rows[j].bound, rt.spans[j] * jerk / lim.j_max, 1e-9 * std::max(1.0, rows[j].bound));
  }
}

TEST(TrustBounds, ScaleByOneMinusGamma) {
  const auto lower = trustLowerBounds(std::vector<double>{1.0, 2.0}, 0.3);
  EXPECT_DOUBLE_EQ(lower[0], 0.7);
  EXPECT_DOUBLE_EQ(lower[1], 1.4);
  EXPECT_THROW(trustLowerBounds(std::vector<double>{1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(trustLowerBounds(std::vector<double>{1.0}, 1.0), std::invalid_argument);
}

TEST(AssembleLp, ShapeAndCost) {
  const std::vector<double> spans{1, 1, 1, 1};
  const TemporalLp t = assembleLp(stepPoints(1.0), spans, 3, {}, 0.2, 10.0);
  EXPECT_EQ(t.trust_rows, 4);
  EXPECT_EQ(t.cap_rows, 1);
  EXPECT_EQ(t.velocity_rows, 6);
  EXPECT_EQ(t.accel_rows, 5);
  EXPECT_EQ(t.jerk_rows, 4);
  EXPECT_EQ(t.totalRows(), 20);
  EXPECT_EQ(t.lp.G.rows(), 16);
  EXPECT_EQ(t.lp.c, Eigen::VectorXd::Ones(4));
  EXPECT_EQ(t.lp.G.row(0), Eigen::RowVectorXd::Ones(4));
  EXPECT_EQ(t.lp.h[0], 10.0);
  EXPECT_THROW(assembleLp(stepPoints(1.0), spans, 3, {}, 0.2, 10.0, Eigen::VectorXd::Ones(3)),
               std::invalid_argument);
  EXPECT_THROW(assembleLp(Points::Zero(6, 3), spans, 3, {}, 0.2, 10.0), std::invalid_argument);
  EXPECT_THROW(assembleLp(Points::Zero(6, 3), spans, 2, {}, 0.2, 10.0), std::invalid_argument);
}

TEST(OptimizeKnots, MatchesVertexEnumeration) {
  std::mt19937_64 rng(54);
  KinodynamicLimits lim;
  lim.v_max = 1.0;
  lim.a_max = 2.0;
  lim.j_max = 5.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto rt = oracle::randomTrajectory(rng, 3, 4, 0.5, 1.5, 2.0);
    const double cap = 4.0 * std::accumulate(rt.spans.begin(), rt.spans.end(), 0.0);
    const TemporalLp t = assembleLp(rt.q, rt.spans, 3, lim, 0.3, cap);
    const auto ref = oracle::vertexEnumerationLp(t.lp.c, t.lp.G, t.lp.h, t.lp.lower);
    const KnotResult r = optimizeKnots(rt.q, rt.spans, 3, lim, 0.3, cap);
    ASSERT_EQ(r.optimal(), ref.has_value());
    if (!ref) continue;
    const Eigen::Map<const Eigen::VectorXd> x(r.spans.data(), 4);
    EXPECT_NEAR(t.lp.c.dot(x), ref->objective, 1e-7 * std::max(1.0, ref->objective));
    EXPECT_LE((t.lp.G * x - t.lp.h).maxCoeff(), 1e-7);
    EXPECT_GE((x - t.lp.lower).minCoeff(), 0.0);
  }
}

TEST(OptimizeKnots, VacuousRowsShrinkToTrustBound) {
  const std::vector<double> spans{0.5, 1.0, 2.0, 0.8};
  const KnotResult r = optimizeKnots(Points::Zero(7, 3), spans, 3, {}, 0.25, 100.0);
  ASSERT_TRUE(r.optimal());
  for (std::size_t j = 0; j < spans.size(); ++j) EXPECT_NEAR(r.spans[j], 0.75 * spans[j], 1e-12);
}

TEST(OptimizeKnots, NegativeCostFillsCap) {
  const std::vector<double> spans{1, 1, 1, 1};
  const KnotResult r = optimizeKnots(stepPoints(0.5), spans, 3, {}, 0.2, 6.0, Eigen::VectorXd::Constant(4, -2.0));
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(std::accumulate(r.spans.begin(), r.spans.end(), 0.0), 6.0, 1e-8);
}

TEST(OptimizeKnots, VelocityFloorAboveCapIsInfeasible) {
  const KnotResult r = optimizeKnots(stepPoints(10.0), std::vector<double>{1, 1, 1, 1}, 3, {}, 0.2, 4.0);
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_TRUE(r.spans.empty());
}

TEST(OptimizeKnots, TieBreakStaysNearPreviousSpans) {
  // One velocity row over spans 0..2 needs 4 s, one more than they have now.
  KinodynamicLimits lim;
  lim.a_max = lim.j_max = 1e9;
  const std::vector<double> spans{1, 1, 1, 1};
  const KnotResult r = optimizeKnots(stepPoints(8.0 / 3.0), spans, 3, lim, 0.5, 100.0);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.spans[0] + r.spans[1] + r.spans[2], 4.0, 1e-9);
  EXPECT_NEAR(r.spans[3], 0.5, 1e-9);
  double increase = 0.0;
  for (int j = 0; j < 3; ++j) increase += std::max(0.0, r.spans[j] - 1.0);
  EXPECT_NEAR(increase, 1.0, 1e-8);
}

}  // namespace
}  // namespace storm
