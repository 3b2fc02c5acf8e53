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

#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "storm/solvers.hpp"

namespace storm {
namespace {

Eigen::MatrixXd randomMatrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

Eigen::VectorXd randomVector(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

QpProblem randomQp(std::mt19937_64& rng, int n, int inequalities, int equalities) {
  QpProblem p;
  const Eigen::MatrixXd m = randomMatrix(rng, n, n);
  p.H = m.transpose() * m + 0.1 * Eigen::MatrixXd::Identity(n, n);
  p.q = 3.0 * randomVector(rng, n);
  const Eigen::VectorXd x0 = randomVector(rng, n);
  p.G = randomMatrix(rng, inequalities, n);
  p.h = p.G * x0 + randomVector(rng, inequalities, 0.0, 0.5);
  p.A = randomMatrix(rng, equalities, n);
  p.b = p.A * x0;
  return p;
}

TEST(SolveQp, UnconstrainedIdentity) {
  QpProblem p;
  p.H = Eigen::MatrixXd::Identity(4, 4);
  p.q = Eigen::VectorXd::Zero(4);
  p.G.resize(0, 4);
  p.A.resize(0, 4);
  const SolveResult r = solveQp(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_LT(r.x.norm(), 1e-12);
}

TEST(SolveQp, SingleEquality) {
  QpProblem p;
  p.H = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  p.q = Eigen::VectorXd::Zero(3);
  p.G.resize(0, 3);
  p.A = Eigen::MatrixXd::Zero(1, 3);
  p.A(0, 0) = 1.0;
  p.b = Eigen::VectorXd::Ones(1);
  const SolveResult r = solveQp(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_LT((r.x - Eigen::Vector3d(1, 0, 0)).norm(), 1e-12);
}

TEST(SolveQp, SixVariablesThreeInequalitiesMatchBruteForce) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const QpProblem p = randomQp(rng, 6, 3, 0);
    const auto ref = oracle::bruteForceQp(p.H, p.q, p.G, p.h, p.A, p.b);
    ASSERT_TRUE(ref.has_value());
    const SolveResult r = solveQp(p);
    ASSERT_TRUE(r.optimal());
    EXPECT_LT((r.x - ref->x).cwiseAbs().maxCoeff(), 1e-7 * std::max(1.0, ref->x.cwiseAbs().maxCoeff()));
  }
}

TEST(SolveQp, RandomWithEqualitiesMatchBruteForce) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> nvar(2, 8);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = nvar(rng);
    const QpProblem p = randomQp(rng, n, std::min(8, n + 2), trial % 3 == 0 ? 1 : 0);
    const auto ref = oracle::bruteForceQp(p.H, p.q, p.G, p.h, p.A, p.b);
    ASSERT_TRUE(ref.has_value());
    const SolveResult r = solveQp(p);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.objective, ref->objective, 1e-7 * std::max(1.0, std::abs(ref->objective)));
    EXPECT_LT((r.x - ref->x).cwiseAbs().maxCoeff(), 1e-7 * std::max(1.0, ref->x.cwiseAbs().maxCoeff()));
  }
}

TEST(SolveQp, KktCertificate) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const QpProblem p = randomQp(rng, 8, 10, 2);
    const SolveResult r = solveQp(p);
    ASSERT_TRUE(r.optimal());
    const KktResiduals k = kktResiduals(p, r);
    EXPECT_LE(k.primal, 1e-7);
    EXPECT_LE(k.stationarity, 1e-6);
    EXPECT_LE(k.complementarity, 1e-7);
    EXPECT_LE(k.dual, 1e-12);
  }
}

TEST(SolveQp, InfeasibleIsReported) {
  QpProblem p;
  p.H = Eigen::MatrixXd::Identity(2, 2);
  p.q = Eigen::VectorXd::Zero(2);
  p.G = Eigen::MatrixXd(2, 2);
  p.G << 1, 0, -1, 0;
  p.h = Eigen::Vector2d(-1.0, -1.0);  // x <= -1 and x >= 1
  p.A.resize(0, 2);
  EXPECT_EQ(solveQp(p).status, SolveStatus::kInfeasible);
}

TEST(SolveQp, Deterministic) {
  std::mt19937_64 rng(24);
  const QpProblem p = randomQp(rng, 8, 12, 2);
  const SolveResult a = solveQp(p);
  const SolveResult b = solveQp(p);
  ASSERT_EQ(a.x.size(), b.x.size());
  EXPECT_EQ(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()), 0);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolveQp, RejectsBadInput) {
  QpProblem p;
  p.H = Eigen::MatrixXd(2, 2);
  p.H << 1, 1, 0, 1;
  p.q = Eigen::VectorXd::Zero(2);
  p.G.resize(0, 2);
  p.A.resize(0, 2);
  EXPECT_THROW(solveQp(p), SolverError);
  p.H = Eigen::MatrixXd::Identity(2, 2);
  p.q[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solveQp(p), SolverError);
}

TEST(SolveLp, SingleLowerBound) {
  LpProblem p;
  p.c = Eigen::VectorXd::Ones(1);
  p.lower = Eigen::VectorXd::Constant(1, 3.0);
  p.G.resize(0, 1);
  const SolveResult r = solveLp(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_EQ(r.x[0], 3.0);
}

TEST(SolveLp, ElementwiseLowerBounds) {
  LpProblem p;
  p.c = Eigen::VectorXd::Ones(4);
  p.lower = Eigen::Vector4d(0.5, 1.0, 2.0, 0.1);
  p.G = Eigen::MatrixXd::Ones(1, 4);
  p.h = Eigen::VectorXd::Constant(1, 100.0);
  const SolveResult r = solveLp(p);
  ASSERT_TRUE(r.optimal());
  EXPECT_LT((r.x - p.lower).norm(), 1e-12);
}

LpProblem randomLp(std::mt19937_64& rng, int n, int rows) {
  LpProblem p;
  p.c = randomVector(rng, n, -1.0, 2.0);
  p.lower = randomVector(rng, n, 0.0, 1.0);
  const Eigen::VectorXd x0 = p.lower + randomVector(rng, n, 0.1, 1.0);
  p.G = Eigen::MatrixXd(rows + 1, n);
  p.G.topRows(rows) = randomMatrix(rng, rows, n);
  p.G.row(rows).setOnes();  // keeps the feasible set bounded
  p.h = p.G * x0 + randomVector(rng, rows + 1, 0.0, 0.5);
  return p;
}

TEST(SolveLp, FiveVariablesMatchVertexEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const LpProblem p = randomLp(rng, 5, 4);
    const auto ref = oracle::vertexEnumerationLp(p.c, p.G, p.h, p.lower);
    ASSERT_TRUE(ref.has_value());
    const SolveResult r = solveLp(p);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.objective, ref->objective, 1e-7 * std::max(1.0, std::abs(ref->objective)));
    EXPECT_LE((p.G * r.x - p.h).maxCoeff(), 1e-7);
    EXPECT_GE((r.x - p.lower).minCoeff(), -1e-7);
  }
}

TEST(SolveLp, InfeasibleIsReported) {
  LpProblem p;
  p.c = Eigen::VectorXd::Ones(2);
  p.lower = Eigen::Vector2d(1.0, 1.0);
  p.G = Eigen::MatrixXd::Ones(1, 2);
  p.h = Eigen::VectorXd::Constant(1, 1.5);
  EXPECT_EQ(solveLp(p).status, SolveStatus::kInfeasible);
}

TEST(SolveLp, UnboundedThrows) {
  LpProblem p;
  p.c = Eigen::Vector2d(-1.0, 1.0);
  p.lower = Eigen::Vector2d::Zero();
  p.G.resize(0, 2);
  EXPECT_THROW(solveLp(p), SolverError);
}

TEST(SolveLp, RejectsNonFinite) {
  LpProblem p;
  p.c = Eigen::VectorXd::Ones(1);
  p.lower = Eigen::VectorXd::Zero(1);
  p.G = Eigen::MatrixXd::Ones(1, 1);
  p.h = Eigen::VectorXd::Constant(1, std::numeric_limits<double>::infinity());
  EXPECT_THROW(solveLp(p), SolverError);
}

TEST(SolveLp, Deterministic) {
  std::mt19937_64 rng(32);
  const LpProblem p = randomLp(rng, 8, 6);
  const SolveResult a = solveLp(p);
  const SolveResult b = solveLp(p);
  ASSERT_TRUE(a.optimal());
  EXPECT_EQ(std::memcmp(a.x.data(), b.x.data(), sizeof(double) * a.x.size()), 0);
}

}  // namespace
}  // namespace storm
