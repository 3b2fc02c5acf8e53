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

// Control-point step: minimum jerk energy over Q with the spans held fixed,
// subject to corridor rows and position/velocity boundary equalities.
//
// Decision vector layout is point-major: x[3k + axis] = Q_k[axis].

#ifndef STORM_SPATIAL_OPT_HPP_
#define STORM_SPATIAL_OPT_HPP_

#include <span>

#include <Eigen/Dense>

#include "storm/bspline.hpp"
#include "storm/corridor.hpp"
#include "storm/solvers.hpp"

namespace storm {

struct BoundaryConditions {
  Vec3 p_start = Vec3::Zero();
  Vec3 p_goal = Vec3::Zero();
  Vec3 v_start = Vec3::Zero();
  Vec3 v_goal = Vec3::Zero();
};

struct EqualityRows {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

Eigen::VectorXd flatten(const Points& points);
Points unflatten(const Eigen::VectorXd& x);

/// Q_0 = p_start, Q_n = p_goal, V_0 = v_start, V_{n-1} = v_goal: 12 scalar
/// rows. The velocity rows depend on the first and last span.
EqualityRows boundaryRows(int last_index, int degree, std::span<const double> spans,
                          const BoundaryConditions& bc);

/// Per-axis Hessian of sum_j x_j' W_j x_j span_j, i.e. the scatter of
/// 2 W_j span_j. Size (n+1) x (n+1).
Eigen::MatrixXd axisEnergyHessian(int last_index, int degree, std::span<const double> spans);

/// Objective 1/2 x'Hx + q'x equals the jerk energy plus guidance'x.
/// `guidance` may be empty (zero linear term).
QpProblem assembleQp(int last_index, int degree, std::span<const double> spans,
                     const PointConstraintSet& constraints, const EqualityRows& boundary,
                     const Eigen::VectorXd& guidance = {});

struct CpsResult {
  SolveStatus status = SolveStatus::kMaxIter;
  Points points;
  double objective = 0.0;
  int iterations = 0;
  bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Assembles and solves the control point QP. Axis-aligned corridor rows
/// split the problem into three independent per-axis QPs, which is exact.
CpsResult optimizeControlPoints(int last_index, int degree, std::span<const double> spans,
                                const PointConstraintSet& constraints,
                                const BoundaryConditions& bc,
                                const Eigen::VectorXd& guidance = {});

/// Solves an assembled QP, splitting it per axis when no row couples axes.
SolveResult solveSeparable(const QpProblem& problem);

}  // namespace storm

#endif  // STORM_SPATIAL_OPT_HPP_
