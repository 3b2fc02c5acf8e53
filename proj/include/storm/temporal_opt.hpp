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

// Knot-span step: an LP over the spans with the control points held fixed.
//
// Velocity rows are exact because V_i is p (Q_{i+1} - Q_i) divided by a sum
// of spans. Acceleration and jerk rows freeze the lower-order derivative
// control points at the previous spans, and the trust rows keep the new spans
// close enough to those for the freeze to stay accurate.

#ifndef STORM_TEMPORAL_OPT_HPP_
#define STORM_TEMPORAL_OPT_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "storm/bspline.hpp"
#include "storm/solvers.hpp"

namespace storm {

struct KinodynamicLimits {
  double v_max = 2.0;
  double a_max = 6.0;
  double j_max = 30.0;

  /// Throws std::invalid_argument unless all limits are positive.
  void validate() const;
};

/// gamma0 / sqrt(k) for k >= 1.
double decayFactor(int k, double gamma0);

/// sum_{j in spans} T_j >= bound.
struct WindowRow {
  std::vector<int> spans;
  double bound = 0.0;
};

std::vector<WindowRow> velocityRows(const Points& control_points, int degree, int num_spans,
                                    const KinodynamicLimits& limits);
std::vector<WindowRow> accelRows(const Points& control_points, std::span<const double> spans_k,
                                 int degree, const KinodynamicLimits& limits);
std::vector<WindowRow> jerkRows(const Points& control_points, std::span<const double> spans_k,
                                int degree, const KinodynamicLimits& limits);
/// (1 - gamma) T_k elementwise.
Eigen::VectorXd trustLowerBounds(std::span<const double> spans_k, double gamma);

struct TemporalLp {
  LpProblem lp;
  int trust_rows = 0;
  int cap_rows = 0;
  int velocity_rows = 0;
  int accel_rows = 0;
  int jerk_rows = 0;

  int totalRows() const { return trust_rows + cap_rows + velocity_rows + accel_rows + jerk_rows; }
};

/// Trust rows are carried as the LP lower bounds; the other families are G
/// rows in the order cap, velocity, acceleration, jerk. `guidance` is the
/// already scaled temporal guidance (c/rho times the normalized gradient);
/// the cost is 1 + guidance, or all ones when empty.
TemporalLp assembleLp(const Points& control_points, std::span<const double> spans_k, int degree,
                      const KinodynamicLimits& limits, double gamma, double t_cap,
                      const Eigen::VectorXd& guidance = {});

struct KnotResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> spans;
  int iterations = 0;
  bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Solves the span LP. A non-optimal status is a normal outcome that the
/// caller handles; the spans are empty then.
KnotResult optimizeKnots(const Points& control_points, std::span<const double> spans_k, int degree,
                         const KinodynamicLimits& limits, double gamma, double t_cap,
                         const Eigen::VectorXd& guidance = {});

}  // namespace storm

#endif  // STORM_TEMPORAL_OPT_HPP_
