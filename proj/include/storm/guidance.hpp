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

#ifndef STORM_GUIDANCE_HPP_
#define STORM_GUIDANCE_HPP_

#include <Eigen/Dense>

#include "storm/bspline.hpp"

namespace storm {

/// Coupled objective 1/2 * jerk energy + rho * total time.
double coupledObjective(const SplineTrajectory& traj, double rho);

/// Gradient of the coupled objective stacked as [d/dQ (point-major); d/dT].
/// The Q block is analytic; the T block uses central differences of the
/// energy with step max(1e-7, 1e-6 * span).
Eigen::VectorXd objectiveGradient(const SplineTrajectory& traj, double rho);

/// Momentum-smoothed, normalized gradient shared by both subproblems.
struct GuidanceState {
  double momentum = 0.5;
  double confidence = 1.0;
  double threshold = 100.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd norm_grad;
  int num_position_vars = 0;

  /// Guidance is injected only while rho <= threshold.
  bool active(double rho) const { return rho <= threshold; }
};

/// grad <- momentum * grad + grad_new, then norm_grad = grad / |grad|.
/// A zero accumulated gradient leaves norm_grad zero.
void updateGuidance(GuidanceState& state, const Eigen::VectorXd& grad_new, int num_position_vars);
void updateGuidance(GuidanceState& state, const SplineTrajectory& traj, double rho);

struct GuidanceTerms {
  Eigen::VectorXd position;  // c * norm_grad_Q
  Eigen::VectorXd spans;     // (c / rho) * norm_grad_T
};

GuidanceTerms getGuidance(const GuidanceState& state, double rho);

}  // namespace storm

#endif  // STORM_GUIDANCE_HPP_
