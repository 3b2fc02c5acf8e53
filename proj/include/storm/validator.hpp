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

#ifndef STORM_VALIDATOR_HPP_
#define STORM_VALIDATOR_HPP_

#include <span>
#include <vector>

#include "storm/bspline.hpp"
#include "storm/corridor.hpp"
#include "storm/temporal_opt.hpp"

namespace storm {

struct Sample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
};

/// Samples at t_s, t_s + dt, ... and always the end time.
std::vector<Sample> sample(const SplineTrajectory& traj, double dt);

struct ViolationReport {
  double sfc_ratio = 0.0;
  double vel_ratio = 0.0;
  double acc_ratio = 0.0;
  double jerk_ratio = 0.0;
  double length = 0.0;
  double duration = 0.0;
  /// Jerk energy integral divided by duration.
  double energy = 0.0;
  double energy_integral = 0.0;
  int samples = 0;

  bool clean() const { return sfc_ratio == 0.0 && vel_ratio == 0.0 && acc_ratio == 0.0 && jerk_ratio == 0.0; }
};

inline constexpr double kDefaultCheckTol = 1e-7;

/// Fractions of samples outside their segment's region by more than `tol`
/// or above a limit by more than the relative `tol`. dt <= 0 selects
/// duration / 5000. An empty corridor skips the corridor check.
ViolationReport check(const SplineTrajectory& traj, const Corridor& corridor,
                      std::span<const int> segment_region, const KinodynamicLimits& limits,
                      double dt = 0.0, double tol = kDefaultCheckTol);

}  // namespace storm

#endif  // STORM_VALIDATOR_HPP_
