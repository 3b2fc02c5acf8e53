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

#include "storm/validator.hpp"

#include <cmath>
#include <stdexcept>

namespace storm {

std::vector<Sample> sample(const SplineTrajectory& traj, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double t0 = traj.startTime();
  const double t1 = traj.endTime();
  std::vector<Sample> out;
  auto push = [&](double t) {
    Sample s;
    s.t = t;
    s.position = traj.evaluate(t, 0);
    s.velocity = traj.evaluate(t, 1);
    s.acceleration = traj.evaluate(t, 2);
    s.jerk = traj.evaluate(t, 3);
    out.push_back(s);
  };
  // Index-based stepping avoids accumulated drift; a last step within
  // 1e-9 dt of the end is snapped onto it.
  const auto steps = static_cast<long long>(std::floor((t1 - t0) / dt + 1e-9));
  for (long long i = 0; i <= steps; ++i) push(std::min(t0 + static_cast<double>(i) * dt, t1));
  if (out.back().t != t1) {
    if (out.back().t > t1 - 1e-9 * dt) out.pop_back();
    push(t1);
  }
  return out;
}

ViolationReport check(const SplineTrajectory& traj, const Corridor& corridor,
                      std::span<const int> segment_region, const KinodynamicLimits& limits,
                      double dt, double tol) {
  limits.validate();
  const bool check_sfc = !corridor.regions.empty();
  if (check_sfc && static_cast<int>(segment_region.size()) != traj.numSegments()) {
    throw std::invalid_argument("segment region map does not match the trajectory");
  }
  if (dt <= 0.0) dt = traj.duration() / 5000.0;
  const std::vector<Sample> samples = sample(traj, dt);

  ViolationReport rep;
  int sfc = 0, vel = 0, acc = 0, jerk = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (check_sfc) {
      const int region = segment_region[traj.segmentAt(s.t)];
      if (region < 0 || region >= static_cast<int>(corridor.regions.size())) {
        throw std::invalid_argument("segment region index out of range");
      }
      if (corridor.regions[region].violation(s.position) > tol) ++sfc;
    }
    if (s.velocity.cwiseAbs().maxCoeff() > limits.v_max * (1.0 + tol)) ++vel;
    if (s.acceleration.cwiseAbs().maxCoeff() > limits.a_max * (1.0 + tol)) ++acc;
    if (s.jerk.cwiseAbs().maxCoeff() > limits.j_max * (1.0 + tol)) ++jerk;
    if (i > 0) rep.length += (s.position - samples[i - 1].position).norm();
  }
  const double total = static_cast<double>(samples.size());
  rep.samples = static_cast<int>(samples.size());
  rep.sfc_ratio = sfc / total;
  rep.vel_ratio = vel / total;
  rep.acc_ratio = acc / total;
  rep.jerk_ratio = jerk / total;
  rep.duration = traj.duration();
  rep.energy_integral = totalJerkEnergy(traj);
  rep.energy = rep.energy_integral / rep.duration;
  return rep;
}

}  // namespace storm
