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

#include "storm/guidance.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace storm {

double coupledObjective(const SplineTrajectory& traj, double rho) {
  return 0.5 * totalJerkEnergy(traj) + rho * traj.duration();
}

Eigen::VectorXd objectiveGradient(const SplineTrajectory& traj, double rho) {
  const int p = traj.degree();
  const int n = traj.lastIndex();
  const int m = traj.numSegments();
  const Points& q = traj.controlPoints();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(3 * (n + 1) + m);

  // d/dQ of 1/2 sum_j x_j' W_j x_j span_j is sum_j W_j x_j span_j.
  for (int j = 0; j < m; ++j) {
    const SegmentEnergy e = segmentEnergyMatrix(traj, j);
    const Eigen::MatrixXd local = e.weight * q.middleRows(j, p + 1) * traj.spans()[j];
    for (int r = 0; r <= p; ++r) grad.segment<3>(3 * (j + r)) += local.row(r).transpose();
  }

  std::vector<double> spans = traj.spans();
  for (int j = 0; j < m; ++j) {
    const double base = spans[j];
    const double step = std::max(1e-7, 1e-6 * base);
    spans[j] = base + step;
    const double up = totalJerkEnergy(q, spans, p);
    spans[j] = base - step;
    const double down = totalJerkEnergy(q, spans, p);
    spans[j] = base;
    grad[3 * (n + 1) + j] = rho + 0.5 * (up - down) / (2.0 * step);
  }
  return grad;
}

void updateGuidance(GuidanceState& state, const Eigen::VectorXd& grad_new, int num_position_vars) {
  if (state.grad.size() != grad_new.size()) {
    state.grad = Eigen::VectorXd::Zero(grad_new.size());
  }
  state.num_position_vars = num_position_vars;
  state.grad = state.momentum * state.grad + grad_new;
  const double norm = state.grad.norm();
  state.norm_grad = norm > 0.0 ? Eigen::VectorXd(state.grad / norm) : Eigen::VectorXd::Zero(grad_new.size());
}

void updateGuidance(GuidanceState& state, const SplineTrajectory& traj, double rho) {
  updateGuidance(state, objectiveGradient(traj, rho), 3 * (traj.lastIndex() + 1));
}

GuidanceTerms getGuidance(const GuidanceState& state, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  GuidanceTerms terms;
  const int nq = state.num_position_vars;
  const int nt = static_cast<int>(state.norm_grad.size()) - nq;
  if (nt < 0) throw std::invalid_argument("guidance state has no gradient");
  terms.position = state.confidence * state.norm_grad.head(nq);
  terms.spans = (state.confidence / rho) * state.norm_grad.tail(nt);
  return terms;
}

}  // namespace storm
