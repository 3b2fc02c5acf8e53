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

// Alternating optimization loop: control-point QP, then knot-span LP, with
// optional guidance, a decaying trust region on the spans, early stopping and
// a convergence test on the span change.

#ifndef STORM_DRIVER_HPP_
#define STORM_DRIVER_HPP_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "storm/bspline.hpp"
#include "storm/corridor.hpp"
#include "storm/solvers.hpp"
#include "storm/spatial_opt.hpp"
#include "storm/temporal_opt.hpp"

namespace storm {

/// Raised when the spatial QP has no solution on the first iteration or the
/// corridor cannot hold the boundary states.
class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::vector<Vec3> waypoints;
  Corridor corridor;
  BoundaryConditions bc;
  KinodynamicLimits limits;
  int degree = 3;
  double rho = 512.0;
  double epsilon = 0.05;
  double gamma0 = 0.1;
  double confidence = 1.0;
  double momentum = 0.5;
  double rho_threshold = 100.0;
  bool guidance = true;
  int max_iterations = 50;
  int min_iterations = 3;
  /// Target segment length used to size the spline, in meters.
  double segment_length = 1.0;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct InitialGuess {
  Points points;
  std::vector<double> spans;
  std::vector<int> segment_region;
  /// Points shared by consecutive regions that anchor the initial layout.
  std::vector<Vec3> junctions;
  bool degenerate = false;
};

double polylineLength(const std::vector<Vec3>& waypoints);

/// polyline length / (0.5 V_max).
double initialTimeCap(const ProblemSpec& spec);

/// Segments per region: round(length / segment_length), but at least 2 in
/// the first and last region and at least `interior_floor` in the others.
std::vector<int> allocateSegments(const std::vector<double>& region_lengths, int interior_floor,
                                  double segment_length);

InitialGuess initialize(const ProblemSpec& spec);

enum class Termination { kConverged, kMaxIterations, kEarlyStop, kDegenerate };
std::string toString(Termination t);

struct IterationTrace {
  int k = 0;
  double gamma = 0.0;
  double total_time = 0.0;
  double energy = 0.0;
  double objective = 0.0;
  double span_change = 0.0;
  SolveStatus qp_status = SolveStatus::kOptimal;
  SolveStatus lp_status = SolveStatus::kOptimal;
  int qp_iterations = 0;
  int lp_iterations = 0;
  bool guided = false;
};

struct RunResult {
  SplineTrajectory trajectory;
  std::vector<int> segment_region;
  Termination termination = Termination::kMaxIterations;
  int iterations = 0;
  std::vector<IterationTrace> trace;
};

/// Runs the optimization. When `trace_out` is set each iteration is written
/// as one JSON line.
RunResult run(const ProblemSpec& spec, std::ostream* trace_out = nullptr);

std::string traceLine(const IterationTrace& rec);

}  // namespace storm

#endif  // STORM_DRIVER_HPP_
