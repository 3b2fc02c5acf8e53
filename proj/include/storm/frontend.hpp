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

// Random maps, grid search, corridor construction and batch benchmarking.

#ifndef STORM_FRONTEND_HPP_
#define STORM_FRONTEND_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "storm/corridor.hpp"
#include "storm/driver.hpp"
#include "storm/grid.hpp"
#include "storm/validator.hpp"

namespace storm {

class FrontendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic 64-bit mixer used to derive per-trial seeds.
std::uint64_t mixSeed(std::uint64_t x);

/// Drops pillars and blocks at seeded random positions until the occupied
/// fraction reaches `density`.
OccupancyGrid randomMap(std::uint64_t seed, Cell dims, double resolution, double density);

/// 26-connected shortest path with Euclidean step costs. Diagonal moves need
/// every cell of their bounding box free. Ties go to the lexicographically
/// smallest cell. Throws FrontendError("unreachable").
std::vector<Cell> astar(const OccupancyGrid& grid, const Cell& start, const Cell& goal);

double pathLength(const OccupancyGrid& grid, const std::vector<Cell>& path);

/// Greedy line-of-sight shortcutting: from each kept point jump to the
/// farthest later point with a free straight line.
std::vector<Vec3> prunePath(const OccupancyGrid& grid, const std::vector<Vec3>& path);

struct MapConfig {
  Vec3 size{15.0, 15.0, 4.0};
  double resolution = 0.25;
  double density = 0.15;
  double min_distance = 8.0;
  /// Half-width of the cube cleared around start and goal, in meters.
  double clearance = 0.5;
  /// Obstacles are grown by this much for path search, in meters.
  double safety_margin = 0.25;
  double inflation_limit = 1.5;
};

struct Scenario {
  std::uint64_t seed = 0;
  OccupancyGrid grid;
  Vec3 start = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  std::vector<Vec3> waypoints;
  Corridor corridor;
};

Cell mapDims(const MapConfig& config);

/// Clears the endpoint neighborhoods, searches, prunes and builds the box
/// corridor. The exact endpoints replace the first and last cell centers.
Scenario planScenario(OccupancyGrid grid, const Vec3& start, const Vec3& goal, const MapConfig& config);

/// Map, endpoints at least min_distance apart, pruned path and box corridor.
Scenario makeScenario(std::uint64_t seed, const MapConfig& config);

struct BenchConfig {
  MapConfig map;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<double> gamma0{0.1};
  std::vector<double> rho{512.0};
  std::vector<bool> guidance{true};
  ProblemSpec base;  // solver settings; geometry is filled per trial
  /// When set, each run writes its iteration trace here as JSON lines.
  std::string trace_dir;

  void validate() const;
};

ProblemSpec specFor(const Scenario& scenario, const ProblemSpec& base);

struct BenchRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double gamma0 = 0.0;
  double rho = 0.0;
  bool guidance = false;
  std::string status;
  std::string termination;
  int iterations = 0;
  int segments = 0;
  double path_length = 0.0;
  ViolationReport report;
  bool monotone = false;
  double wall_ms = 0.0;  // kept out of the CSV so reruns are byte-identical
};

/// True when total time never increases by more than tol across the trace.
bool monotoneTime(const RunResult& result, double initial_time, double tol = 1e-9);

std::vector<BenchRow> runBenchmark(const BenchConfig& config);

std::string benchCsvHeader();
std::string benchCsvRow(const BenchRow& row);

}  // namespace storm

#endif  // STORM_FRONTEND_HPP_
