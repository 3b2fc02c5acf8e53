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

// File formats. Unknown keys are rejected everywhere.
//
// Trajectory: {"degree", "control_points": [[x,y,z],...], "spans": [...],
//              "t_start", "segment_regions"?: [...]}
// Corridor:   {"regions": [{"halfspaces": [{"n": [a,b,c], "d": off}, ...]}
//                          | {"min": [...], "max": [...]}, ...]}
// Problem:    either "corridor" + "waypoints" + "start"/"goal", or "map"
//             (random map settings) with optional "start"/"goal", plus
//             solver settings.

#ifndef STORM_IO_HPP_
#define STORM_IO_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "storm/bspline.hpp"
#include "storm/corridor.hpp"
#include "storm/driver.hpp"
#include "storm/frontend.hpp"
#include "storm/validator.hpp"

namespace storm {

/// Malformed input, schema violations and file access problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

Json readJsonFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& text);

Json trajectoryToJson(const SplineTrajectory& traj, std::span<const int> segment_region = {});

struct TrajectoryFile {
  SplineTrajectory trajectory;
  std::vector<int> segment_region;
};
TrajectoryFile trajectoryFromJson(const Json& j);

Json corridorToJson(const Corridor& corridor);
Corridor corridorFromJson(const Json& j);

struct ProblemFile {
  ProblemSpec spec;
  /// Set when the geometry came from a generated map.
  std::optional<Scenario> scenario;
};

/// `seed_override` replaces the map seed when the problem uses a map.
ProblemFile problemFromJson(const Json& j, std::optional<std::uint64_t> seed_override = {});

BenchConfig benchConfigFromJson(const Json& j);

Json reportToJson(const ViolationReport& report);

/// Columns t,x,y,z,vx,vy,vz,ax,ay,az,jx,jy,jz.
std::string samplesCsv(const std::vector<Sample>& samples);

}  // namespace storm

#endif  // STORM_IO_HPP_
