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

#include "storm/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

namespace storm {

namespace {

void requireObject(const Json& j, const std::string& what) {
  if (!j.is_object()) throw IoError(what + " must be a JSON object");
}

void allowKeys(const Json& j, const std::string& what, std::initializer_list<const char*> keys) {
  requireObject(j, what);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw IoError(fmt::format("unknown key '{}' in {}", key, what));
  }
}

const Json& field(const Json& j, const char* key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) throw IoError(fmt::format("missing key '{}' in {}", key, what));
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw IoError(what + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw IoError(what + " must be an integer");
  return j.get<int>();
}

Vec3 vec3(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw IoError(what + " must be a 3-element array");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

std::vector<double> numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + " must be an array");
  std::vector<double> out;
  for (const Json& v : j) out.push_back(number(v, what));
  return out;
}

void readOptional(const Json& j, const char* key, double& out) {
  if (j.contains(key)) out = number(j[key], key);
}

void readOptional(const Json& j, const char* key, int& out) {
  if (j.contains(key)) out = integer(j[key], key);
}

Json vecJson(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

KinodynamicLimits limitsFromJson(const Json& j) {
  allowKeys(j, "limits", {"v_max", "a_max", "j_max"});
  KinodynamicLimits lim;
  readOptional(j, "v_max", lim.v_max);
  readOptional(j, "a_max", lim.a_max);
  readOptional(j, "j_max", lim.j_max);
  return lim;
}

MapConfig mapFromJson(const Json& j, std::uint64_t* seed) {
  if (seed) allowKeys(j, "map", {"seed", "size", "resolution", "density", "min_distance", "clearance", "inflation_limit"});
  else allowKeys(j, "map", {"size", "resolution", "density", "min_distance", "clearance", "inflation_limit"});
  MapConfig cfg;
  if (seed && j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw IoError("map seed must be a non-negative integer");
    *seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("size")) cfg.size = vec3(j["size"], "map size");
  readOptional(j, "resolution", cfg.resolution);
  readOptional(j, "density", cfg.density);
  readOptional(j, "min_distance", cfg.min_distance);
  readOptional(j, "clearance", cfg.clearance);
  readOptional(j, "inflation_limit", cfg.inflation_limit);
  if (!(cfg.resolution > 0.0)) throw IoError("map resolution must be positive");
  if (!(cfg.density >= 0.0 && cfg.density <= 0.5)) throw IoError("map density must lie in [0, 0.5]");
  return cfg;
}

// Solver settings shared by problem and bench files.
void solverFromJson(const Json& j, ProblemSpec& spec) {
  if (j.contains("limits")) spec.limits = limitsFromJson(j["limits"]);
  readOptional(j, "degree", spec.degree);
  readOptional(j, "rho", spec.rho);
  readOptional(j, "gamma0", spec.gamma0);
  readOptional(j, "confidence", spec.confidence);
  readOptional(j, "momentum", spec.momentum);
  readOptional(j, "rho_threshold", spec.rho_threshold);
  readOptional(j, "epsilon", spec.epsilon);
  readOptional(j, "max_iterations", spec.max_iterations);
  readOptional(j, "min_iterations", spec.min_iterations);
  readOptional(j, "segment_length", spec.segment_length);
  if (j.contains("guidance")) {
    if (!j["guidance"].is_boolean()) throw IoError("guidance must be a boolean");
    spec.guidance = j["guidance"].get<bool>();
  }
}

void endpointFromJson(const Json& j, const std::string& what, Vec3& position, Vec3& velocity) {
  allowKeys(j, what, {"position", "velocity"});
  position = vec3(field(j, "position", what), what + " position");
  velocity = j.contains("velocity") ? vec3(j["velocity"], what + " velocity") : Vec3::Zero();
}

}  // namespace

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError(fmt::format("{}: {}", path, e.what()));
  }
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

Json trajectoryToJson(const SplineTrajectory& traj, std::span<const int> segment_region) {
  Json j;
  j["degree"] = traj.degree();
  Json pts = Json::array();
  for (Eigen::Index k = 0; k < traj.controlPoints().rows(); ++k) pts.push_back(vecJson(traj.controlPoints().row(k)));
  j["control_points"] = std::move(pts);
  j["spans"] = traj.spans();
  j["t_start"] = traj.startTime();
  if (!segment_region.empty()) j["segment_regions"] = std::vector<int>(segment_region.begin(), segment_region.end());
  return j;
}

TrajectoryFile trajectoryFromJson(const Json& j) {
  const std::string what = "trajectory";
  allowKeys(j, what, {"degree", "control_points", "spans", "t_start", "segment_regions"});
  const int degree = integer(field(j, "degree", what), "degree");
  const Json& pts = field(j, "control_points", what);
  if (!pts.is_array()) throw IoError("control_points must be an array");
  Points q(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t k = 0; k < pts.size(); ++k) q.row(static_cast<Eigen::Index>(k)) = vec3(pts[k], "control point").transpose();
  std::vector<double> spans = numbers(field(j, "spans", what), "spans");
  const double t_start = j.contains("t_start") ? number(j["t_start"], "t_start") : 0.0;
  std::vector<int> regions;
  if (j.contains("segment_regions")) {
    if (!j["segment_regions"].is_array()) throw IoError("segment_regions must be an array");
    for (const Json& v : j["segment_regions"]) regions.push_back(integer(v, "segment region"));
  }
  try {
    return TrajectoryFile{SplineTrajectory(degree, std::move(q), std::move(spans), t_start), std::move(regions)};
  } catch (const SplineError& e) {
    throw IoError(std::string("invalid trajectory: ") + e.what());
  }
}

Json corridorToJson(const Corridor& corridor) {
  Json regions = Json::array();
  for (const ConvexRegion& r : corridor.regions) {
    Json hs = Json::array();
    for (const Halfspace& h : r.halfspaces()) hs.push_back({{"n", vecJson(h.normal)}, {"d", h.offset}});
    regions.push_back({{"halfspaces", std::move(hs)}});
  }
  return {{"regions", std::move(regions)}};
}

Corridor corridorFromJson(const Json& j) {
  allowKeys(j, "corridor", {"regions"});
  const Json& regions = field(j, "regions", "corridor");
  if (!regions.is_array()) throw IoError("regions must be an array");
  Corridor corridor;
  for (const Json& r : regions) {
    requireObject(r, "region");
    if (r.contains("min") || r.contains("max")) {
      allowKeys(r, "box region", {"min", "max"});
      const Vec3 lo = vec3(field(r, "min", "box region"), "box min");
      const Vec3 hi = vec3(field(r, "max", "box region"), "box max");
      if ((hi - lo).minCoeff() < 0.0) throw IoError("box max below min");
      corridor.regions.push_back(ConvexRegion::box(lo, hi));
      continue;
    }
    allowKeys(r, "region", {"halfspaces"});
    const Json& hs = field(r, "halfspaces", "region");
    if (!hs.is_array() || hs.empty()) throw IoError("halfspaces must be a non-empty array");
    std::vector<Halfspace> out;
    for (const Json& h : hs) {
      allowKeys(h, "halfspace", {"n", "d"});
      const Vec3 n = vec3(field(h, "n", "halfspace"), "halfspace normal");
      if (n.norm() == 0.0) throw IoError("halfspace normal must be nonzero");
      out.push_back({n, number(field(h, "d", "halfspace"), "halfspace offset")});
    }
    corridor.regions.emplace_back(std::move(out));
  }
  return corridor;
}

ProblemFile problemFromJson(const Json& j, std::optional<std::uint64_t> seed_override) {
  const std::string what = "problem";
  allowKeys(j, what, {"waypoints", "corridor", "map", "start", "goal", "limits", "degree", "rho", "gamma0",
                      "confidence", "momentum", "rho_threshold", "epsilon", "max_iterations", "min_iterations",
                      "segment_length", "guidance"});
  ProblemFile out;
  ProblemSpec& spec = out.spec;
  solverFromJson(j, spec);

  if (j.contains("map")) {
    if (j.contains("corridor") || j.contains("waypoints")) throw IoError("map excludes corridor and waypoints");
    std::uint64_t seed = 1;
    const MapConfig cfg = mapFromJson(j["map"], &seed);
    if (seed_override) seed = *seed_override;
    Scenario sc;
    try {
      if (j.contains("start") != j.contains("goal")) throw IoError("give both start and goal or neither");
      if (j.contains("start")) {
        Vec3 vs, vf;
        endpointFromJson(j["start"], "start", spec.bc.p_start, vs);
        endpointFromJson(j["goal"], "goal", spec.bc.p_goal, vf);
        sc = planScenario(randomMap(seed, mapDims(cfg), cfg.resolution, cfg.density), spec.bc.p_start,
                          spec.bc.p_goal, cfg);
        spec.bc.v_start = vs;
        spec.bc.v_goal = vf;
        spec.waypoints = sc.waypoints;
        spec.corridor = sc.corridor;
      } else {
        sc = makeScenario(seed, cfg);
        const ProblemSpec filled = specFor(sc, spec);
        spec = filled;
      }
    } catch (const FrontendError& e) {
      throw InfeasibleProblem(e.what());
    } catch (const CorridorError& e) {
      throw InfeasibleProblem(e.what());
    }
    out.scenario = std::move(sc);
  } else {
    spec.corridor = corridorFromJson(field(j, "corridor", what));
    endpointFromJson(field(j, "start", what), "start", spec.bc.p_start, spec.bc.v_start);
    endpointFromJson(field(j, "goal", what), "goal", spec.bc.p_goal, spec.bc.v_goal);
    if (j.contains("waypoints")) {
      if (!j["waypoints"].is_array()) throw IoError("waypoints must be an array");
      for (const Json& w : j["waypoints"]) spec.waypoints.push_back(vec3(w, "waypoint"));
    } else {
      spec.waypoints = {spec.bc.p_start, spec.bc.p_goal};
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  return out;
}

BenchConfig benchConfigFromJson(const Json& j) {
  allowKeys(j, "bench config", {"trials", "seed", "map", "gamma0", "rho", "guidance", "limits", "degree",
                                "confidence", "momentum", "rho_threshold", "epsilon", "max_iterations",
                                "min_iterations", "segment_length"});
  BenchConfig cfg;
  if (j.contains("trials")) cfg.trials = integer(j["trials"], "trials");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw IoError("seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("map")) cfg.map = mapFromJson(j["map"], nullptr);
  if (j.contains("gamma0")) cfg.gamma0 = numbers(j["gamma0"], "gamma0");
  if (j.contains("rho")) cfg.rho = numbers(j["rho"], "rho");
  if (j.contains("guidance")) {
    if (!j["guidance"].is_array()) throw IoError("guidance must be an array of booleans");
    cfg.guidance.clear();
    for (const Json& g : j["guidance"]) {
      if (!g.is_boolean()) throw IoError("guidance must be an array of booleans");
      cfg.guidance.push_back(g.get<bool>());
    }
  }
  Json solver = j;
  for (const char* k : {"trials", "seed", "map", "gamma0", "rho", "guidance"}) solver.erase(k);
  solverFromJson(solver, cfg.base);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  return cfg;
}

Json reportToJson(const ViolationReport& r) {
  return {{"sfc_ratio", r.sfc_ratio},   {"vel_ratio", r.vel_ratio},
          {"acc_ratio", r.acc_ratio},   {"jerk_ratio", r.jerk_ratio},
          {"length", r.length},         {"duration", r.duration},
          {"energy", r.energy},         {"energy_integral", r.energy_integral},
          {"samples", r.samples}};
}

std::string samplesCsv(const std::vector<Sample>& samples) {
  std::string out = "t,x,y,z,vx,vy,vz,ax,ay,az,jx,jy,jz\n";
  for (const Sample& s : samples) {
    out += fmt::format("{:.17g}", s.t);
    for (const Vec3* v : {&s.position, &s.velocity, &s.acceleration, &s.jerk}) {
      out += fmt::format(",{:.17g},{:.17g},{:.17g}", v->x(), v->y(), v->z());
    }
    out += '\n';
  }
  return out;
}

}  // namespace storm
