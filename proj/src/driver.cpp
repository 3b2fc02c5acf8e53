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

#include "storm/driver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "storm/guidance.hpp"

namespace storm {

void ProblemSpec::validate() const {
  limits.validate();
  if (waypoints.size() < 2) throw std::invalid_argument("need at least two waypoints");
  if ((waypoints.front() - bc.p_start).norm() > 1e-9) throw std::invalid_argument("first waypoint must equal the start");
  if ((waypoints.back() - bc.p_goal).norm() > 1e-9) throw std::invalid_argument("last waypoint must equal the goal");
  if (degree < 3) throw std::invalid_argument("degree must be at least 3");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw std::invalid_argument("gamma0 must lie in (0, 1)");
  if (!(confidence >= 0.0)) throw std::invalid_argument("confidence must be non-negative");
  if (!(momentum >= 0.0 && momentum <= 1.0)) throw std::invalid_argument("momentum must lie in [0, 1]");
  if (!(min_iterations >= 1 && max_iterations > min_iterations)) {
    throw std::invalid_argument("need max_iterations > min_iterations >= 1");
  }
  if (!(segment_length > 0.0)) throw std::invalid_argument("segment_length must be positive");
}

double polylineLength(const std::vector<Vec3>& waypoints) {
  double len = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) len += (waypoints[i] - waypoints[i - 1]).norm();
  return len;
}

double initialTimeCap(const ProblemSpec& spec) {
  return polylineLength(spec.waypoints) / (0.5 * spec.limits.v_max);
}

std::vector<int> allocateSegments(const std::vector<double>& region_lengths, int interior_floor,
                                  double segment_length) {
  const int regions = static_cast<int>(region_lengths.size());
  std::vector<int> out(regions);
  for (int r = 0; r < regions; ++r) {
    const int floor_count = regions == 1 ? 1 : (r == 0 || r == regions - 1 ? 2 : interior_floor);
    const int wanted = static_cast<int>(std::lround(region_lengths[r] / segment_length));
    out[r] = std::max(floor_count, wanted);
  }
  return out;
}

namespace {

// A point inside both regions: the first waypoint in the overlap, otherwise
// the center of the largest inscribed ball.
Vec3 junctionPoint(const ConvexRegion& a, const ConvexRegion& b, const std::vector<Vec3>& waypoints) {
  for (const Vec3& w : waypoints) {
    if (contains(a, w, 0.0) && contains(b, w, 0.0)) return w;
  }
  const auto probe = probeIntersection(a, b);
  if (!probe) throw InfeasibleProblem("corridor gap");
  return probe->center;
}

// Lays out control points for a segment-to-region map. Points supported by
// one region go evenly along that region's anchor line, points on two regions
// sit on their junction, points on more regions at their common interior.
// Returns false when such a common interior does not exist.
bool layoutPoints(const std::vector<ConvexRegion>& regions, const std::vector<Vec3>& anchors,
                  const std::vector<int>& segment_region, int degree, Points& points) {
  const int num_regions = static_cast<int>(regions.size());
  const int segments = static_cast<int>(segment_region.size());
  const int n = segments - 1 + degree;
  std::vector<std::vector<int>> pure(num_regions);
  points = Points::Zero(n + 1, 3);
  for (int k = 0; k <= n; ++k) {
    const int lo = segment_region[std::max(0, k - degree)];
    const int hi = segment_region[std::min(k, segments - 1)];
    if (lo == hi) {
      pure[lo].push_back(k);
    } else if (hi == lo + 1) {
      points.row(k) = anchors[hi].transpose();
    } else {
      std::vector<const ConvexRegion*> touched;
      for (int r = lo; r <= hi; ++r) touched.push_back(&regions[r]);
      const auto probe = probeIntersection(touched);
      if (!probe) return false;
      points.row(k) = probe->center.transpose();
    }
  }
  for (int r = 0; r < num_regions; ++r) {
    const int count = static_cast<int>(pure[r].size());
    const int skip_start = r == 0 ? 0 : 1;
    const int skip_end = r == num_regions - 1 ? 0 : 1;
    const int slots = count - 1 + skip_start + skip_end;
    for (int i = 0; i < count; ++i) {
      const double f = slots > 0 ? static_cast<double>(i + skip_start) / slots : 0.0;
      points.row(pure[r][i]) = ((1.0 - f) * anchors[r] + f * anchors[r + 1]).transpose();
    }
  }
  return true;
}


// Fallback layout anchored on region junctions, used when no evenly spaced
// layout fits the corridor.
InitialGuess junctionGuess(const ProblemSpec& spec) {
  const int p = spec.degree;
  InitialGuess guess;
  const auto& regions = spec.corridor.regions;
  const int num_regions = static_cast<int>(regions.size());

  // Anchors: start, one junction per consecutive pair, goal.
  std::vector<Vec3> anchors{spec.bc.p_start};
  for (int r = 0; r + 1 < num_regions; ++r) {
    guess.junctions.push_back(junctionPoint(regions[r], regions[r + 1], spec.waypoints));
    anchors.push_back(guess.junctions.back());
  }
  anchors.push_back(spec.bc.p_goal);
  std::vector<double> region_lengths(num_regions);
  for (int r = 0; r < num_regions; ++r) region_lengths[r] = (anchors[r + 1] - anchors[r]).norm();

  // Short regions first get a single segment; if some control point would
  // then touch regions without a common interior, every interior region gets
  // `degree` segments so no point touches more than two.
  std::vector<int> counts;
  bool placed = false;
  for (int floor_count : {1, p}) {
    counts = allocateSegments(region_lengths, floor_count, spec.segment_length);
    guess.segment_region.clear();
    for (int r = 0; r < num_regions; ++r) guess.segment_region.insert(guess.segment_region.end(), counts[r], r);
    if (layoutPoints(regions, anchors, guess.segment_region, p, guess.points)) {
      placed = true;
      break;
    }
  }
  if (!placed) throw InfeasibleProblem("assignment infeasible");

  // Each region's time is proportional to its anchor length (floored so no
  // region collapses), split evenly over its segments.
  const double cap = initialTimeCap(spec);
  const double total_length = std::accumulate(region_lengths.begin(), region_lengths.end(), 0.0);
  const double floor_length = 0.1 * std::min(spec.segment_length, total_length / num_regions);
  double weight_sum = 0.0;
  std::vector<double> weight(num_regions);
  for (int r = 0; r < num_regions; ++r) {
    weight[r] = std::max(region_lengths[r], floor_length);
    weight_sum += weight[r];
  }
  for (int j = 0; j < static_cast<int>(guess.segment_region.size()); ++j) {
    const int r = guess.segment_region[j];
    guess.spans.push_back(cap * weight[r] / weight_sum / counts[r]);
  }
  return guess;
}

Points evenPoints(const std::vector<Vec3>& waypoints, int count) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    cumulative.push_back(cumulative.back() + (waypoints[i] - waypoints[i - 1]).norm());
  }
  const double total = cumulative.back();
  Points points(count, 3);
  std::size_t seg = 0;
  for (int k = 0; k < count; ++k) {
    const double s = count > 1 ? total * k / (count - 1) : 0.0;
    while (seg + 2 < waypoints.size() && cumulative[seg + 1] < s) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double f = len > 0.0 ? std::clamp((s - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    points.row(k) = ((1.0 - f) * waypoints[seg] + f * waypoints[seg + 1]).transpose();
  }
  return points;
}

// Parameter interval of a + t (b - a), t in [0, 1], inside all halfspaces.
std::optional<std::pair<double, double>> clip(const Vec3& a, const Vec3& b, const ConvexRegion& u,
                                              const ConvexRegion& v) {
  double lo = 0.0, hi = 1.0;
  for (const ConvexRegion* region : {&u, &v}) {
    for (const Halfspace& hs : region->halfspaces()) {
      const double base = hs.normal.dot(a) - hs.offset;
      const double rate = hs.normal.dot(b - a);
      if (std::abs(rate) < 1e-15) {
        if (base > 1e-9) return std::nullopt;
      } else if (rate > 0.0) {
        hi = std::min(hi, -base / rate);
      } else {
        lo = std::max(lo, -base / rate);
      }
    }
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

// Arc length where the path hands over from region r - 1 to r: the middle
// of its first stretch through their overlap after `after`.
std::optional<double> handover(const std::vector<Vec3>& waypoints, const std::vector<double>& cumulative,
                               const ConvexRegion& prev, const ConvexRegion& next, double after) {
  std::optional<double> enter, leave;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double len = cumulative[i + 1] - cumulative[i];
    const auto span = clip(waypoints[i], waypoints[i + 1], prev, next);
    const double s_lo = span ? cumulative[i] + span->first * len : 0.0;
    const double s_hi = span ? cumulative[i] + span->second * len : 0.0;
    if (span && s_hi >= after) {
      if (!enter) enter = std::max(s_lo, after);
      if (leave && s_lo > *leave + 1e-9) break;
      leave = s_hi;
    } else if (enter) {
      break;
    }
  }
  if (!enter) return std::nullopt;
  return 0.5 * (*enter + *leave);
}

// Segment-to-region map for evenly spaced points: each segment takes the
// region whose stretch of the path holds the middle of its support.
std::optional<std::vector<int>> evenAssignment(const std::vector<ConvexRegion>& regions,
                                               const std::vector<double>& handovers, double length, int segments,
                                               int degree, const std::array<Vec3, 4>& pinned) {
  const int n = segments + degree - 1;
  const int num_regions = static_cast<int>(regions.size());
  std::vector<int> map(segments);
  for (int j = 0; j < segments; ++j) {
    const double s = n > 0 ? length * (j + 0.5 * degree) / n : 0.0;
    int r = 0;
    while (r + 1 < num_regions && handovers[r] <= s) ++r;
    map[j] = r;
  }
  // A region may receive no segment as long as every control point still
  // has a common interior in the regions it is held to.
  std::map<std::pair<int, int>, bool> checked;
  for (int k = 0; k <= n; ++k) {
    const int first = std::max(0, k - degree);
    const int last = std::min(k, segments - 1);
    std::vector<const ConvexRegion*> touched;
    for (int j = first; j <= last; ++j) {
      if (j == first || map[j] != map[j - 1]) touched.push_back(&regions[map[j]]);
    }
    const int slot = k < 2 ? k : (k > n - 2 ? 4 - (n - k) : -1);
    if (slot >= 0) {
      for (const ConvexRegion* region : touched) {
        if (!contains(*region, pinned[slot], 1e-9)) return std::nullopt;
      }
    }
    if (touched.size() < 2) continue;
    auto [it, inserted] = checked.try_emplace({map[first], map[last]}, true);
    if (inserted) it->second = probeIntersection(touched).has_value();
    if (!it->second) return std::nullopt;
  }
  return map;
}

}  // namespace

InitialGuess initialize(const ProblemSpec& spec) {
  spec.validate();
  const int p = spec.degree;
  const double length = polylineLength(spec.waypoints);
  InitialGuess guess;
  if (length < 1e-9) {
    guess.degenerate = true;
    guess.points = Points::Zero(p + 1, 3);
    for (int k = 0; k <= p; ++k) guess.points.row(k) = spec.bc.p_start.transpose();
    guess.spans = {1.0};
    guess.segment_region = {0};
    return guess;
  }
  const auto& regions = spec.corridor.regions;
  if (regions.empty()) throw InfeasibleProblem("corridor has no regions");

  // Evenly spaced points along the waypoints with uniform spans; the
  // sampling is refined until every region receives a segment.
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < spec.waypoints.size(); ++i) {
    cumulative.push_back(cumulative.back() + (spec.waypoints[i] - spec.waypoints[i - 1]).norm());
  }
  std::vector<double> handovers;
  for (std::size_t r = 1; r < regions.size(); ++r) {
    const auto s = handover(spec.waypoints, cumulative, regions[r - 1], regions[r],
                            handovers.empty() ? 0.0 : handovers.back());
    if (!s) break;
    handovers.push_back(*s);
  }
  if (handovers.size() + 1 == regions.size()) {
    const double cap = initialTimeCap(spec);
    int segments = std::max(1, static_cast<int>(std::lround(length / spec.segment_length)));
    for (int attempt = 0; attempt < 5; ++attempt) {
      const double span = cap / segments;
      // The boundary states pin the first two and last two points.
      const std::array<Vec3, 4> pinned{spec.bc.p_start, spec.bc.p_start + spec.bc.v_start * span / p,
                                       spec.bc.p_goal - spec.bc.v_goal * span / p, spec.bc.p_goal};
      if (auto map = evenAssignment(regions, handovers, length, segments, p, pinned)) {
        guess.points = evenPoints(spec.waypoints, segments + p);
        guess.spans.assign(segments, span);
        guess.segment_region = std::move(*map);
        return guess;
      }
      segments = segments * 3 / 2 + 1;
    }
  }
  return junctionGuess(spec);
}

std::string toString(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kMaxIterations: return "max_iterations";
    case Termination::kEarlyStop: return "early_stop";
    case Termination::kDegenerate: return "degenerate";
  }
  return "unknown";
}

std::string traceLine(const IterationTrace& rec) {
  return fmt::format(
      "{{\"k\":{},\"gamma\":{:.17g},\"total_time\":{:.17g},\"energy\":{:.17g},\"objective\":{:.17g},"
      "\"span_change\":{:.17g},\"qp_status\":\"{}\",\"lp_status\":\"{}\",\"qp_iterations\":{},"
      "\"lp_iterations\":{},\"guided\":{}}}",
      rec.k, rec.gamma, rec.total_time, rec.energy, rec.objective, rec.span_change, toString(rec.qp_status),
      toString(rec.lp_status), rec.qp_iterations, rec.lp_iterations, rec.guided ? "true" : "false");
}

RunResult run(const ProblemSpec& spec, std::ostream* trace_out) {
  const InitialGuess init = initialize(spec);
  const int p = spec.degree;
  if (init.degenerate) {
    return RunResult{SplineTrajectory(p, init.points, init.spans), init.segment_region, Termination::kDegenerate, 0, {}};
  }
  try {
    validateCorridor(spec.corridor, spec.bc.p_start, spec.bc.p_goal);
  } catch (const CorridorError& e) {
    throw InfeasibleProblem(e.what());
  }

  // The segment map may skip regions; constrain against the ones it uses.
  const int n = static_cast<int>(init.points.rows()) - 1;
  Corridor used;
  used.overlap_guaranteed = spec.corridor.overlap_guaranteed;
  std::vector<int> local_map;
  int last_region = -1;
  for (int r : init.segment_region) {
    if (r != last_region) {
      used.regions.push_back(spec.corridor.regions[r]);
      last_region = r;
    }
    local_map.push_back(static_cast<int>(used.regions.size()) - 1);
  }
  PointConstraintSet constraints;
  try {
    constraints = assignRegions(used, n, p, local_map);
  } catch (const CorridorError& e) {
    throw InfeasibleProblem(e.what());
  }

  Points q_prev = init.points;
  std::vector<double> t_prev = init.spans;
  GuidanceState guidance;
  guidance.momentum = spec.momentum;
  guidance.confidence = spec.confidence;
  guidance.threshold = spec.rho_threshold;
  const bool guided = spec.guidance && guidance.active(spec.rho);

  std::vector<IterationTrace> trace;
  auto finish = [&](const Points& q, const std::vector<double>& t, Termination why, int k) {
    return RunResult{SplineTrajectory(p, q, t), init.segment_region, why, k, std::move(trace)};
  };

  for (int k = 1; k <= spec.max_iterations; ++k) {
    IterationTrace rec;
    rec.k = k;
    rec.gamma = decayFactor(k, spec.gamma0);
    rec.guided = guided;

    GuidanceTerms terms;
    if (guided) {
      updateGuidance(guidance, SplineTrajectory(p, q_prev, t_prev), spec.rho);
      terms = getGuidance(guidance, spec.rho);
    }

    const CpsResult cps = optimizeControlPoints(n, p, t_prev, constraints, spec.bc, terms.position);
    rec.qp_status = cps.status;
    rec.qp_iterations = cps.iterations;
    if (!cps.optimal()) {
      if (k == 1) throw InfeasibleProblem("infeasible problem");
      rec.lp_status = SolveStatus::kInfeasible;
      trace.push_back(rec);
      if (trace_out) *trace_out << traceLine(rec) << '\n';
      return finish(q_prev, t_prev, Termination::kEarlyStop, k - 1);
    }

    const double cap = std::accumulate(t_prev.begin(), t_prev.end(), 0.0);
    const KnotResult knots = optimizeKnots(cps.points, t_prev, p, spec.limits, rec.gamma, cap, terms.spans);
    rec.lp_status = knots.status;
    rec.lp_iterations = knots.iterations;

    std::vector<double> t_next = t_prev;
    bool test_convergence = true;
    if (!knots.optimal()) {
      if (k > spec.min_iterations) {
        rec.total_time = cap;
        trace.push_back(rec);
        if (trace_out) *trace_out << traceLine(rec) << '\n';
        return finish(q_prev, t_prev, Termination::kEarlyStop, k - 1);
      }
      // Keep the spans; an unchanged T must not count as convergence.
      test_convergence = false;
    } else {
      t_next = knots.spans;
    }

    double change = 0.0;
    for (std::size_t j = 0; j < t_next.size(); ++j) change += std::abs(t_next[j] - t_prev[j]);
    const SplineTrajectory current(p, cps.points, t_next);
    rec.span_change = change;
    rec.total_time = current.duration();
    rec.energy = totalJerkEnergy(current);
    rec.objective = coupledObjective(current, spec.rho);
    trace.push_back(rec);
    if (trace_out) *trace_out << traceLine(rec) << '\n';

    q_prev = cps.points;
    t_prev = std::move(t_next);
    if (test_convergence && change < spec.epsilon) return finish(q_prev, t_prev, Termination::kConverged, k);
  }
  return finish(q_prev, t_prev, Termination::kMaxIterations, spec.max_iterations);
}

}  // namespace storm
