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

// storm optimize | check | bench | sample
//
// Exit codes: 0 success, 1 input or I/O error, 2 infeasible problem,
// 3 constraint violations found by check.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "storm/driver.hpp"
#include "storm/frontend.hpp"
#include "storm/io.hpp"
#include "storm/validator.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma0;
  std::optional<double> rho;
  std::optional<double> epsilon;
};

void addOverrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Map seed for map-based problems");
  cmd->add_option("--gamma0", o.gamma0, "Initial decay factor");
  cmd->add_option("--rho", o.rho, "Temporal weight");
  cmd->add_option("--epsilon", o.epsilon, "Convergence tolerance on the span change (s)");
}

storm::ProblemFile loadProblem(const std::string& path, const Overrides& o) {
  storm::ProblemFile pf = storm::problemFromJson(storm::readJsonFile(path), o.seed);
  if (o.gamma0) pf.spec.gamma0 = *o.gamma0;
  if (o.rho) pf.spec.rho = *o.rho;
  if (o.epsilon) pf.spec.epsilon = *o.epsilon;
  try {
    pf.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw storm::IoError(e.what());
  }
  return pf;
}

bool traceFromEnv() {
  const char* v = std::getenv("STORM_TRACE");
  return v != nullptr && std::string(v) == "1";
}

int cmdOptimize(const std::string& problem, const std::string& out, std::string csv, std::string trace_path,
                double dt, const Overrides& o) {
  const storm::ProblemFile pf = loadProblem(problem, o);
  if (trace_path.empty() && traceFromEnv()) trace_path = out + ".trace.jsonl";
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw storm::IoError("cannot write " + trace_path);
  }
  const storm::RunResult res = storm::run(pf.spec, trace.is_open() ? &trace : nullptr);
  storm::writeTextFile(out, storm::trajectoryToJson(res.trajectory, res.segment_region).dump(2) + "\n");
  if (csv.empty()) csv = out + ".csv";
  if (dt <= 0.0) dt = res.trajectory.duration() / 5000.0;
  storm::writeTextFile(csv, storm::samplesCsv(storm::sample(res.trajectory, dt)));
  std::cerr << fmt::format("{} after {} iterations: duration {:.6g} s, energy {:.6g}\n",
                           storm::toString(res.termination), res.iterations, res.trajectory.duration(),
                           storm::totalJerkEnergy(res.trajectory));
  return 0;
}

int cmdCheck(const std::string& traj_path, const std::string& problem, double dt, double tol,
             const Overrides& o) {
  const storm::TrajectoryFile tf = storm::trajectoryFromJson(storm::readJsonFile(traj_path));
  const storm::ProblemFile pf = loadProblem(problem, o);
  std::vector<int> regions = tf.segment_region;
  if (regions.empty()) {
    regions = storm::evenSegmentMap(tf.trajectory.numSegments(), static_cast<int>(pf.spec.corridor.regions.size()));
  }
  const storm::ViolationReport rep = storm::check(tf.trajectory, pf.spec.corridor, regions, pf.spec.limits, dt, tol);
  std::cout << storm::reportToJson(rep).dump(2) << "\n";
  return rep.clean() ? 0 : 3;
}

int cmdBench(const std::string& config, const std::string& out, const std::string& trace_dir,
             const Overrides& o) {
  storm::BenchConfig cfg = storm::benchConfigFromJson(storm::readJsonFile(config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.gamma0) cfg.gamma0 = {*o.gamma0};
  if (o.rho) cfg.rho = {*o.rho};
  if (o.epsilon) cfg.base.epsilon = *o.epsilon;
  cfg.trace_dir = trace_dir;
  const std::vector<storm::BenchRow> rows = storm::runBenchmark(cfg);
  std::string csv = storm::benchCsvHeader() + "\n";
  std::vector<double> wall;
  for (const storm::BenchRow& r : rows) {
    csv += storm::benchCsvRow(r) + "\n";
    if (r.status == "ok") wall.push_back(r.wall_ms);
  }
  storm::writeTextFile(out, csv);
  if (!wall.empty()) {
    std::sort(wall.begin(), wall.end());
    std::cerr << fmt::format("{} runs, median optimize time {:.3f} ms\n", rows.size(), wall[wall.size() / 2]);
  }
  return 0;
}

int cmdSample(const std::string& traj_path, const std::string& out, double dt) {
  const storm::TrajectoryFile tf = storm::trajectoryFromJson(storm::readJsonFile(traj_path));
  if (dt <= 0.0) dt = tf.trajectory.duration() / 5000.0;
  const std::string csv = storm::samplesCsv(storm::sample(tf.trajectory, dt));
  if (out.empty() || out == "-") std::cout << csv;
  else storm::writeTextFile(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline trajectory optimizer over safe flight corridors"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string problem, out, csv, trace, traj, config, trace_dir;
  double dt = 0.0;
  double tol = storm::kDefaultCheckTol;

  CLI::App* optimize = app.add_subcommand("optimize", "Optimize a trajectory for a problem file");
  optimize->add_option("problem", problem, "Problem JSON")->required();
  optimize->add_option("-o,--out", out, "Trajectory JSON output")->required();
  optimize->add_option("--csv", csv, "Sampled CSV output (default: <out>.csv)");
  optimize->add_option("--trace", trace, "Iteration trace output (JSON lines)");
  optimize->add_option("--dt", dt, "Sampling step for the CSV (default: duration / 5000)");
  addOverrides(optimize, overrides);

  CLI::App* check = app.add_subcommand("check", "Measure constraint violations of a trajectory");
  check->add_option("trajectory", traj, "Trajectory JSON")->required();
  check->add_option("problem", problem, "Problem JSON")->required();
  check->add_option("--dt", dt, "Sampling step (default: duration / 5000)");
  check->add_option("--tol", tol, "Violation tolerance");
  addOverrides(check, overrides);

  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark sweep");
  bench->add_option("--config", config, "Bench config JSON")->required();
  bench->add_option("-o,--out", out, "Results CSV")->required();
  bench->add_option("--trace-dir", trace_dir, "Directory for per-run traces");
  addOverrides(bench, overrides);

  CLI::App* sample = app.add_subcommand("sample", "Sample a trajectory to CSV");
  sample->add_option("trajectory", traj, "Trajectory JSON")->required();
  sample->add_option("-o,--out", out, "CSV output (default: stdout)");
  sample->add_option("--dt", dt, "Sampling step (default: duration / 5000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*optimize) return cmdOptimize(problem, out, csv, trace, dt, overrides);
    if (*check) return cmdCheck(traj, problem, dt, tol, overrides);
    if (*bench) return cmdBench(config, out, trace_dir, overrides);
    if (*sample) return cmdSample(traj, out, dt);
  } catch (const storm::InfeasibleProblem& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
