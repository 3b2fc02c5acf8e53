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

// Acceptance run. Prints one PASS/FAIL line per criterion and always exits 0
// so that an honest FAIL is reported without breaking the test suite; the
// unit tests carry the hard assertions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "storm/bspline.hpp"
#include "storm/driver.hpp"
#include "storm/frontend.hpp"
#include "storm/guidance.hpp"
#include "storm/solvers.hpp"
#include "storm/validator.hpp"

namespace {

using namespace storm;
using Clock = std::chrono::steady_clock;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double ms(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

struct Stats {
  double mean = 0.0;
  double se = 0.0;
};

Stats stats(const std::vector<double>& x) {
  Stats s;
  if (x.empty()) return s;
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  if (x.size() < 2) return s;
  double var = 0.0;
  for (double v : x) var += (v - s.mean) * (v - s.mean);
  var /= static_cast<double>(x.size() - 1);
  s.se = std::sqrt(var / static_cast<double>(x.size()));
  return s;
}

// ---------------------------------------------------------------------------
// 1. B-spline properties.

int bsplineSuite() {
  int failures = 0;
  std::mt19937_64 rng(101);
  const auto fail = [&](bool bad) { failures += bad ? 1 : 0; };

  // Uniform cubic reduction.
  {
    const std::vector<double> spans(7, 0.8);
    const auto knots = clampedKnots(spans, 3, 0.0);
    Eigen::Matrix4d uniform;
    uniform << 1, 4, 1, 0, -3, 0, 3, 0, 3, -6, 3, 0, -1, 3, -3, 1;
    uniform /= 6.0;
    // Interior segment, clear of the clamped ends.
    fail((basicMatrix(3, knots, 3 + 3) - uniform).cwiseAbs().maxCoeff() > 1e-12);
  }

  for (int trial = 0; trial < 200; ++trial) {
    const int p = 3 + trial % 3;
    const int segs = 1 + trial % 7;
    const auto rt = oracle::randomTrajectory(rng, p, segs);
    const SplineTrajectory traj(p, rt.q, rt.spans);

    // Endpoint interpolation.
    fail((traj.evaluate(traj.startTime()) - rt.q.row(0).transpose()).norm() > 1e-12);
    fail((traj.evaluate(traj.endTime()) - rt.q.row(rt.q.rows() - 1).transpose()).norm() > 1e-9);

    // Partition of unity: row 0 of each basic matrix sums to 1, others to 0.
    for (int j = 0; j < segs; ++j) {
      const Eigen::VectorXd rowsum = traj.segmentMatrix(j).rowwise().sum();
      fail(std::abs(rowsum[0] - 1.0) > 1e-12);
      fail(rowsum.tail(rowsum.size() - 1).cwiseAbs().maxCoeff() > 1e-9);
    }

    const SplineTrajectory d1 = traj.derivativeSpline(1);
    const SplineTrajectory d2 = traj.derivativeSpline(2);
    const SplineTrajectory d3 = traj.derivativeSpline(3);
    for (int s = 0; s <= 40; ++s) {
      const double t = traj.duration() * s / 40.0;
      const int seg = traj.segmentAt(t);
      // Convex hull of the p + 1 supporting points.
      const Points local = rt.q.middleRows(seg, p + 1);
      const Vec3 x = traj.evaluate(t);
      fail(((x.transpose() - local.colwise().maxCoeff()).maxCoeff() > 1e-12) ||
           ((local.colwise().minCoeff() - x.transpose()).maxCoeff() > 1e-12));
      // Against Cox-de Boor, and the derivative splines against direct derivatives.
      fail((x - oracle::curveAt(rt.q, rt.spans, p, t)).norm() > 1e-9);
      const double scale = 1.0 + traj.evaluate(t, 3).norm();
      fail((d1.evaluate(t) - traj.evaluate(t, 1)).norm() > 1e-9 * scale);
      fail((d2.evaluate(t) - traj.evaluate(t, 2)).norm() > 1e-9 * scale);
      fail((d3.evaluate(t) - traj.evaluate(t, 3)).norm() > 1e-9 * scale);
      fail((traj.evaluate(t, 1) - oracle::curveAt(rt.q, rt.spans, p, t, 1)).norm() > 1e-8 * scale);
    }
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Scenario runs shared by criteria 4-8 and 10.

struct Outcome {
  bool ok = false;
  std::string error;
  RunResult result{SplineTrajectory(3, Points::Zero(4, 3), {1.0}), {}, Termination::kMaxIterations, 0, {}};
  ViolationReport report;
  bool monotone = false;
  double wall_ms = 0.0;
};

Outcome runOne(const Scenario& sc, double gamma0, double rho = 512.0, bool guidance = true,
               double segment_length = 1.0) {
  ProblemSpec base;
  base.gamma0 = gamma0;
  base.rho = rho;
  base.guidance = guidance;
  base.segment_length = segment_length;
  const ProblemSpec spec = specFor(sc, base);
  Outcome out;
  try {
    const auto t0 = Clock::now();
    out.result = run(spec);
    out.wall_ms = ms(t0, Clock::now());
    out.ok = true;
    out.report = check(out.result.trajectory, spec.corridor, out.result.segment_region, spec.limits);
    out.monotone = monotoneTime(out.result, initialTimeCap(spec));
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

bool identical(const RunResult& a, const RunResult& b) {
  const Points& qa = a.trajectory.controlPoints();
  const Points& qb = b.trajectory.controlPoints();
  return qa.rows() == qb.rows() && a.trajectory.spans() == b.trajectory.spans() &&
         std::memcmp(qa.data(), qb.data(), sizeof(double) * qa.size()) == 0 && a.iterations == b.iterations;
}

}  // namespace

int main() {
  std::printf("acceptance run\n");

  // 1 ------------------------------------------------------------------------
  {
    const auto t0 = Clock::now();
    const int failures = bsplineSuite();
    const double elapsed = ms(t0, Clock::now()) / 1000.0;
    report(1, failures == 0 && elapsed < 5.0,
           "b-spline suite: " + std::to_string(failures) + " failed checks, " + std::to_string(elapsed) + " s");
  }

  // 2 ------------------------------------------------------------------------
  {
    std::mt19937_64 rng(102);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto rt = oracle::randomTrajectory(rng, 3, 1 + i % 8);
      const double closed = totalJerkEnergy(rt.q, rt.spans, 3);
      const double quad = oracle::jerkEnergyQuadrature(rt.q, rt.spans, 3, 10000);
      worst = std::max(worst, std::abs(closed - quad) / std::max(quad, 1e-300));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "energy vs quadrature on 100 cubics: worst relative error %.3g", worst);
    report(2, worst <= 1e-6, buf);
  }

  // 3 ------------------------------------------------------------------------
  {
    std::mt19937_64 rng(103);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const int segs = 1 + i % 8;
      const auto rt = oracle::randomTrajectory(rng, 3, segs, 0.4, 1.6, 3.0);
      const double rho = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 16.0 : 512.0);
      const Eigen::VectorXd g = objectiveGradient(SplineTrajectory(3, rt.q, rt.spans), rho);
      const int nq = 3 * static_cast<int>(rt.q.rows());
      Eigen::VectorXd x(nq + segs);
      for (int k = 0; k < rt.q.rows(); ++k) x.segment<3>(3 * k) = rt.q.row(k).transpose();
      for (int j = 0; j < segs; ++j) x[nq + j] = rt.spans[j];
      const auto f = [&](const Eigen::VectorXd& y) {
        oracle::Points q(rt.q.rows(), 3);
        for (int k = 0; k < q.rows(); ++k) q.row(k) = y.segment<3>(3 * k).transpose();
        return oracle::coupledObjective(q, std::vector<double>(y.data() + nq, y.data() + nq + segs), 3, rho);
      };
      const Eigen::VectorXd ref = oracle::centralGradient(f, x, [nq](int k, double) { return k < nq ? 1e-6 : 1e-7; });
      worst = std::max(worst, (g - ref).norm() / ref.norm());
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "gradient vs central differences on 50 instances: worst relative error %.3g", worst);
    report(3, worst <= 1e-4, buf);
  }

  // Desk-scale scenarios.
  const MapConfig map;
  std::vector<Scenario> scenarios;
  int scenario_errors = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    try {
      scenarios.push_back(makeScenario(seed, map));
    } catch (const std::exception&) {
      ++scenario_errors;
    }
  }
  std::printf("scenarios: %zu generated, %d failed\n", scenarios.size(), scenario_errors);

  std::vector<Outcome> g01, g03;
  for (const Scenario& sc : scenarios) g01.push_back(runOne(sc, 0.1));
  for (const Scenario& sc : scenarios) g03.push_back(runOne(sc, 0.3));

  // 4 ------------------------------------------------------------------------
  {
    int errors = 0, unsafe = 0;
    double worst = 0.0;
    for (const auto* set : {&g01, &g03}) {
      for (const Outcome& o : *set) {
        if (!o.ok) {
          ++errors;
          continue;
        }
        if (o.report.sfc_ratio > 0.0) ++unsafe;
        worst = std::max(worst, o.report.sfc_ratio);
      }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "corridor safety on %zu scenarios x 2 decay settings: %d unsafe, %d errors, max sfc_ratio %.3g",
                  scenarios.size(), unsafe, errors, worst);
    report(4, unsafe == 0 && errors == 0 && scenarios.size() == 200, buf);
  }

  // 5 ------------------------------------------------------------------------
  {
    const auto summarize = [](const std::vector<Outcome>& set, double& vel_max, double& acc_max, int& vel_runs,
                              int& acc_runs) {
      vel_max = acc_max = 0.0;
      vel_runs = acc_runs = 0;
      for (const Outcome& o : set) {
        if (!o.ok) continue;
        vel_max = std::max(vel_max, o.report.vel_ratio);
        acc_max = std::max(acc_max, o.report.acc_ratio);
        vel_runs += o.report.vel_ratio > 0.0;
        acc_runs += o.report.acc_ratio > 0.0;
      }
    };
    double v1, a1, v3, a3;
    int vr1, ar1, vr3, ar3;
    summarize(g01, v1, a1, vr1, ar1);
    summarize(g03, v3, a3, vr3, ar3);
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "gamma0=0.1: vel max %.3g%% (%d runs), acc max %.3g%% (%d runs); "
                  "gamma0=0.3: vel max %.3g%% (%d runs), acc max %.3g%% (%d runs)",
                  100 * v1, vr1, 100 * a1, ar1, 100 * v3, vr3, 100 * a3, ar3);
    report(5, v1 == 0.0 && a1 == 0.0 && v3 <= 0.006 && a3 == 0.0, buf);
  }

  // 6 ------------------------------------------------------------------------
  {
    int monotone = 0, capped = 0, converged = 0, ok = 0;
    int early = 0;
    for (const Outcome& o : g01) {
      if (!o.ok) continue;
      ++ok;
      monotone += o.monotone;
      capped += o.result.iterations > 50;
      converged += o.result.termination == Termination::kConverged;
      early += o.result.termination == Termination::kEarlyStop;
    }
    const double rate = ok > 0 ? static_cast<double>(converged) / static_cast<double>(scenarios.size()) : 0.0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "gamma0=0.1: monotone %d/%d, over 50 iterations %d, converged %d/%zu (%.1f%%), early stops %d",
                  monotone, ok, capped, converged, scenarios.size(), 100 * rate, early);
    report(6, monotone == ok && capped == 0 && ok == static_cast<int>(scenarios.size()) && rate >= 0.95, buf);
  }

  // 7 ------------------------------------------------------------------------
  {
    constexpr int kTrials = 50;
    std::vector<Outcome> g02;
    for (int i = 0; i < kTrials; ++i) g02.push_back(runOne(scenarios[i], 0.2));
    const std::vector<const std::vector<Outcome>*> sets{&g01, &g02, &g03};
    // Trials where every setting produced a trajectory, so the gaps are paired.
    std::vector<int> used;
    for (int i = 0; i < kTrials; ++i) {
      if (g01[i].ok && g02[i].ok && g03[i].ok) used.push_back(i);
    }
    const auto metric = [](const Outcome& o, int which) {
      if (which == 0) return o.result.trajectory.duration();
      if (which == 1) return static_cast<double>(o.result.iterations);
      return o.report.energy;
    };
    bool pass = used.size() >= 20;
    std::string detail = std::to_string(used.size()) + " paired trials;";
    const char* names[] = {"duration", "iterations", "energy"};
    for (int which = 0; which < 3; ++which) {
      std::vector<double> means;
      for (const auto* set : sets) {
        std::vector<double> v;
        for (int i : used) v.push_back(metric((*set)[i], which));
        means.push_back(stats(v).mean);
      }
      // Energy should rise with gamma0, the others fall.
      const double sign = which == 2 ? 1.0 : -1.0;
      for (int a = 0; a + 1 < 3; ++a) {
        std::vector<double> diff;
        for (int i : used) diff.push_back(sign * (metric((*sets[a + 1])[i], which) - metric((*sets[a])[i], which)));
        const Stats d = stats(diff);
        pass = pass && d.mean > d.se;
        char buf[160];
        std::snprintf(buf, sizeof buf, " %s %.4g->%.4g (gap %.3g, se %.3g);", names[which], means[a], means[a + 1],
                      sign * d.mean, d.se);
        detail += buf;
      }
    }
    report(7, pass, detail);
  }

  // 8 ------------------------------------------------------------------------
  {
    constexpr int kTrials = 50;
    int same = 0, compared = 0;
    for (double rho : {128.0, 512.0}) {
      for (int i = 0; i < kTrials; ++i) {
        const Outcome on = runOne(scenarios[i], 0.1, rho, true);
        const Outcome off = runOne(scenarios[i], 0.1, rho, false);
        ++compared;
        if (on.ok == off.ok && (!on.ok || identical(on.result, off.result))) ++same;
      }
    }
    std::vector<double> d_guided, d_plain, e_guided, e_plain;
    for (int i = 0; i < kTrials; ++i) {
      const Outcome on = runOne(scenarios[i], 0.1, 1.0, true);
      const Outcome off = runOne(scenarios[i], 0.1, 1.0, false);
      if (!on.ok || !off.ok) continue;
      d_guided.push_back(on.result.trajectory.duration());
      d_plain.push_back(off.result.trajectory.duration());
      e_guided.push_back(on.report.energy);
      e_plain.push_back(off.report.energy);
    }
    const double dg = stats(d_guided).mean, dp = stats(d_plain).mean;
    const double eg = stats(e_guided).mean, ep = stats(e_plain).mean;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "rho in {128, 512}: %d/%d identical; rho=1 over %zu trials: energy guided %.4g vs plain %.4g, "
                  "duration guided %.4g vs plain %.4g",
                  same, compared, d_guided.size(), eg, ep, dg, dp);
    report(8, same == compared && eg < ep && dg >= dp, buf);
  }

  // 9 ------------------------------------------------------------------------
  {
    std::mt19937_64 rng(109);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> nvar(2, 8);
    const auto matrix = [&](int r, int c) {
      Eigen::MatrixXd m(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = g(rng);
      return m;
    };
    const auto vec = [&](int n, double lo, double hi) {
      Eigen::VectorXd v(n);
      for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * u(rng);
      return v;
    };
    int qp_bad = 0, lp_bad = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = nvar(rng);
      QpProblem p;
      const Eigen::MatrixXd m = matrix(n, n);
      p.H = m.transpose() * m + 0.1 * Eigen::MatrixXd::Identity(n, n);
      p.q = 3.0 * vec(n, -1, 1);
      const Eigen::VectorXd x0 = vec(n, -1, 1);
      p.G = matrix(std::min(8, n + 2), n);
      p.h = p.G * x0 + vec(static_cast<int>(p.G.rows()), 0.0, 0.5);
      const int eq = trial % 3 == 0 ? 1 : 0;
      p.A = matrix(eq, n);
      p.b = p.A * x0;
      const auto ref = oracle::bruteForceQp(p.H, p.q, p.G, p.h, p.A, p.b);
      const SolveResult r = solveQp(p);
      if (!ref || !r.optimal()) {
        ++qp_bad;
        continue;
      }
      const double err = (r.x - ref->x).cwiseAbs().maxCoeff() / std::max(1.0, ref->x.cwiseAbs().maxCoeff());
      worst = std::max(worst, err);
      qp_bad += err > 1e-7;
    }
    for (int trial = 0; trial < 100; ++trial) {
      const int n = nvar(rng);
      const int rows = std::min(8, n + 1);
      LpProblem p;
      p.c = vec(n, -1.0, 2.0);
      p.lower = vec(n, 0.0, 1.0);
      const Eigen::VectorXd x0 = p.lower + vec(n, 0.1, 1.0);
      p.G = Eigen::MatrixXd(rows + 1, n);
      p.G.topRows(rows) = matrix(rows, n);
      p.G.row(rows).setOnes();
      p.h = p.G * x0 + vec(rows + 1, 0.0, 0.5);
      const auto ref = oracle::vertexEnumerationLp(p.c, p.G, p.h, p.lower);
      const SolveResult r = solveLp(p);
      if (!ref || !r.optimal()) {
        ++lp_bad;
        continue;
      }
      const double err = std::abs(r.objective - ref->objective) / std::max(1.0, std::abs(ref->objective));
      const double infeas = std::max((p.G * r.x - p.h).maxCoeff(), (p.lower - r.x).maxCoeff());
      worst = std::max(worst, std::max(err, infeas));
      lp_bad += err > 1e-7 || infeas > 1e-7;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "100 QP + 100 LP vs enumeration: %d QP and %d LP mismatches, worst error %.3g",
                  qp_bad, lp_bad, worst);
    report(9, qp_bad == 0 && lp_bad == 0, buf);
  }

  // 10 -----------------------------------------------------------------------
  {
    // Segment length chosen so the even layout has about 30 control points.
    // Runs are deterministic, so the best of three repeats only strips
    // scheduler noise from the timing.
    std::vector<double> times;
    std::vector<int> points;
    for (int i = 0; i < 50; ++i) {
      const double length = polylineLength(scenarios[i].waypoints);
      const Outcome o = runOne(scenarios[i], 0.1, 512.0, true, length / 27.0);
      if (!o.ok) continue;
      double best = o.wall_ms;
      for (int rep = 0; rep < 2; ++rep) {
        best = std::min(best, runOne(scenarios[i], 0.1, 512.0, true, length / 27.0).wall_ms);
      }
      times.push_back(best);
      points.push_back(o.result.trajectory.lastIndex() + 1);
    }
    std::sort(times.begin(), times.end());
    std::sort(points.begin(), points.end());
    const double median = times.empty() ? 0.0 : times[times.size() / 2];
    const int median_points = points.empty() ? 0 : points[points.size() / 2];
    char buf[200];
    std::snprintf(buf, sizeof buf, "median optimize time %.2f ms over %zu runs (best of 3 each), median %d control points (soft target 20 ms)",
                  median, times.size(), median_points);
    report(10, !times.empty() && median <= 20.0, buf);
  }
  return 0;
}
