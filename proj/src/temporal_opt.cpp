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

#include "storm/temporal_opt.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <stdexcept>

namespace storm {

void KinodynamicLimits::validate() const {
  if (!(v_max > 0.0 && a_max > 0.0 && j_max > 0.0)) {
    throw std::invalid_argument("kinodynamic limits must be positive");
  }
}

double decayFactor(int k, double gamma0) {
  if (k < 1) throw std::invalid_argument("decay iteration index starts at 1");
  return gamma0 / std::sqrt(static_cast<double>(k));
}

namespace {

// Spans first..last clipped to the valid range.
std::vector<int> window(int first, int last, int num_spans) {
  std::vector<int> out;
  for (int j = std::max(first, 0); j <= std::min(last, num_spans - 1); ++j) out.push_back(j);
  return out;
}

// Rows for differences of `points` (a degree-`degree` level):
// sum over spans i-degree+1..i >= degree |P_{i+1} - P_i|_inf / limit.
std::vector<WindowRow> differenceRows(const Points& points, int degree, int num_spans, double limit) {
  std::vector<WindowRow> rows;
  const int count = static_cast<int>(points.rows()) - 1;
  rows.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    WindowRow row;
    row.spans = window(i - degree + 1, i, num_spans);
    row.bound = static_cast<double>(degree) *
                (points.row(i + 1) - points.row(i)).cwiseAbs().maxCoeff() / limit;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<WindowRow> velocityRows(const Points& control_points, int degree, int num_spans,
                                    const KinodynamicLimits& limits) {
  return differenceRows(control_points, degree, num_spans, limits.v_max);
}

std::vector<WindowRow> accelRows(const Points& control_points, std::span<const double> spans_k,
                                 int degree, const KinodynamicLimits& limits) {
  const Points velocity = differentiate(control_points, spans_k, degree);
  return differenceRows(velocity, degree - 1, static_cast<int>(spans_k.size()), limits.a_max);
}

std::vector<WindowRow> jerkRows(const Points& control_points, std::span<const double> spans_k,
                                int degree, const KinodynamicLimits& limits) {
  const Points velocity = differentiate(control_points, spans_k, degree);
  const Points accel = differentiate(velocity, spans_k, degree - 1);
  return differenceRows(accel, degree - 2, static_cast<int>(spans_k.size()), limits.j_max);
}

Eigen::VectorXd trustLowerBounds(std::span<const double> spans_k, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("decay factor must lie in (0, 1)");
  Eigen::VectorXd lower(static_cast<Eigen::Index>(spans_k.size()));
  for (std::size_t j = 0; j < spans_k.size(); ++j) lower[static_cast<Eigen::Index>(j)] = (1.0 - gamma) * spans_k[j];
  return lower;
}

TemporalLp assembleLp(const Points& control_points, std::span<const double> spans_k, int degree,
                      const KinodynamicLimits& limits, double gamma, double t_cap,
                      const Eigen::VectorXd& guidance) {
  limits.validate();
  if (degree < 3) throw std::invalid_argument("span LP needs degree >= 3");
  const int num_spans = static_cast<int>(spans_k.size());
  if (control_points.rows() != num_spans + degree) throw std::invalid_argument("control points do not match spans");
  if (guidance.size() != 0 && guidance.size() != num_spans) throw std::invalid_argument("guidance has wrong size");

  const auto vel = velocityRows(control_points, degree, num_spans, limits);
  const auto acc = accelRows(control_points, spans_k, degree, limits);
  const auto jerk = jerkRows(control_points, spans_k, degree, limits);

  TemporalLp out;
  out.trust_rows = num_spans;
  out.cap_rows = 1;
  out.velocity_rows = static_cast<int>(vel.size());
  out.accel_rows = static_cast<int>(acc.size());
  out.jerk_rows = static_cast<int>(jerk.size());

  LpProblem& lp = out.lp;
  lp.c = Eigen::VectorXd::Ones(num_spans);
  if (guidance.size() != 0) lp.c += guidance;
  lp.lower = trustLowerBounds(spans_k, gamma);
  const int rows = 1 + out.velocity_rows + out.accel_rows + out.jerk_rows;
  lp.G = Eigen::MatrixXd::Zero(rows, num_spans);
  lp.h = Eigen::VectorXd::Zero(rows);
  lp.G.row(0).setOnes();
  lp.h[0] = t_cap;
  int r = 1;
  for (const auto* family : {&vel, &acc, &jerk}) {
    for (const WindowRow& row : *family) {
      for (int j : row.spans) lp.G(r, j) = -1.0;
      lp.h[r] = -row.bound;
      ++r;
    }
  }
  return out;
}

namespace {

// Among the optima of `lp`, the one with the least total increase over the
// previous spans, so degenerate optima do not shuffle time between spans.
std::optional<Eigen::VectorXd> closestOptimum(const LpProblem& lp, const Eigen::VectorXd& x_opt,
                                              std::span<const double> spans_k) {
  const int m = lp.numVariables();
  const int rows = static_cast<int>(lp.G.rows());
  const double best = lp.c.dot(x_opt);
  LpProblem tie;
  tie.c = Eigen::VectorXd::Zero(2 * m);
  tie.c.tail(m).setOnes();
  tie.lower = Eigen::VectorXd::Zero(2 * m);
  tie.lower.head(m) = lp.lower;
  tie.G = Eigen::MatrixXd::Zero(rows + 1 + m, 2 * m);
  tie.h = Eigen::VectorXd::Zero(rows + 1 + m);
  tie.G.topLeftCorner(rows, m) = lp.G;
  tie.h.head(rows) = lp.h;
  tie.G.block(rows, 0, 1, m) = lp.c.transpose();
  tie.h[rows] = best + 1e-9 * std::max(1.0, std::abs(best));
  for (int j = 0; j < m; ++j) {
    tie.G(rows + 1 + j, j) = 1.0;
    tie.G(rows + 1 + j, m + j) = -1.0;
    tie.h[rows + 1 + j] = spans_k[static_cast<std::size_t>(j)];
  }
  const SolveResult res = solveLp(tie);
  if (!res.optimal()) return std::nullopt;
  return Eigen::VectorXd(res.x.head(m));
}

}  // namespace

KnotResult optimizeKnots(const Points& control_points, std::span<const double> spans_k, int degree,
                         const KinodynamicLimits& limits, double gamma, double t_cap,
                         const Eigen::VectorXd& guidance) {
  const TemporalLp assembled = assembleLp(control_points, spans_k, degree, limits, gamma, t_cap, guidance);
  const SolveResult res = solveLp(assembled.lp);
  KnotResult out;
  out.status = res.status;
  out.iterations = res.iterations;
  if (!res.optimal()) return out;
  Eigen::VectorXd x = res.x;
  if (auto closer = closestOptimum(assembled.lp, res.x, spans_k)) x = *closer;
  out.spans.resize(spans_k.size());
  for (std::size_t j = 0; j < spans_k.size(); ++j) {
    const auto idx = static_cast<Eigen::Index>(j);
    out.spans[j] = std::max(x[idx], assembled.lp.lower[idx]);
  }
  return out;
}

}  // namespace storm
