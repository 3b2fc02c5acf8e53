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

#include "storm/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace storm {
namespace {

// Sum of spans[first..last], skipping indices outside the span list.
double windowSum(std::span<const double> spans, int first, int last) {
  double sum = 0.0;
  const int m = static_cast<int>(spans.size()) - 1;
  for (int j = std::max(first, 0); j <= std::min(last, m); ++j) sum += spans[j];
  return sum;
}

Eigen::RowVectorXd powerRow(int size, double u, int order) {
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(size);
  for (int e = order; e < size; ++e) {
    double coeff = 1.0;
    for (int f = 0; f < order; ++f) coeff *= static_cast<double>(e - f);
    row[e] = coeff * std::pow(u, e - order);
  }
  return row;
}

}  // namespace

std::vector<double> clampedKnots(std::span<const double> spans, int degree,
                                 double t_start) {
  if (spans.empty()) throw SplineError("degenerate trajectory");
  if (degree < 0) throw SplineError("negative degree");
  std::vector<double> knots;
  knots.reserve(spans.size() + 2 * degree + 3);
  for (int k = 0; k <= degree; ++k) knots.push_back(t_start);
  double t = t_start;
  for (std::size_t j = 0; j < spans.size(); ++j) {
    if (!(spans[j] >= 0.0)) throw SplineError("negative span");
    t += spans[j];
    if (j + 1 < spans.size()) knots.push_back(t);
  }
  for (int k = 0; k <= degree; ++k) knots.push_back(t);
  return knots;
}

Eigen::MatrixXd basicMatrix(int degree, std::span<const double> knots, int i) {
  if (degree < 0) throw SplineError("negative degree");
  const int first = i - degree + 1;
  const int last = i + degree;
  if (degree > 0 &&
      (first < 0 || last >= static_cast<int>(knots.size()) || i + 1 >= static_cast<int>(knots.size()))) {
    throw SplineError("knot window out of range");
  }
  for (int j = std::max(first, 0); j < std::min(last, static_cast<int>(knots.size()) - 1); ++j) {
    if (knots[j + 1] < knots[j]) throw SplineError("negative span in knot window");
  }

  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
  for (int k = 2; k <= degree + 1; ++k) {
    Eigen::MatrixXd d0 = Eigen::MatrixXd::Zero(k - 1, k);
    Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(k - 1, k);
    for (int r = 0; r < k - 1; ++r) {
      const int j = i - k + 2 + r;
      const double denom = knots[j + k - 1] - knots[j];
      const double c0 = denom > 0.0 ? (knots[i] - knots[j]) / denom : 0.0;
      const double c1 = denom > 0.0 ? (knots[i + 1] - knots[i]) / denom : 0.0;
      d0(r, r) = 1.0 - c0;
      d0(r, r + 1) = c0;
      d1(r, r) = -c1;
      d1(r, r + 1) = c1;
    }
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(k, k - 1);
    Eigen::MatrixXd bottom = Eigen::MatrixXd::Zero(k, k - 1);
    top.topRows(k - 1) = m;
    bottom.bottomRows(k - 1) = m;
    m = top * d0 + bottom * d1;
  }
  return m;
}

Points differentiate(const Points& points, std::span<const double> spans,
                     int degree) {
  if (degree < 1) throw SplineError("cannot differentiate a degree-0 spline");
  const int count = static_cast<int>(points.rows()) - 1;
  Points out(std::max(count, 0), 3);
  for (int i = 0; i < count; ++i) {
    const double denom = windowSum(spans, i - degree + 1, i);
    if (!(denom > 0.0)) throw SplineError("degenerate knot window");
    out.row(i) = static_cast<double>(degree) * (points.row(i + 1) - points.row(i)) / denom;
  }
  return out;
}

SplineTrajectory::SplineTrajectory(int degree, Points control_points,
                                   std::vector<double> spans, double t_start)
    : degree_(degree),
      control_points_(std::move(control_points)),
      spans_(std::move(spans)),
      t_start_(t_start) {
  if (spans_.empty()) throw SplineError("degenerate trajectory");
  if (degree_ < 0) throw SplineError("negative degree");
  if (control_points_.rows() != static_cast<Eigen::Index>(spans_.size()) + degree_) {
    throw SplineError("control point count " + std::to_string(control_points_.rows()) +
                      " does not match " + std::to_string(spans_.size()) +
                      " spans at degree " + std::to_string(degree_));
  }
  if (!control_points_.allFinite()) throw SplineError("non-finite control point");
  seg_start_.reserve(spans_.size());
  double t = t_start_;
  for (double s : spans_) {
    if (!(s >= kMinSpan) || !std::isfinite(s)) throw SplineError("degenerate span");
    seg_start_.push_back(t);
    t += s;
  }
  duration_ = t - t_start_;

  const std::vector<double> k = knots();
  matrices_.reserve(spans_.size());
  for (int j = 0; j < numSegments(); ++j) matrices_.push_back(basicMatrix(degree_, k, degree_ + j));
}

std::vector<double> SplineTrajectory::knots() const {
  return clampedKnots(spans_, degree_, t_start_);
}

int SplineTrajectory::segmentAt(double t) const {
  auto it = std::upper_bound(seg_start_.begin(), seg_start_.end(), t);
  int seg = static_cast<int>(it - seg_start_.begin()) - 1;
  return std::clamp(seg, 0, numSegments() - 1);
}

Eigen::MatrixXd SplineTrajectory::segmentMatrix(int segment) const {
  return matrices_.at(segment);
}

Vec3 SplineTrajectory::evaluate(double t, int order) const {
  const double slack = 1e-12 * (1.0 + std::abs(t_start_) + duration_);
  if (!(t >= t_start_ - slack && t <= endTime() + slack)) throw SplineError("out of domain");
  if (order < 0 || order > 3) throw SplineError("derivative order must be in 0..3");
  if (order > degree_) return Vec3::Zero();
  t = std::clamp(t, t_start_, endTime());
  const int seg = segmentAt(t);
  const double span = spans_[seg];
  const double u = std::clamp((t - seg_start_[seg]) / span, 0.0, 1.0);
  const Eigen::RowVectorXd basis = powerRow(degree_ + 1, u, order) * matrices_[seg];
  const Vec3 value = (basis * control_points_.middleRows(seg, degree_ + 1)).transpose();
  return value / std::pow(span, order);
}

DerivativeControlPoints SplineTrajectory::derivativeControlPoints() const {
  DerivativeControlPoints d;
  d.velocity = differentiate(control_points_, spans_, degree_);
  d.acceleration = degree_ >= 2 ? differentiate(d.velocity, spans_, degree_ - 1) : Points(0, 3);
  d.jerk = degree_ >= 3 ? differentiate(d.acceleration, spans_, degree_ - 2) : Points(0, 3);
  return d;
}

SplineTrajectory SplineTrajectory::derivativeSpline(int order) const {
  if (order < 0 || order > degree_) throw SplineError("derivative order exceeds degree");
  Points pts = control_points_;
  for (int k = 0; k < order; ++k) pts = differentiate(pts, spans_, degree_ - k);
  return SplineTrajectory(degree_ - order, std::move(pts), spans_, t_start_);
}

Eigen::MatrixXd jerkMap(std::span<const double> spans, int degree, int segment) {
  if (degree < 3) throw SplineError("jerk energy needs degree >= 3");
  Eigen::MatrixXd map = Eigen::MatrixXd::Identity(degree + 1, degree + 1);
  for (int level = 0; level < 3; ++level) {
    const int d = degree - level;
    const int rows = static_cast<int>(map.rows()) - 1;
    Eigen::MatrixXd next(rows, map.cols());
    for (int r = 0; r < rows; ++r) {
      const int i = segment + r;
      const double denom = windowSum(spans, i - d + 1, i);
      if (!(denom > 0.0)) throw SplineError("degenerate knot window");
      next.row(r) = static_cast<double>(d) * (map.row(r + 1) - map.row(r)) / denom;
    }
    map = std::move(next);
  }
  return map;
}

namespace {

// Integral over u in [0,1] of M' U U' M for the degree-(p-3) jerk spline.
Eigen::MatrixXd jerkGram(std::span<const double> spans, int degree, int segment) {
  const int jd = degree - 3;
  const int size = jd + 1;
  Eigen::MatrixXd hilbert(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) hilbert(a, b) = 1.0 / static_cast<double>(a + b + 1);
  if (jd == 0) return hilbert;
  const std::vector<double> knots = clampedKnots(spans, jd, 0.0);
  const Eigen::MatrixXd m = basicMatrix(jd, knots, jd + segment);
  return m.transpose() * hilbert * m;
}

}  // namespace

SegmentEnergy segmentEnergyMatrix(std::span<const double> spans, int degree,
                                  int segment) {
  if (degree < 3) throw SplineError("jerk energy needs degree >= 3");
  if (segment < 0 || segment >= static_cast<int>(spans.size())) throw SplineError("segment index out of range");
  SegmentEnergy e;
  e.jerk_map = jerkMap(spans, degree, segment);
  const Eigen::MatrixXd gram = jerkGram(spans, degree, segment);
  e.weight = e.jerk_map.transpose() * gram * e.jerk_map;
  e.weight = 0.5 * (e.weight + e.weight.transpose());
  return e;
}

SegmentEnergy segmentEnergyMatrix(const SplineTrajectory& traj, int segment) {
  return segmentEnergyMatrix(traj.spans(), traj.degree(), segment);
}

double totalJerkEnergy(const Points& control_points, std::span<const double> spans,
                       int degree) {
  if (degree < 3) throw SplineError("jerk energy needs degree >= 3");
  Points jerk = control_points;
  for (int k = 0; k < 3; ++k) jerk = differentiate(jerk, spans, degree - k);
  const int jd = degree - 3;
  double energy = 0.0;
  for (int j = 0; j < static_cast<int>(spans.size()); ++j) {
    const auto local = jerk.middleRows(j, jd + 1);
    if (jd == 0) {
      energy += local.row(0).squaredNorm() * spans[j];
    } else {
      const Eigen::MatrixXd gram = jerkGram(spans, degree, j);
      energy += (local.transpose() * gram * local).trace() * spans[j];
    }
  }
  return energy;
}

double totalJerkEnergy(const SplineTrajectory& traj) {
  return totalJerkEnergy(traj.controlPoints(), traj.spans(), traj.degree());
}

}  // namespace storm
