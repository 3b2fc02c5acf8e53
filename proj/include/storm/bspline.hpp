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

#ifndef STORM_BSPLINE_HPP_
#define STORM_BSPLINE_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace storm {

using Vec3 = Eigen::Vector3d;
/// One control point per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

class SplineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spans shorter than this are rejected when a trajectory is constructed.
inline constexpr double kMinSpan = 1e-9;

/// Full clamped knot vector for the given spans. The boundary values carry
/// multiplicity degree + 1 so the curve interpolates its first and last
/// control points.
std::vector<double> clampedKnots(std::span<const double> spans, int degree,
                                 double t_start);

/// Basic matrix of the segment [knots[i], knots[i+1]) for a spline of the
/// given degree. Rows are powers of the normalized time u, columns are the
/// control points Q_{i-degree}..Q_i. Uses 0/0 = 0.
Eigen::MatrixXd basicMatrix(int degree, std::span<const double> knots, int i);

/// Applies one derivative level to control points of a degree-`degree` clamped
/// spline: P'_i = degree (P_{i+1} - P_i) / (sum of the `degree` spans ending
/// at span i), with out-of-range spans treated as zero.
Points differentiate(const Points& points, std::span<const double> spans,
                     int degree);

struct DerivativeControlPoints {
  Points velocity;
  Points acceleration;
  Points jerk;
};

/// A clamped non-uniform B-spline in 3D. Segment j covers
/// [t_start + sum(spans[0..j)), t_start + sum(spans[0..j])] and is shaped by
/// control points j..j+degree.
class SplineTrajectory {
 public:
  /// Throws SplineError when the shape is inconsistent (control point count
  /// must be spans.size() + degree) or a span is below kMinSpan.
  SplineTrajectory(int degree, Points control_points, std::vector<double> spans,
                   double t_start = 0.0);

  int degree() const { return degree_; }
  const Points& controlPoints() const { return control_points_; }
  const std::vector<double>& spans() const { return spans_; }
  double startTime() const { return t_start_; }
  double endTime() const { return t_start_ + duration_; }
  double duration() const { return duration_; }
  int numSegments() const { return static_cast<int>(spans_.size()); }
  /// Index n of the last control point.
  int lastIndex() const { return static_cast<int>(control_points_.rows()) - 1; }

  std::vector<double> knots() const;
  /// Segment containing t; right-continuous at interior knots and the last
  /// segment at the end time.
  int segmentAt(double t) const;
  double segmentStart(int segment) const { return seg_start_[segment]; }
  Eigen::MatrixXd segmentMatrix(int segment) const;

  /// Position (order 0) or derivative up to order 3 at time t.
  Vec3 evaluate(double t, int order = 0) const;

  DerivativeControlPoints derivativeControlPoints() const;
  /// The degree-(p-order) spline whose value is the order-th derivative.
  SplineTrajectory derivativeSpline(int order) const;

 private:
  int degree_;
  Points control_points_;
  std::vector<double> spans_;
  double t_start_;
  double duration_ = 0.0;
  std::vector<double> seg_start_;
  std::vector<Eigen::MatrixXd> matrices_;
};

/// Local linear map from the degree + 1 control points of segment j to the
/// degree - 2 jerk control points that shape the same segment.
Eigen::MatrixXd jerkMap(std::span<const double> spans, int degree, int segment);

struct SegmentEnergy {
  /// (p+1)x(p+1) symmetric PSD matrix; per axis the segment energy is
  /// x' W x * span.
  Eigen::MatrixXd weight;
  /// Jerk control points of the segment as a function of its control points.
  Eigen::MatrixXd jerk_map;
};

/// Requires degree >= 3.
SegmentEnergy segmentEnergyMatrix(std::span<const double> spans, int degree,
                                  int segment);
SegmentEnergy segmentEnergyMatrix(const SplineTrajectory& traj, int segment);

/// Integral of the squared jerk norm over the whole trajectory.
double totalJerkEnergy(const SplineTrajectory& traj);
double totalJerkEnergy(const Points& control_points,
                       std::span<const double> spans, int degree);

}  // namespace storm

#endif  // STORM_BSPLINE_HPP_
