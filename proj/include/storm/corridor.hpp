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

#ifndef STORM_CORRIDOR_HPP_
#define STORM_CORRIDOR_HPP_

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "storm/bspline.hpp"
#include "storm/grid.hpp"

namespace storm {

class CorridorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n . x <= d with |n| = 1.
struct Halfspace {
  Vec3 normal;
  double offset;
};

class ConvexRegion {
 public:
  ConvexRegion() = default;
  /// Normals are rescaled to unit length (offsets follow).
  explicit ConvexRegion(std::vector<Halfspace> halfspaces);
  static ConvexRegion box(const Vec3& lo, const Vec3& hi);

  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// max_i (n_i . x - d_i); <= 0 inside.
  double violation(const Vec3& p) const;

 private:
  std::vector<Halfspace> halfspaces_;
};

bool contains(const ConvexRegion& region, const Vec3& p, double tol = 0.0);

struct Corridor {
  std::vector<ConvexRegion> regions;
  bool overlap_guaranteed = false;
};

/// Center and radius of the largest ball inside the intersection of the
/// given regions, or nullopt when the intersection has no interior.
struct InteriorProbe {
  Vec3 center;
  double radius;
};
std::optional<InteriorProbe> probeIntersection(std::span<const ConvexRegion* const> regions);
std::optional<InteriorProbe> probeIntersection(const ConvexRegion& a, const ConvexRegion& b);

/// Checks non-empty regions, overlapping neighbours, and that the first
/// region holds `start` and the last holds `goal`. Throws CorridorError.
void validateCorridor(const Corridor& corridor, const Vec3& start, const Vec3& goal);

/// Halfspace rows each control point must satisfy: G_k Q_k <= h_k.
struct PointConstraintSet {
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> G;
  std::vector<Eigen::VectorXd> h;
  /// Region index of each segment, non-decreasing.
  std::vector<int> segment_region;

  int numPoints() const { return static_cast<int>(G.size()); }
  int totalRows() const;
  /// Max violation over all rows for control points given one per row.
  double maxViolation(const Points& control_points) const;
};

/// Even split of `segments` segments over `regions` regions (earlier regions
/// take the remainder). Requires segments >= regions.
std::vector<int> evenSegmentMap(int segments, int regions);

/// Gives each control point Q_k the rows of every region whose segments it
/// shapes (segments k-degree..k). Identical normals are merged keeping the
/// tighter offset. Throws CorridorError("assignment infeasible") when a
/// point's regions do not intersect.
PointConstraintSet assignRegions(const Corridor& corridor, int last_index, int degree,
                                 std::span<const int> segment_region = {});

/// Greedy axis-aligned boxes along a collision-free path. Each box covers a
/// run of consecutive path cells, inflated up to `inflation_limit` meters per
/// side; consecutive boxes share a path cell so they overlap. Boxes are then
/// skipped wherever an earlier and a later box overlap by at least
/// `min_overlap` meters on every axis.
Corridor buildBoxesFromPath(const OccupancyGrid& grid, std::span<const Vec3> path,
                            double inflation_limit, double min_overlap = 0.5);

}  // namespace storm

#endif  // STORM_CORRIDOR_HPP_
