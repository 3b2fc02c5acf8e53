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

#ifndef STORM_GRID_HPP_
#define STORM_GRID_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace storm {

using Cell = std::array<int, 3>;

/// Axis-aligned voxel grid anchored at the origin. Cell (i,j,k) covers
/// [i,i+1) x [j,j+1) x [k,k+1) times the resolution.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(Cell dims, double resolution, std::uint64_t seed = 0);

  const Cell& dims() const { return dims_; }
  double resolution() const { return resolution_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Vector3d extent() const;

  bool inBounds(const Cell& c) const;
  /// Out-of-bounds cells count as occupied.
  bool occupied(const Cell& c) const;
  void setOccupied(const Cell& c, bool value = true);
  std::size_t occupiedCount() const;
  double occupiedFraction() const;

  Cell cellOf(const Eigen::Vector3d& p) const;
  Eigen::Vector3d center(const Cell& c) const;

  /// True when every cell in the inclusive index box is free and in bounds.
  bool boxFree(const Cell& lo, const Cell& hi) const;

  /// Face-connected cells crossed by the segment a->b, in order. Where the
  /// segment passes exactly through an edge or corner all touching cells on
  /// the stepping order are included.
  std::vector<Cell> traverse(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const;
  bool lineFree(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const;

  bool operator==(const OccupancyGrid& other) const = default;

 private:
  std::size_t index(const Cell& c) const {
    return (static_cast<std::size_t>(c[2]) * dims_[1] + c[1]) * dims_[0] + c[0];
  }

  Cell dims_{0, 0, 0};
  double resolution_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace storm

#endif  // STORM_GRID_HPP_
