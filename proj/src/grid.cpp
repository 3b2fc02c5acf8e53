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

#include "storm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace storm {

OccupancyGrid::OccupancyGrid(Cell dims, double resolution, std::uint64_t seed)
    : dims_(dims), resolution_(resolution), seed_(seed) {
  if (dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) throw std::invalid_argument("grid dims must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  cells_.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
}

Eigen::Vector3d OccupancyGrid::extent() const {
  return Eigen::Vector3d(dims_[0], dims_[1], dims_[2]) * resolution_;
}

bool OccupancyGrid::inBounds(const Cell& c) const {
  for (int a = 0; a < 3; ++a)
    if (c[a] < 0 || c[a] >= dims_[a]) return false;
  return true;
}

bool OccupancyGrid::occupied(const Cell& c) const {
  return !inBounds(c) || cells_[index(c)] != 0;
}

void OccupancyGrid::setOccupied(const Cell& c, bool value) {
  if (!inBounds(c)) return;
  cells_[index(c)] = value ? 1 : 0;
}

std::size_t OccupancyGrid::occupiedCount() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double OccupancyGrid::occupiedFraction() const {
  return cells_.empty() ? 0.0 : static_cast<double>(occupiedCount()) / static_cast<double>(cells_.size());
}

Cell OccupancyGrid::cellOf(const Eigen::Vector3d& p) const {
  Cell c;
  for (int a = 0; a < 3; ++a) c[a] = static_cast<int>(std::floor(p[a] / resolution_));
  return c;
}

Eigen::Vector3d OccupancyGrid::center(const Cell& c) const {
  return (Eigen::Vector3d(c[0], c[1], c[2]) + Eigen::Vector3d::Constant(0.5)) * resolution_;
}

bool OccupancyGrid::boxFree(const Cell& lo, const Cell& hi) const {
  if (!inBounds(lo) || !inBounds(hi)) return false;
  for (int z = lo[2]; z <= hi[2]; ++z)
    for (int y = lo[1]; y <= hi[1]; ++y)
      for (int x = lo[0]; x <= hi[0]; ++x)
        if (cells_[index({x, y, z})] != 0) return false;
  return true;
}

// Amanatides-Woo traversal, stepping one axis at a time so consecutive cells
// always share a face.
std::vector<Cell> OccupancyGrid::traverse(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const {
  std::vector<Cell> out;
  Cell cell = cellOf(a);
  const Cell last = cellOf(b);
  out.push_back(cell);
  const Eigen::Vector3d dir = b - a;
  std::array<int, 3> step{};
  std::array<double, 3> t_max{};
  std::array<double, 3> t_delta{};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (dir[k] > 0.0) {
      step[k] = 1;
      t_max[k] = ((cell[k] + 1) * resolution_ - a[k]) / dir[k];
      t_delta[k] = resolution_ / dir[k];
    } else if (dir[k] < 0.0) {
      step[k] = -1;
      t_max[k] = (cell[k] * resolution_ - a[k]) / dir[k];
      t_delta[k] = -resolution_ / dir[k];
    } else {
      step[k] = 0;
      t_max[k] = kInf;
      t_delta[k] = kInf;
    }
  }
  const int max_steps = std::abs(last[0] - cell[0]) + std::abs(last[1] - cell[1]) + std::abs(last[2] - cell[2]);
  for (int s = 0; s < max_steps && cell != last; ++s) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    if (t_max[axis] > 1.0 + 1e-12) break;
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    out.push_back(cell);
  }
  // Rounding can leave the walk one step short of the end cell; finish with
  // unit steps so the sequence stays face-connected.
  while (cell != last) {
    for (int k = 0; k < 3; ++k) {
      if (cell[k] != last[k]) {
        cell[k] += cell[k] < last[k] ? 1 : -1;
        out.push_back(cell);
        break;
      }
    }
  }
  return out;
}

bool OccupancyGrid::lineFree(const Eigen::Vector3d& a, const Eigen::Vector3d& b) const {
  for (const Cell& c : traverse(a, b))
    if (occupied(c)) return false;
  return true;
}

}  // namespace storm
