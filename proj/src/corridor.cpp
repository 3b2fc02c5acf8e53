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

#include "storm/corridor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "storm/solvers.hpp"

namespace storm {

ConvexRegion::ConvexRegion(std::vector<Halfspace> halfspaces) : halfspaces_(std::move(halfspaces)) {
  for (Halfspace& hs : halfspaces_) {
    const double norm = hs.normal.norm();
    if (!(norm > 0.0) || !std::isfinite(norm) || !std::isfinite(hs.offset)) {
      throw CorridorError("halfspace with zero or non-finite normal");
    }
    hs.normal /= norm;
    hs.offset /= norm;
  }
}

ConvexRegion ConvexRegion::box(const Vec3& lo, const Vec3& hi) {
  std::vector<Halfspace> hs;
  hs.reserve(6);
  for (int a = 0; a < 3; ++a) {
    if (!(hi[a] >= lo[a])) throw CorridorError("box with max < min");
    hs.push_back({Vec3::Unit(a), hi[a]});
    hs.push_back({-Vec3::Unit(a), -lo[a]});
  }
  return ConvexRegion(std::move(hs));
}

double ConvexRegion::violation(const Vec3& p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Halfspace& hs : halfspaces_) worst = std::max(worst, hs.normal.dot(p) - hs.offset);
  return worst;
}

bool contains(const ConvexRegion& region, const Vec3& p, double tol) {
  for (const Halfspace& hs : region.halfspaces())
    if (hs.normal.dot(p) > hs.offset + tol) return false;
  return true;
}

namespace {

// Axis index and sign when the normal is +-e_axis, otherwise nullopt.
std::optional<std::pair<int, int>> axisOf(const Vec3& n) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(std::abs(n[a]) - 1.0) < 1e-12 && std::abs(n[(a + 1) % 3]) < 1e-12 &&
        std::abs(n[(a + 2) % 3]) < 1e-12) {
      return std::make_pair(a, n[a] > 0.0 ? 1 : -1);
    }
  }
  return std::nullopt;
}

// Intersection of axis-aligned halfspaces when every region is a finite box.
std::optional<std::optional<InteriorProbe>> probeBoxes(std::span<const ConvexRegion* const> regions) {
  Vec3 lo = Vec3::Constant(-std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::infinity());
  for (const ConvexRegion* r : regions) {
    for (const Halfspace& hs : r->halfspaces()) {
      const auto axis = axisOf(hs.normal);
      if (!axis) return std::nullopt;
      if (axis->second > 0) hi[axis->first] = std::min(hi[axis->first], hs.offset);
      else lo[axis->first] = std::max(lo[axis->first], -hs.offset);
    }
  }
  if (!lo.allFinite() || !hi.allFinite()) return std::nullopt;
  const Vec3 width = hi - lo;
  const double radius = 0.5 * width.minCoeff();
  if (!(radius > 1e-12)) return std::optional<InteriorProbe>{};
  return std::optional<InteriorProbe>{InteriorProbe{0.5 * (lo + hi), radius}};
}

}  // namespace

std::optional<InteriorProbe> probeIntersection(std::span<const ConvexRegion* const> regions) {
  if (auto boxes = probeBoxes(regions)) return *boxes;

  // Chebyshev center: max r s.t. n.x + r <= d with x = xp - xm split so that
  // every variable has a lower bound.
  constexpr double kRadiusCap = 1e3;
  int rows = 1;
  for (const ConvexRegion* r : regions) rows += static_cast<int>(r->halfspaces().size());
  LpProblem lp;
  lp.c = Eigen::VectorXd::Zero(7);
  lp.c[6] = -1.0;
  lp.lower = Eigen::VectorXd::Zero(7);
  lp.G = Eigen::MatrixXd::Zero(rows, 7);
  lp.h = Eigen::VectorXd::Zero(rows);
  int row = 0;
  for (const ConvexRegion* r : regions) {
    for (const Halfspace& hs : r->halfspaces()) {
      lp.G.block<1, 3>(row, 0) = hs.normal.transpose();
      lp.G.block<1, 3>(row, 3) = -hs.normal.transpose();
      lp.G(row, 6) = 1.0;
      lp.h[row] = hs.offset;
      ++row;
    }
  }
  lp.G(row, 6) = 1.0;
  lp.h[row] = kRadiusCap;
  const SolveResult res = solveLp(lp);
  if (!res.optimal() || res.x[6] <= 1e-12) return std::nullopt;
  const Vec3 center = res.x.segment<3>(0) - res.x.segment<3>(3);
  return InteriorProbe{center, res.x[6]};
}

std::optional<InteriorProbe> probeIntersection(const ConvexRegion& a, const ConvexRegion& b) {
  const ConvexRegion* both[] = {&a, &b};
  return probeIntersection(both);
}

void validateCorridor(const Corridor& corridor, const Vec3& start, const Vec3& goal) {
  if (corridor.regions.empty()) throw CorridorError("corridor has no regions");
  for (std::size_t r = 0; r < corridor.regions.size(); ++r) {
    const ConvexRegion* one[] = {&corridor.regions[r]};
    if (!probeIntersection(one)) throw CorridorError("region " + std::to_string(r) + " has empty interior");
    if (r + 1 < corridor.regions.size() &&
        !probeIntersection(corridor.regions[r], corridor.regions[r + 1])) {
      throw CorridorError("corridor gap between regions " + std::to_string(r) + " and " +
                          std::to_string(r + 1));
    }
  }
  if (!contains(corridor.regions.front(), start, 1e-9)) throw CorridorError("start outside first region");
  if (!contains(corridor.regions.back(), goal, 1e-9)) throw CorridorError("goal outside last region");
}

int PointConstraintSet::totalRows() const {
  int rows = 0;
  for (const auto& g : G) rows += static_cast<int>(g.rows());
  return rows;
}

double PointConstraintSet::maxViolation(const Points& control_points) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < numPoints(); ++k) {
    if (G[k].rows() == 0) continue;
    const Eigen::VectorXd r = G[k] * control_points.row(k).transpose() - h[k];
    worst = std::max(worst, r.maxCoeff());
  }
  return worst;
}

std::vector<int> evenSegmentMap(int segments, int regions) {
  if (regions < 1 || segments < regions) throw CorridorError("need at least one segment per region");
  std::vector<int> map;
  map.reserve(segments);
  const int base = segments / regions;
  const int extra = segments % regions;
  for (int r = 0; r < regions; ++r) {
    const int count = base + (r < extra ? 1 : 0);
    for (int k = 0; k < count; ++k) map.push_back(r);
  }
  return map;
}

PointConstraintSet assignRegions(const Corridor& corridor, int last_index, int degree,
                                 std::span<const int> segment_region) {
  const int regions = static_cast<int>(corridor.regions.size());
  const int segments = last_index - degree + 1;
  if (regions == 0) throw CorridorError("corridor has no regions");
  if (segments < 1) throw CorridorError("trajectory has no segments");

  PointConstraintSet set;
  if (segment_region.empty()) {
    set.segment_region = evenSegmentMap(segments, regions);
  } else {
    set.segment_region.assign(segment_region.begin(), segment_region.end());
  }
  const auto& map = set.segment_region;
  if (static_cast<int>(map.size()) != segments) throw CorridorError("segment map has wrong length");
  if (map.front() != 0 || map.back() != regions - 1) throw CorridorError("segment map must span all regions");
  for (int j = 1; j < segments; ++j) {
    const int step = map[j] - map[j - 1];
    if (step != 0 && step != 1) throw CorridorError("segment map must be monotone without skips");
  }

  std::map<std::pair<int, int>, bool> feasible;
  set.G.resize(last_index + 1);
  set.h.resize(last_index + 1);
  for (int k = 0; k <= last_index; ++k) {
    const int first_seg = std::max(0, k - degree);
    const int last_seg = std::min(k, segments - 1);
    const int lo = map[first_seg];
    const int hi = map[last_seg];
    auto [it, inserted] = feasible.try_emplace({lo, hi}, true);
    if (inserted) {
      std::vector<const ConvexRegion*> involved;
      for (int r = lo; r <= hi; ++r) involved.push_back(&corridor.regions[r]);
      it->second = probeIntersection(involved).has_value();
    }
    if (!it->second) throw CorridorError("assignment infeasible");

    std::vector<Halfspace> rows;
    for (int r = lo; r <= hi; ++r) {
      for (const Halfspace& hs : corridor.regions[r].halfspaces()) {
        auto same = std::find_if(rows.begin(), rows.end(), [&](const Halfspace& o) {
          return (o.normal - hs.normal).cwiseAbs().maxCoeff() < 1e-12;
        });
        if (same == rows.end()) rows.push_back(hs);
        else same->offset = std::min(same->offset, hs.offset);
      }
    }
    set.G[k].resize(static_cast<Eigen::Index>(rows.size()), 3);
    set.h[k].resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      set.G[k].row(static_cast<Eigen::Index>(i)) = rows[i].normal.transpose();
      set.h[k][static_cast<Eigen::Index>(i)] = rows[i].offset;
    }
  }
  return set;
}

namespace {

struct CellBox {
  Cell lo;
  Cell hi;
};

bool containsBox(const CellBox& outer, const CellBox& inner) {
  for (int a = 0; a < 3; ++a)
    if (inner.lo[a] < outer.lo[a] || inner.hi[a] > outer.hi[a]) return false;
  return true;
}

bool cellInBox(const CellBox& box, const Cell& c) {
  return containsBox(box, CellBox{c, c});
}

void inflate(const OccupancyGrid& grid, CellBox& box, int limit) {
  std::array<int, 6> grown{};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int side = 0; side < 6; ++side) {
      if (grown[side] >= limit) continue;
      const int axis = side / 2;
      const bool up = side % 2 == 0;
      Cell lo = box.lo;
      Cell hi = box.hi;
      if (up) lo[axis] = hi[axis] = box.hi[axis] + 1;
      else lo[axis] = hi[axis] = box.lo[axis] - 1;
      if (!grid.boxFree(lo, hi)) {
        grown[side] = limit;
        continue;
      }
      if (up) ++box.hi[axis];
      else --box.lo[axis];
      ++grown[side];
      changed = true;
    }
  }
}

}  // namespace

Corridor buildBoxesFromPath(const OccupancyGrid& grid, std::span<const Vec3> path,
                            double inflation_limit, double min_overlap) {
  if (path.empty()) throw CorridorError("empty path");
  std::vector<Cell> cells;
  if (path.size() == 1) {
    cells.push_back(grid.cellOf(path[0]));
  } else {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      for (const Cell& c : grid.traverse(path[i], path[i + 1])) {
        if (cells.empty() || cells.back() != c) cells.push_back(c);
      }
    }
  }
  for (const Cell& c : cells) {
    if (grid.occupied(c)) throw CorridorError("path cell occupied");
  }

  const int limit = std::max(0, static_cast<int>(std::floor(inflation_limit / grid.resolution() + 1e-9)));
  // Each box remembers the run of path cells it covers around its seed.
  struct Covered {
    CellBox box;
    std::size_t first = 0;
    std::size_t last = 0;
  };
  const auto coverRun = [&](const CellBox& box, std::size_t seed) {
    Covered c{box, seed, seed};
    while (c.first > 0 && cellInBox(box, cells[c.first - 1])) --c.first;
    while (c.last + 1 < cells.size() && cellInBox(box, cells[c.last + 1])) ++c.last;
    return c;
  };

  std::vector<Covered> boxes;
  std::size_t a = 0;
  while (true) {
    CellBox box{cells[a], cells[a]};
    inflate(grid, box, limit);
    if (a + 1 < cells.size() && !cellInBox(box, cells[a + 1])) {
      // Diagonal step blocked during inflation: seed with both cells.
      CellBox pair{cells[a], cells[a]};
      for (int k = 0; k < 3; ++k) {
        pair.lo[k] = std::min(pair.lo[k], cells[a + 1][k]);
        pair.hi[k] = std::max(pair.hi[k], cells[a + 1][k]);
      }
      if (!grid.boxFree(pair.lo, pair.hi)) throw CorridorError("corridor gap");
      box = pair;
      inflate(grid, box, limit);
    }
    boxes.push_back(coverRun(box, a));
    // The next box starts from the last covered cell so the two share it.
    const std::size_t b = boxes.back().last;
    if (b + 1 >= cells.size()) break;
    a = b;
  }

  // From each box jump to the farthest later box whose covered run meets
  // this one and whose overlap is at least min_overlap thick on every axis;
  // the next box always qualifies through the shared cell.
  const int need = std::max(1, static_cast<int>(std::ceil(min_overlap / grid.resolution() - 1e-9)));
  const auto overlapCells = [](const CellBox& u, const CellBox& v) {
    int thin = std::numeric_limits<int>::max();
    for (int k = 0; k < 3; ++k) thin = std::min(thin, std::min(u.hi[k], v.hi[k]) - std::max(u.lo[k], v.lo[k]) + 1);
    return thin;
  };
  std::vector<CellBox> chain{boxes.front().box};
  for (std::size_t i = 0; i + 1 < boxes.size();) {
    std::size_t next = i + 1;
    for (std::size_t j = boxes.size() - 1; j > i + 1; --j) {
      if (boxes[j].first <= boxes[i].last && overlapCells(boxes[i].box, boxes[j].box) >= need) {
        next = j;
        break;
      }
    }
    chain.push_back(boxes[next].box);
    i = next;
  }

  Corridor corridor;
  corridor.overlap_guaranteed = true;
  const double res = grid.resolution();
  for (const CellBox& box : chain) {
    const Vec3 lo(box.lo[0] * res, box.lo[1] * res, box.lo[2] * res);
    const Vec3 hi((box.hi[0] + 1) * res, (box.hi[1] + 1) * res, (box.hi[2] + 1) * res);
    corridor.regions.push_back(ConvexRegion::box(lo, hi));
  }
  for (std::size_t r = 0; r + 1 < corridor.regions.size(); ++r) {
    if (!probeIntersection(corridor.regions[r], corridor.regions[r + 1])) throw CorridorError("corridor gap");
  }
  return corridor;
}

}  // namespace storm
