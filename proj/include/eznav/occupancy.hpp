/*
 * Copyright 2026 The eznav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Three-valued occupancy grid, range-beam insertion, frontier extraction and
// grid path planning.

#ifndef EZNAV_OCCUPANCY_HPP_
#define EZNAV_OCCUPANCY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eznav/geometry.hpp"

namespace eznav {

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

struct Cell {
  int x = 0;  // column
  int y = 0;  // row

  bool operator==(const Cell&) const = default;
};

// Planar robot pose; theta is the world yaw.
struct RobotPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Vec2 origin = Vec2::Zero());

  // Covers a width_m x height_m world anchored at the origin.
  static OccupancyGrid for_world(double width_m, double height_m,
                                 double resolution);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Vec2& origin() const { return origin_; }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  CellState at(Cell c) const { return cells_[index(c)]; }
  void set(Cell c, CellState s) { cells_[index(c)] = s; }

  Cell world_to_cell(const Vec2& p) const;
  Vec2 cell_center(Cell c) const;

  std::size_t count(CellState s) const;
  std::span<const CellState> cells() const { return cells_; }

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Vec2 origin_ = Vec2::Zero();
  std::vector<CellState> cells_;
};

struct RangeBeam {
  double bearing = 0.0;   // relative to the robot heading
  double distance = 0.0;  // meters; equals max range when nothing was hit
  bool hit = false;
};

// Integer grid line from a to b inclusive.
std::vector<Cell> bresenham(Cell a, Cell b);

// Ray-traces every beam. Cells before a hit become Free, the hit cell becomes
// Occupied, max-range beams free everything up to max_range. Hits latch for
// the tick, so the result does not depend on beam order. A hit just past the
// grid edge marks the last cell inside.
void update_occupancy(OccupancyGrid& grid, const RobotPose& robot,
                      std::span<const RangeBeam> scan, double max_range);

struct Frontier {
  std::vector<Cell> cells;
  Vec2 centroid = Vec2::Zero();
  double bearing_from_robot = 0.0;  // world yaw from robot to centroid
};

struct FrontierParams {
  int min_cells = 3;
  // Clusters larger than this are split into connected chunks so that each
  // centroid stays near the boundary it summarizes. 0 disables splitting.
  int max_cells = 20;
};

bool is_frontier_cell(const OccupancyGrid& grid, Cell c);

std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid,
                                       const RobotPose& robot,
                                       const FrontierParams& params = {});

double frontier_utility(const Frontier& f, const RobotPose& robot,
                        double target_bearing, double alpha, double lambda);

// Index of the frontier maximizing alpha*cos(bearing error) - lambda*dist.
// Throws Error(kNoFrontiers) on an empty list.
std::size_t score_frontiers(std::span<const Frontier> frontiers,
                            const RobotPose& robot,
                            const DirectionEstimate& target_dir, double alpha,
                            double lambda);

struct PlanParams {
  int inflation_cells = 1;
};

// True when the cell is Occupied or within the inflation radius of one.
std::vector<std::uint8_t> blocked_mask(const OccupancyGrid& grid,
                                       int inflation_cells);

// Shortest 8-connected path over Free and Unknown cells (unit / sqrt(2)
// step costs, no corner cutting). `from` and `to` are exempt from inflation
// but never from occupancy. Empty optional when unreachable.
std::optional<std::vector<Cell>> plan_path(const OccupancyGrid& grid, Cell from,
                                           Cell to, const PlanParams& params = {});

double path_length_cells(std::span<const Cell> path);

}  // namespace eznav

#endif  // EZNAV_OCCUPANCY_HPP_
