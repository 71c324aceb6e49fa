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

#include "eznav/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "eznav/error.hpp"

namespace eznav {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             Vec2 origin)
    : width_(width),
      height_(height),
      resolution_(resolution),
      origin_(origin),
      cells_(static_cast<std::size_t>(width) * height, CellState::kUnknown) {
  if (width <= 0 || height <= 0 || !(resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad occupancy grid dimensions");
  }
}

OccupancyGrid OccupancyGrid::for_world(double width_m, double height_m,
                                       double resolution) {
  return OccupancyGrid(static_cast<int>(std::ceil(width_m / resolution)),
                       static_cast<int>(std::ceil(height_m / resolution)),
                       resolution);
}

Cell OccupancyGrid::world_to_cell(const Vec2& p) const {
  return {static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
          static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_))};
}

Vec2 OccupancyGrid::cell_center(Cell c) const {
  return origin_ + resolution_ * Vec2(c.x + 0.5, c.y + 0.5);
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

std::vector<Cell> bresenham(Cell a, Cell b) {
  std::vector<Cell> out;
  int dx = std::abs(b.x - a.x);
  int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Cell c = a;
  while (true) {
    out.push_back(c);
    if (c == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      c.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      c.y += sy;
    }
  }
  return out;
}

void update_occupancy(OccupancyGrid& grid, const RobotPose& robot,
                      std::span<const RangeBeam> scan, double max_range) {
  const Vec2 origin(robot.x, robot.y);
  const Cell start = grid.world_to_cell(origin);
  std::vector<Cell> freed;
  std::vector<Cell> hits;
  for (const auto& beam : scan) {
    const double d = std::min(beam.distance, max_range);
    const double yaw = robot.theta + beam.bearing;
    const Vec2 end = origin + d * Vec2(std::cos(yaw), std::sin(yaw));
    auto line = bresenham(start, grid.world_to_cell(end));
    // A hit on the grid edge lands one cell outside; it belongs to the last
    // cell inside.
    std::size_t n_in = 0;
    while (n_in < line.size() && grid.in_bounds(line[n_in])) ++n_in;
    line.resize(n_in);
    if (line.empty()) continue;
    const std::size_t n_free = beam.hit ? line.size() - 1 : line.size();
    freed.insert(freed.end(), line.begin(), line.begin() + n_free);
    if (beam.hit) hits.push_back(line.back());
  }
  for (const Cell& c : freed) grid.set(c, CellState::kFree);
  for (const Cell& c : hits) grid.set(c, CellState::kOccupied);
}

bool is_frontier_cell(const OccupancyGrid& grid, Cell c) {
  if (grid.at(c) != CellState::kFree) return false;
  constexpr int kDx[] = {1, -1, 0, 0};
  constexpr int kDy[] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const Cell n{c.x + kDx[k], c.y + kDy[k]};
    if (grid.in_bounds(n) && grid.at(n) == CellState::kUnknown) return true;
  }
  return false;
}

namespace {

// Flood fill over `member` cells (8-connected) starting at `seed`, marking
// visited cells in `taken`, stopping after `limit` cells when limit > 0.
std::vector<Cell> grow(const OccupancyGrid& grid,
                       const std::vector<std::uint8_t>& member,
                       std::vector<std::uint8_t>& taken, Cell seed, int limit) {
  const auto idx = [&](Cell c) {
    return static_cast<std::size_t>(c.y) * grid.width() + c.x;
  };
  std::vector<Cell> out;
  std::queue<Cell> q;
  q.push(seed);
  taken[idx(seed)] = 1;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    out.push_back(c);
    if (limit > 0 && static_cast<int>(out.size()) >= limit) break;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell n{c.x + dx, c.y + dy};
        if (!grid.in_bounds(n) || !member[idx(n)] || taken[idx(n)]) continue;
        taken[idx(n)] = 1;
        q.push(n);
      }
    }
  }
  // Cells queued but not consumed go back to the pool.
  while (!q.empty()) {
    taken[idx(q.front())] = 0;
    q.pop();
  }
  return out;
}

Frontier make_frontier(const OccupancyGrid& grid, std::vector<Cell> cells,
                       const RobotPose& robot) {
  Frontier f;
  Vec2 sum = Vec2::Zero();
  for (const Cell& c : cells) sum += grid.cell_center(c);
  f.centroid = sum / static_cast<double>(cells.size());
  f.bearing_from_robot =
      std::atan2(f.centroid.y() - robot.y, f.centroid.x() - robot.x);
  f.cells = std::move(cells);
  return f;
}

}  // namespace

std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid,
                                       const RobotPose& robot,
                                       const FrontierParams& params) {
  const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
  std::vector<std::uint8_t> member(n, 0);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      member[static_cast<std::size_t>(y) * grid.width() + x] =
          is_frontier_cell(grid, {x, y}) ? 1 : 0;
    }
  }

  std::vector<Frontier> out;
  std::vector<std::uint8_t> taken(n, 0);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * grid.width() + x;
      if (!member[i] || taken[i]) continue;
      auto cluster = grow(grid, member, taken, {x, y}, 0);
      if (static_cast<int>(cluster.size()) < params.min_cells) continue;
      if (params.max_cells <= 0 ||
          static_cast<int>(cluster.size()) <= params.max_cells) {
        out.push_back(make_frontier(grid, std::move(cluster), robot));
        continue;
      }
      // Split into connected chunks seeded in row-major order.
      std::sort(cluster.begin(), cluster.end(), [](Cell a, Cell b) {
        return std::tie(a.y, a.x) < std::tie(b.y, b.x);
      });
      std::vector<std::uint8_t> sub(n, 0);
      std::vector<std::uint8_t> sub_taken(n, 0);
      for (const Cell& c : cluster) {
        sub[static_cast<std::size_t>(c.y) * grid.width() + c.x] = 1;
      }
      for (const Cell& c : cluster) {
        if (sub_taken[static_cast<std::size_t>(c.y) * grid.width() + c.x]) {
          continue;
        }
        auto chunk = grow(grid, sub, sub_taken, c, params.max_cells);
        out.push_back(make_frontier(grid, std::move(chunk), robot));
      }
    }
  }
  return out;
}

double frontier_utility(const Frontier& f, const RobotPose& robot,
                        double target_bearing, double alpha, double lambda) {
  const double dist = std::hypot(f.centroid.x() - robot.x,
                                 f.centroid.y() - robot.y);
  return alpha * std::cos(f.bearing_from_robot - target_bearing) -
         lambda * dist;
}

std::size_t score_frontiers(std::span<const Frontier> frontiers,
                            const RobotPose& robot,
                            const DirectionEstimate& target_dir, double alpha,
                            double lambda) {
  if (frontiers.empty()) {
    throw Error(ErrorCode::kNoFrontiers, "no frontier to score");
  }
  const double bearing = target_dir.bearing();
  std::size_t best = 0;
  double best_u = frontier_utility(frontiers[0], robot, bearing, alpha, lambda);
  for (std::size_t i = 1; i < frontiers.size(); ++i) {
    const double u = frontier_utility(frontiers[i], robot, bearing, alpha, lambda);
    const auto& a = frontiers[i].centroid;
    const auto& b = frontiers[best].centroid;
    if (u > best_u ||
        (u == best_u && std::tie(a.y(), a.x()) < std::tie(b.y(), b.x()))) {
      best = i;
      best_u = u;
    }
  }
  return best;
}

std::vector<std::uint8_t> blocked_mask(const OccupancyGrid& grid,
                                       int inflation_cells) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (grid.at({x, y}) != CellState::kOccupied) continue;
      for (int dy = -inflation_cells; dy <= inflation_cells; ++dy) {
        for (int dx = -inflation_cells; dx <= inflation_cells; ++dx) {
          const Cell n{x + dx, y + dy};
          if (grid.in_bounds(n)) {
            blocked[static_cast<std::size_t>(n.y) * w + n.x] = 1;
          }
        }
      }
    }
  }
  return blocked;
}

std::optional<std::vector<Cell>> plan_path(const OccupancyGrid& grid, Cell from,
                                           Cell to, const PlanParams& params) {
  if (!grid.in_bounds(from) || !grid.in_bounds(to)) return std::nullopt;
  if (grid.at(from) == CellState::kOccupied ||
      grid.at(to) == CellState::kOccupied) {
    return std::nullopt;
  }
  if (from == to) return std::vector<Cell>{from};

  const int w = grid.width();
  const auto idx = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + c.x; };
  const auto blocked = blocked_mask(grid, params.inflation_cells);
  const auto passable = [&](Cell c) {
    if (!grid.in_bounds(c)) return false;
    if (c == from || c == to) return grid.at(c) != CellState::kOccupied;
    return blocked[idx(c)] == 0;
  };
  const auto heuristic = [&](Cell c) {
    const double dx = std::abs(c.x - to.x);
    const double dy = std::abs(c.y - to.y);
    return (dx + dy) + (std::numbers::sqrt2 - 2.0) * std::min(dx, dy);
  };

  const std::size_t n = static_cast<std::size_t>(w) * grid.height();
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  using Entry = std::tuple<double, double, std::size_t>;  // f, h, index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[idx(from)] = 0.0;
  open.emplace(heuristic(from), heuristic(from), idx(from));

  while (!open.empty()) {
    const auto [f, h, i] = open.top();
    open.pop();
    if (closed[i]) continue;
    closed[i] = 1;
    const Cell c{static_cast<int>(i % w), static_cast<int>(i / w)};
    if (c == to) break;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell nb{c.x + dx, c.y + dy};
        if (!passable(nb)) continue;
        if (dx != 0 && dy != 0 &&
            (!passable({c.x + dx, c.y}) || !passable({c.x, c.y + dy}))) {
          continue;
        }
        const std::size_t j = idx(nb);
        if (closed[j]) continue;
        const double step = (dx != 0 && dy != 0) ? std::numbers::sqrt2 : 1.0;
        const double cand = g[i] + step;
        if (cand < g[j]) {
          g[j] = cand;
          parent[j] = static_cast<std::int64_t>(i);
          const double hj = heuristic(nb);
          open.emplace(cand + hj, hj, j);
        }
      }
    }
  }
  if (!closed[idx(to)]) return std::nullopt;

  std::vector<Cell> path;
  for (std::int64_t i = static_cast<std::int64_t>(idx(to)); i >= 0;
       i = parent[static_cast<std::size_t>(i)]) {
    path.push_back({static_cast<int>(i % w), static_cast<int>(i / w)});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

double path_length_cells(std::span<const Cell> path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const bool diag = path[i].x != path[i - 1].x && path[i].y != path[i - 1].y;
    len += diag ? std::numbers::sqrt2 : 1.0;
  }
  return len;
}

}  // namespace eznav
