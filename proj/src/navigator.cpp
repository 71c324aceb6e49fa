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

#include "eznav/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "eznav/error.hpp"

namespace eznav {

std::string_view to_string(NavMode m) {
  switch (m) {
    case NavMode::kTrackVisible: return "TrackVisible";
    case NavMode::kOccludedFused: return "OccludedFused";
    case NavMode::kActiveSearch: return "ActiveSearch";
    case NavMode::kFallback: return "Fallback";
    case NavMode::kDone: return "Done";
    case NavMode::kFailed: return "Failed";
  }
  return "?";
}

bool is_terminal(NavMode m) {
  return m == NavMode::kDone || m == NavMode::kFailed;
}

std::string_view to_string(Policy p) {
  return p == Policy::kFull ? "full" : "fixed-heading";
}

Policy parse_policy(std::string_view s) {
  if (s == "full") return Policy::kFull;
  if (s == "fixed-heading" || s == "fixed_heading") return Policy::kFixedHeading;
  throw Error(ErrorCode::kInvalidConfig, "unknown policy '" + std::string(s) + "'");
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kModeChange: return "mode_change";
    case EventKind::kKeyframe: return "keyframe";
    case EventKind::kLost: return "lost";
    case EventKind::kRecovered: return "recovered";
    case EventKind::kGoal: return "goal";
    case EventKind::kSearchFailed: return "search_failed";
    case EventKind::kUnreachable: return "unreachable";
  }
  return "?";
}

void NavConfig::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(dt > 0.0, "dt must be positive");
  require(v_max > 0.0, "v_max must be positive");
  require(omega_max > 0.0, "omega_max must be positive");
  require(heading_gain > 0.0, "heading_gain must be positive");
  require(lookahead > 0.0, "lookahead must be positive");
  require(max_drive_error > 0.0, "max_drive_error must be positive");
  require(alpha >= 0.0 && lambda >= 0.0, "alpha and lambda must be >= 0");
  require(frontier.min_cells >= 1, "min_frontier_cells must be >= 1");
  require(frontier.max_cells >= 0, "max_frontier_cells must be >= 0");
  require(plan.inflation_cells >= 0, "inflation must be >= 0");
  require(track_max_deviation > 0.0, "track_max_deviation must be positive");
  require(replan_interval >= 1, "replan_interval must be >= 1");
  require(keyframe_interval >= 1, "keyframe_interval must be >= 1");
  require(window_size >= 1, "window_size must be >= 1");
  require(decay > 0.0 && decay <= 1.0, "decay must be in (0, 1]");
  require(tau_reid >= -1.0 && tau_reid <= 1.0, "tau_reid must be in [-1, 1]");
  require(scan_half_range >= 0.0, "scan_half_range must be >= 0");
  require(scan_step > 0.0, "scan_step must be positive");
  require(fallback_step > 0.0, "fallback_step must be positive");
  require(heading_tolerance > 0.0, "heading_tolerance must be positive");
  require(max_failed_searches >= 1, "max_failed_searches must be >= 1");
  visibility.validate();
}

ControlCommand ControlCommand::bounded(double linear, double angular,
                                       const NavConfig& cfg) {
  return {std::clamp(linear, 0.0, cfg.v_max),
          std::clamp(angular, -cfg.omega_max, cfg.omega_max)};
}

std::vector<double> active_search_plan(double center, const NavConfig& cfg) {
  const int n =
      static_cast<int>(std::floor(2.0 * cfg.scan_half_range / cfg.scan_step + 1e-9));
  std::vector<double> plan;
  for (int i = 0; i <= n; ++i) {
    plan.push_back(wrap_angle(center - cfg.scan_half_range + i * cfg.scan_step));
  }
  return plan;
}

std::vector<double> look_around_plan(double start, const NavConfig& cfg) {
  const int n = std::max(
      1, static_cast<int>(std::ceil(2.0 * std::numbers::pi / cfg.fallback_step - 1e-9)));
  std::vector<double> plan;
  for (int i = 0; i < n; ++i) plan.push_back(wrap_angle(start + i * cfg.fallback_step));
  return plan;
}

namespace {

class Tick {
 public:
  Tick(NavState& s, const TickInput& in, OccupancyGrid& grid,
       KeyframeWindow& window, const NavConfig& cfg)
      : s_(s), in_(in), grid_(grid), window_(window), cfg_(cfg) {}

  TickOutput run();

 private:
  bool fixed() const { return cfg_.policy == Policy::kFixedHeading; }
  bool fusion_enabled() const { return !fixed() && cfg_.direction_fusion; }
  bool search_enabled() const { return !fixed() && cfg_.active_search; }

  void emit(EventKind kind, std::string detail = {}) {
    out_.events.push_back({kind, in_.time, s_.step, s_.mode, s_.mode,
                           std::move(detail)});
  }
  void set_mode(NavMode m) {
    if (m == s_.mode) return;
    out_.events.push_back(
        {EventKind::kModeChange, in_.time, s_.step, s_.mode, m, {}});
    s_.mode = m;
  }
  void clear_goal() {
    s_.goal.reset();
    s_.path.clear();
  }

  bool reidentified() const;
  void record_keyframe();
  DirectionEstimate occluded_direction() const;

  void track_visible();
  void occluded_fused();
  void active_search();
  void fallback();

  void enter_occluded();
  void enter_active_search();
  void begin_scan(std::vector<double> plan) {
    s_.scan_plan = std::move(plan);
    s_.scan_index = 0;
  }
  // Rotates toward the pending scan heading; true when the plan is exhausted.
  bool step_scan();

  bool select_frontier_goal(const DirectionEstimate& dir,
                            double max_deviation = std::numbers::pi);
  bool heading_goal(const DirectionEstimate& dir);
  bool plan_to_goal();
  bool at_goal() const;
  void follow_path();
  void turn_to(double heading);

  Vec2 robot_xy() const { return {s_.robot.x, s_.robot.y}; }
  double arrival_radius() const { return 2.0 * grid_.resolution(); }

  NavState& s_;
  const TickInput& in_;
  OccupancyGrid& grid_;
  KeyframeWindow& window_;
  const NavConfig& cfg_;
  TickOutput out_;
};

bool Tick::reidentified() const {
  if (!in_.verdict.visible) return false;
  if (window_.empty()) return true;
  const LevelStats* st = in_.verdict.deciding();
  if (st == nullptr) return false;
  return reid_match(in_.anchor_descriptor, *st, window_, cfg_.visibility,
                    cfg_.tau_reid);
}

void Tick::record_keyframe() {
  const LevelStats* st = in_.verdict.deciding();
  Keyframe kf;
  kf.timestamp = in_.time;
  kf.step = s_.step;
  kf.salient_descriptor = in_.anchor_descriptor;
  kf.score = in_.salient_score;
  kf.local_mean = in_.local_mean;
  kf.local_std = in_.local_std;
  kf.sparsity_ratio = st ? st->ratio : 0.0;
  kf.level_std = st ? st->std : 0.0;
  kf.direction = in_.live_dir->direction;
  kf.robot_pose = in_.camera_pose;
  window_.record(std::move(kf));
  out_.keyframe_recorded = true;
  emit(EventKind::kKeyframe);
}

DirectionEstimate Tick::occluded_direction() const {
  if (fusion_enabled() && !window_.empty()) {
    return fuse_directions(window_, in_.time, cfg_.decay);
  }
  if (s_.last_live) return *s_.last_live;
  DirectionEstimate d;
  d.direction = Vec3(std::cos(s_.robot.theta), std::sin(s_.robot.theta), 0.0);
  d.confidence = 0.0;
  return d;
}

void Tick::turn_to(double heading) {
  const double e = wrap_angle(heading - s_.robot.theta);
  out_.command = ControlCommand::bounded(0.0, cfg_.heading_gain * e, cfg_);
}

bool Tick::at_goal() const {
  return s_.goal && (robot_xy() - *s_.goal).norm() <= arrival_radius();
}

bool Tick::plan_to_goal() {
  const Cell from = grid_.world_to_cell(robot_xy());
  const Cell to = grid_.world_to_cell(*s_.goal);
  auto path = plan_path(grid_, from, to, cfg_.plan);
  s_.ticks_since_plan = 0;
  if (!path) {
    s_.path.clear();
    return false;
  }
  s_.path = std::move(*path);
  return true;
}

bool Tick::select_frontier_goal(const DirectionEstimate& dir,
                                double max_deviation) {
  auto frontiers = detect_frontiers(grid_, s_.robot, cfg_.frontier);
  const double yaw = dir.bearing();
  std::erase_if(frontiers, [&](const Frontier& f) {
    if ((f.centroid - robot_xy()).norm() <= arrival_radius()) return true;
    if (std::abs(wrap_angle(f.bearing_from_robot - yaw)) > max_deviation) return true;
    return std::any_of(s_.exhausted_goals.begin(), s_.exhausted_goals.end(),
                       [&](const Vec2& g) { return (f.centroid - g).norm() < 3.0; });
  });
  while (!frontiers.empty()) {
    const std::size_t best =
        score_frontiers(frontiers, s_.robot, dir, cfg_.alpha, cfg_.lambda);
    const Frontier& f = frontiers[best];
    // Aim at the member cell nearest the centroid; the centroid itself may
    // sit in unknown or occupied space.
    Cell goal_cell = f.cells.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const Cell& c : f.cells) {
      const double d = (grid_.cell_center(c) - f.centroid).squaredNorm();
      if (d < best_d) {
        best_d = d;
        goal_cell = c;
      }
    }
    s_.goal = grid_.cell_center(goal_cell);
    if (plan_to_goal()) {
      std::ostringstream os;
      os << "frontier " << s_.goal->x() << "," << s_.goal->y();
      emit(EventKind::kGoal, os.str());
      return true;
    }
    emit(EventKind::kUnreachable);
    s_.exhausted_goals.push_back(f.centroid);
    frontiers.erase(frontiers.begin() + static_cast<std::ptrdiff_t>(best));
  }
  clear_goal();
  return false;
}

bool Tick::heading_goal(const DirectionEstimate& dir) {
  // Farthest plannable cell along the heading, up to 10 m out.
  const double yaw = dir.bearing();
  const Vec2 u(std::cos(yaw), std::sin(yaw));
  for (double r = 10.0; r > arrival_radius(); r -= grid_.resolution()) {
    const Vec2 p = robot_xy() + r * u;
    const Cell c = grid_.world_to_cell(p);
    if (!grid_.in_bounds(c) || grid_.at(c) == CellState::kOccupied) continue;
    s_.goal = grid_.cell_center(c);
    if (plan_to_goal()) {
      emit(EventKind::kGoal, "heading");
      return true;
    }
  }
  clear_goal();
  return false;
}

void Tick::follow_path() {
  if (s_.path.empty()) return;
  const Vec2 pos = robot_xy();
  // Closest path index, then the first point beyond the lookahead.
  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s_.path.size(); ++i) {
    const double d = (grid_.cell_center(s_.path[i]) - pos).squaredNorm();
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  std::size_t ahead = s_.path.size() - 1;
  for (std::size_t i = closest; i < s_.path.size(); ++i) {
    if ((grid_.cell_center(s_.path[i]) - pos).norm() >= cfg_.lookahead) {
      ahead = i;
      break;
    }
  }
  // Back off toward the path while the shortcut would clip an obstacle.
  const auto blocked = blocked_mask(grid_, cfg_.plan.inflation_cells);
  const Cell here = grid_.world_to_cell(pos);
  const auto clear = [&](Cell to) {
    for (const Cell& c : bresenham(here, to)) {
      if (c == here || !grid_.in_bounds(c)) continue;
      if (blocked[static_cast<std::size_t>(c.y) * grid_.width() + c.x]) return false;
    }
    return true;
  };
  while (ahead > closest + 1 && !clear(s_.path[ahead])) --ahead;
  Vec2 target = ahead + 1 == s_.path.size() && clear(s_.path[ahead])
                    ? *s_.goal
                    : grid_.cell_center(s_.path[ahead]);
  if ((target - pos).norm() < 0.25 * grid_.resolution() && ahead + 1 < s_.path.size()) {
    target = grid_.cell_center(s_.path[ahead + 1]);
  }
  const Vec2 delta = target - pos;
  if (delta.norm() < 1e-9) return;
  const double e = wrap_angle(std::atan2(delta.y(), delta.x()) - s_.robot.theta);
  const double v =
      std::abs(e) > cfg_.max_drive_error ? 0.0 : cfg_.v_max * std::cos(e);
  out_.command = ControlCommand::bounded(v, cfg_.heading_gain * e, cfg_);
}

void Tick::enter_occluded() {
  set_mode(NavMode::kOccludedFused);
  clear_goal();
  s_.scan_plan.clear();
  s_.scan_index = 0;
}

void Tick::enter_active_search() {
  set_mode(NavMode::kActiveSearch);
  begin_scan(active_search_plan(s_.robot.theta, cfg_));
}

bool Tick::step_scan() {
  // The perception of this tick was taken at the current heading.
  if (s_.scan_index < s_.scan_plan.size() &&
      std::abs(wrap_angle(s_.robot.theta - s_.scan_plan[s_.scan_index])) <=
          cfg_.heading_tolerance) {
    ++s_.scan_index;
  }
  if (s_.scan_index >= s_.scan_plan.size()) return true;
  turn_to(s_.scan_plan[s_.scan_index]);
  return false;
}

void Tick::track_visible() {
  s_.last_live = in_.live_dir;
  s_.steering = *in_.live_dir;
  // Only observations that re-identify against memory count as clearly
  // visible; a weak partial view would otherwise poison the descriptors.
  if (s_.visible_ticks % cfg_.keyframe_interval == 0 && reidentified()) {
    record_keyframe();
  }
  ++s_.visible_ticks;

  const bool need_goal = !s_.goal || at_goal() ||
                         s_.ticks_since_plan >= cfg_.replan_interval;
  if (need_goal && !select_frontier_goal(s_.steering, cfg_.track_max_deviation)) {
    heading_goal(s_.steering);
  }
  follow_path();
}

void Tick::occluded_fused() {
  s_.steering = occluded_direction();
  if (fixed()) {
    const bool need_goal = !s_.goal || at_goal() ||
                           s_.ticks_since_plan >= cfg_.replan_interval;
    if (need_goal && !heading_goal(s_.steering)) {
      turn_to(s_.steering.bearing());
      return;
    }
    follow_path();
    return;
  }
  if (s_.goal && at_goal()) {
    if (search_enabled()) {
      enter_active_search();
      active_search();
      return;
    }
    s_.exhausted_goals.push_back(*s_.goal);
    clear_goal();
  }
  if (s_.goal && s_.ticks_since_plan >= cfg_.replan_interval && !plan_to_goal()) {
    emit(EventKind::kUnreachable);
    s_.exhausted_goals.push_back(*s_.goal);
    clear_goal();
  }
  if (!s_.goal && !select_frontier_goal(s_.steering)) {
    if (search_enabled()) {
      enter_active_search();
      active_search();
      return;
    }
    if (!heading_goal(s_.steering)) {
      turn_to(s_.steering.bearing());
      return;
    }
  }
  follow_path();
}

void Tick::active_search() {
  if (!step_scan()) return;
  ++s_.failed_search_count;
  emit(EventKind::kSearchFailed, std::to_string(s_.failed_search_count));
  if (s_.goal) s_.exhausted_goals.push_back(*s_.goal);
  clear_goal();
  s_.scan_plan.clear();
  if (s_.failed_search_count >= cfg_.max_failed_searches) {
    set_mode(NavMode::kFallback);
    s_.fallback_arrived = false;
    fallback();
    return;
  }
  set_mode(NavMode::kOccludedFused);
  occluded_fused();
}

void Tick::fallback() {
  if (!s_.fallback_arrived) {
    if (!window_.empty()) {
      const Vec2 home = window_.latest().robot_pose.position.head<2>();
      if (!s_.goal || (*s_.goal - home).norm() > 1e-9) {
        s_.goal = home;
        if (!plan_to_goal()) emit(EventKind::kUnreachable, "keyframe pose");
      } else if (s_.ticks_since_plan >= cfg_.replan_interval) {
        plan_to_goal();
      }
      if (!at_goal() && !s_.path.empty()) {
        follow_path();
        return;
      }
    }
    s_.fallback_arrived = true;
    clear_goal();
    begin_scan(look_around_plan(s_.robot.theta, cfg_));
  }
  if (step_scan()) set_mode(NavMode::kFailed);
}

TickOutput Tick::run() {
  if (is_terminal(s_.mode)) {
    ++s_.step;
    return out_;
  }
  update_occupancy(grid_, s_.robot, in_.scan, in_.max_range);
  ++s_.ticks_since_plan;

  if (in_.target_reached) {
    set_mode(NavMode::kDone);
    ++s_.step;
    return out_;
  }

  const bool visible = in_.verdict.visible && in_.live_dir.has_value();
  if (s_.mode == NavMode::kTrackVisible) {
    if (!visible) {
      emit(EventKind::kLost);
      enter_occluded();
    }
  } else if (visible && reidentified()) {
    emit(EventKind::kRecovered);
    set_mode(NavMode::kTrackVisible);
    s_.failed_search_count = 0;
    s_.exhausted_goals.clear();
    s_.scan_plan.clear();
    s_.scan_index = 0;
    s_.fallback_arrived = false;
    s_.visible_ticks = 0;
    clear_goal();
  }

  switch (s_.mode) {
    case NavMode::kTrackVisible: track_visible(); break;
    case NavMode::kOccludedFused: occluded_fused(); break;
    case NavMode::kActiveSearch: active_search(); break;
    case NavMode::kFallback: fallback(); break;
    case NavMode::kDone:
    case NavMode::kFailed: break;
  }
  ++s_.step;
  return out_;
}

}  // namespace

TickOutput navigation_tick(NavState& state, const TickInput& input,
                           OccupancyGrid& grid, KeyframeWindow& window,
                           const NavConfig& cfg) {
  return Tick(state, input, grid, window, cfg).run();
}

}  // namespace eznav
