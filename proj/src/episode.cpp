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

#include "eznav/episode.hpp"

#include <cmath>
#include <random>
#include <string>

#include "eznav/error.hpp"

namespace eznav {

std::string_view to_string(OcclusionKind k) {
  return k == OcclusionKind::kShort ? "short" : "long";
}

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::kShort: return "short";
    case Suite::kLong: return "long";
    case Suite::kMixed: return "mixed";
  }
  return "?";
}

Suite parse_suite(std::string_view s) {
  if (s == "short") return Suite::kShort;
  if (s == "long") return Suite::kLong;
  if (s == "mixed") return Suite::kMixed;
  throw Error(ErrorCode::kInvalidConfig, "unknown suite '" + std::string(s) + "'");
}

bool OcclusionScript::active(double t) const {
  for (const auto& e : events) {
    if (t >= e.t_start && t < e.t_start + e.duration) return true;
  }
  return false;
}

Suite OcclusionScript::label() const {
  bool any_short = false;
  bool any_long = false;
  for (const auto& e : events) {
    (e.kind == OcclusionKind::kShort ? any_short : any_long) = true;
  }
  if (any_short && !any_long) return Suite::kShort;
  if (any_long && !any_short) return Suite::kLong;
  return Suite::kMixed;
}

void OcclusionScript::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!(events[i].duration > 0.0) || events[i].t_start < 0.0) {
      throw Error(ErrorCode::kInvalidConfig, "occlusion event needs t_start >= 0 "
                                             "and a positive duration");
    }
    if (i > 0 && events[i].t_start < events[i - 1].t_start + events[i - 1].duration) {
      throw Error(ErrorCode::kInvalidConfig,
                  "occlusion events must be sorted and non-overlapping");
    }
  }
}

void EpisodeConfig::validate() const {
  if (config_version != 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "unsupported config_version " + std::to_string(config_version));
  }
  if (step_budget <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "step_budget must be positive");
  }
  if (!(mount_height > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "mount_height must be positive");
  }
  if (!(grid_resolution > 0.0) || robot_radius < 0.0 || !(success_radius > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "grid_resolution, robot_radius and success_radius must be "
                "positive");
  }
  if (sensor.beams <= 0 || !(sensor.max_range > 0.0) || !(sensor.fov > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad range sensor parameters");
  }
  world.validate(min_start_distance);
  camera.validate();
  if (camera.width != perception.layout.image_width ||
      camera.height != perception.layout.image_height) {
    throw Error(ErrorCode::kInvalidConfig, "camera and layout image sizes differ");
  }
  try {
    validate_layout(perception.layout);
    perception.fusion.validate(perception.layout.num_levels() - 1);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.detail());
  }
  perception.visibility.validate();
  scorer.validate();
  navigator.validate();
  occlusion_script.validate();
}

namespace {

bool collides(const EpisodeConfig& cfg, const OccupancyGrid& grid,
              const Vec2& p) {
  const double r = cfg.robot_radius;
  if (p.x() < r || p.y() < r || p.x() > cfg.world.width - r ||
      p.y() > cfg.world.height - r) {
    return true;
  }
  for (const auto& b : cfg.world.occluders) {
    if (b.contains(p, r)) return true;
  }
  const Cell c = grid.world_to_cell(p);
  return grid.in_bounds(c) && grid.at(c) == CellState::kOccupied;
}

}  // namespace

EpisodeResult run_episode(const EpisodeConfig& cfg) {
  cfg.validate();

  NavConfig nav = cfg.navigator;
  nav.visibility = cfg.perception.visibility;
  nav.direction_fusion = nav.direction_fusion && cfg.flags.direction_fusion;
  nav.active_search = nav.active_search && cfg.flags.active_search;

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cfg.scorer.rng_seed),
                    static_cast<std::uint32_t>(cfg.scorer.rng_seed >> 32)};
  std::mt19937_64 rng(seq);

  OccupancyGrid grid = OccupancyGrid::for_world(cfg.world.width, cfg.world.height,
                                                cfg.grid_resolution);
  KeyframeWindow window(nav.window_size);
  NavState state;
  state.robot = cfg.world.start;

  EpisodeResult result;
  bool prev_visible = true;
  std::optional<InvisibilityInterval> open;
  double open_path_start = 0.0;

  for (long step = 0; step < cfg.step_budget; ++step) {
    const double t = step * nav.dt;
    const Pose pose = Pose::level_camera(state.robot.x, state.robot.y,
                                         cfg.mount_height, state.robot.theta);
    const bool script = cfg.occlusion_script.active(t);
    RenderInfo info;
    auto grids = render_score_grid(cfg.world, cfg.camera, pose,
                                   cfg.perception.layout, cfg.scorer, script,
                                   rng, &info);
    const PerceptionOutput po =
        perceive(std::move(grids), cfg.perception, cfg.flags, cfg.camera, pose);

    // Interval bookkeeping uses the real detector even when the navigator
    // is handed a forced verdict.
    const bool detected = po.verdict.visible;
    bool reid = false;
    if (detected) {
      const LevelStats* st = po.verdict.deciding();
      reid = window.empty() ||
             (st && reid_match(po.salient_descriptor, *st, window,
                               nav.visibility, nav.tau_reid));
    }
    if (open && detected && reid) {
      open->t_recovered = t;
      open->path_during = result.path_length - open_path_start;
      result.intervals.push_back(*open);
      open.reset();
    } else if (!open && prev_visible && !detected) {
      open = InvisibilityInterval{t, step, std::nullopt, 0.0};
      open_path_start = result.path_length;
    }
    prev_visible = detected;

    TickInput in;
    in.time = t;
    in.verdict = po.verdict;
    if (!cfg.flags.visibility_detection && !in.verdict.visible) {
      in.verdict.visible = true;
      in.verdict.deciding_level = cfg.perception.layout.num_levels() - 1;
    }
    if (in.verdict.visible) in.live_dir = po.direction;
    in.anchor_descriptor = po.salient_descriptor;
    in.salient_score = po.salient_score;
    in.local_mean = po.local_mean;
    in.local_std = po.local_std;
    in.camera_pose = pose;
    in.scan = range_scan(cfg.world, state.robot, cfg.sensor);
    in.max_range = cfg.sensor.max_range;
    in.target_reached =
        (cfg.world.target.position - Vec2(state.robot.x, state.robot.y)).norm() <=
        cfg.success_radius;

    const RobotPose before = state.robot;
    TickOutput out = navigation_tick(state, in, grid, window, nav);
    if (out.keyframe_recorded) ++result.keyframes;

    TrajectoryRecord rec;
    rec.t = t;
    rec.step = step;
    rec.pose = before;
    rec.mode = state.mode;
    rec.visible = detected;
    rec.deciding_level = po.verdict.deciding_level;
    if (in.live_dir) rec.live_bearing = in.live_dir->bearing();
    rec.steering_bearing = state.steering.bearing();
    rec.anchor = po.pyramid.anchor;
    rec.visibility_fraction = info.visibility;
    rec.script_active = script;
    rec.events = std::move(out.events);
    result.trajectory.push_back(std::move(rec));
    result.steps = step + 1;

    if (is_terminal(state.mode)) break;

    // Unicycle step; translation is refused on collision.
    const double theta = wrap_angle(state.robot.theta + out.command.angular * nav.dt);
    const Vec2 from(state.robot.x, state.robot.y);
    const Vec2 to = from + out.command.linear * nav.dt *
                               Vec2(std::cos(state.robot.theta),
                                    std::sin(state.robot.theta));
    if (out.command.linear > 0.0 && collides(cfg, grid, to)) {
      ++result.collisions;
    } else {
      state.robot.x = to.x();
      state.robot.y = to.y();
      result.path_length += (to - from).norm();
    }
    state.robot.theta = theta;
  }

  result.final_mode = state.mode;
  result.success = state.mode == NavMode::kDone;
  if (open) {
    open->path_during = result.path_length - open_path_start;
    open->censored = result.success;
    result.intervals.push_back(*open);
  }
  result.final_distance =
      (cfg.world.target.position - Vec2(state.robot.x, state.robot.y)).norm();
  return result;
}

}  // namespace eznav
