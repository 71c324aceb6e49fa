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

// Closed-loop episode driver: render -> perceive -> navigation_tick -> move.

#ifndef EZNAV_EPISODE_HPP_
#define EZNAV_EPISODE_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "eznav/navigator.hpp"
#include "eznav/perception.hpp"
#include "eznav/sim_world.hpp"

namespace eznav {

enum class OcclusionKind { kShort, kLong };
enum class Suite { kShort, kLong, kMixed };

std::string_view to_string(OcclusionKind k);
std::string_view to_string(Suite s);
// Accepts "short", "long", "mixed"; throws Error(kInvalidConfig).
Suite parse_suite(std::string_view s);

struct OcclusionEvent {
  double t_start = 0.0;
  double duration = 0.0;
  OcclusionKind kind = OcclusionKind::kShort;
};

// Scripted occlusions force the scorer to pure noise.
struct OcclusionScript {
  std::vector<OcclusionEvent> events;  // sorted, non-overlapping

  bool active(double t) const;
  // Short or Long when all events share that kind, Mixed otherwise (and for
  // an empty script).
  Suite label() const;
  void validate() const;  // throws Error(kInvalidConfig)
};

struct EpisodeConfig {
  int config_version = 1;
  std::uint64_t seed = 0;
  long step_budget = 2000;
  WorldSpec world;
  CameraModel camera;
  double mount_height = 1.0;
  PerceptionParams perception;
  ScorerParams scorer;
  RangeSensorParams sensor;
  NavConfig navigator;
  AblationFlags flags;
  OcclusionScript occlusion_script;
  double grid_resolution = 0.5;
  double robot_radius = 0.3;
  double success_radius = 5.0;
  double min_start_distance = 0.0;

  void validate() const;  // throws Error(kInvalidConfig)
};

struct InvisibilityInterval {
  double t_lost = 0.0;
  long step_lost = 0;
  std::optional<double> t_recovered;
  double path_during = 0.0;  // meters travelled while not re-observed
  // Still open when the robot reached the target; recovery was never needed.
  bool censored = false;
};

struct TrajectoryRecord {
  double t = 0.0;
  long step = 0;
  RobotPose pose;
  NavMode mode = NavMode::kTrackVisible;
  bool visible = false;  // detector verdict
  std::optional<int> deciding_level;
  std::optional<double> live_bearing;
  double steering_bearing = 0.0;
  TileIndex anchor;
  double visibility_fraction = 0.0;
  bool script_active = false;
  std::vector<NavEvent> events;
};

struct EpisodeResult {
  bool success = false;
  NavMode final_mode = NavMode::kTrackVisible;
  long steps = 0;
  double path_length = 0.0;
  double final_distance = 0.0;
  long collisions = 0;
  long keyframes = 0;
  std::vector<InvisibilityInterval> intervals;
  std::vector<TrajectoryRecord> trajectory;
};

// Deterministic for a given config. Throws Error(kInvalidConfig).
EpisodeResult run_episode(const EpisodeConfig& cfg);

}  // namespace eznav

#endif  // EZNAV_EPISODE_HPP_
