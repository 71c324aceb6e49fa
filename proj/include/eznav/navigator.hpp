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

// Visibility-aware navigation mode machine on top of frontier exploration.
//
// navigation_tick is the only function that mutates NavState, the keyframe
// window and the occupancy grid. The simulator supplies sensing and applies
// the returned command.

#ifndef EZNAV_NAVIGATOR_HPP_
#define EZNAV_NAVIGATOR_HPP_

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eznav/geometry.hpp"
#include "eznav/heading_memory.hpp"
#include "eznav/occupancy.hpp"
#include "eznav/visibility.hpp"

namespace eznav {

enum class NavMode {
  kTrackVisible,
  kOccludedFused,
  kActiveSearch,
  kFallback,
  kDone,
  kFailed,
};

std::string_view to_string(NavMode m);
bool is_terminal(NavMode m);

// kFixedHeading holds the last observed direction while the target is not
// visible: no frontier exploration, fusion, search or fallback.
enum class Policy { kFull, kFixedHeading };

std::string_view to_string(Policy p);
// Accepts "full" and "fixed-heading"; throws Error(kInvalidConfig).
Policy parse_policy(std::string_view s);

struct NavConfig {
  double dt = 0.2;
  double v_max = 1.5;
  double omega_max = 1.0;
  double heading_gain = 2.0;
  double lookahead = 1.5;
  double max_drive_error = 60.0 * std::numbers::pi / 180.0;

  double alpha = 1.0;
  double lambda = 0.02;
  FrontierParams frontier;
  PlanParams plan;
  int replan_interval = 5;  // ticks
  // While tracking, frontiers farther off the live direction than this are
  // skipped in favor of driving along it.
  double track_max_deviation = 45.0 * std::numbers::pi / 180.0;

  int keyframe_interval = 5;  // ticks
  std::size_t window_size = 10;
  double decay = 0.9;  // per second
  double tau_reid = 0.8;
  VisibilityParams visibility;

  double scan_half_range = 30.0 * std::numbers::pi / 180.0;
  double scan_step = 10.0 * std::numbers::pi / 180.0;
  double fallback_step = 30.0 * std::numbers::pi / 180.0;
  double heading_tolerance = 3.0 * std::numbers::pi / 180.0;
  int max_failed_searches = 3;

  Policy policy = Policy::kFull;
  bool direction_fusion = true;
  bool active_search = true;  // also gates the fallback

  void validate() const;  // throws Error(kInvalidConfig)
};

struct ControlCommand {
  double linear = 0.0;   // [0, v_max]
  double angular = 0.0;  // [-omega_max, omega_max]

  // Clamps both components into the configured bounds.
  static ControlCommand bounded(double linear, double angular,
                                const NavConfig& cfg);
};

// Sensing handed to one tick.
struct TickInput {
  double time = 0.0;
  VisibilityVerdict verdict;
  std::optional<DirectionEstimate> live_dir;  // present iff verdict.visible
  std::vector<double> anchor_descriptor;
  double salient_score = 0.0;
  double local_mean = 0.0;
  double local_std = 0.0;
  Pose camera_pose;
  std::vector<RangeBeam> scan;
  double max_range = 20.0;
  bool target_reached = false;  // judged by the simulator
};

enum class EventKind {
  kModeChange,
  kKeyframe,
  kLost,
  kRecovered,
  kGoal,
  kSearchFailed,
  kUnreachable,
};

std::string_view to_string(EventKind k);

struct NavEvent {
  EventKind kind = EventKind::kModeChange;
  double time = 0.0;
  long step = 0;
  NavMode from = NavMode::kTrackVisible;
  NavMode to = NavMode::kTrackVisible;
  std::string detail;
};

struct NavState {
  NavMode mode = NavMode::kTrackVisible;
  RobotPose robot;
  long step = 0;
  int failed_search_count = 0;
  std::vector<double> scan_plan;  // world headings still to visit
  std::size_t scan_index = 0;

  std::optional<Vec2> goal;
  std::vector<Cell> path;
  int ticks_since_plan = 0;
  std::vector<Vec2> exhausted_goals;  // searched without re-identification
  bool fallback_arrived = false;

  int visible_ticks = 0;
  std::optional<DirectionEstimate> last_live;
  DirectionEstimate steering;  // direction used for frontier selection
};

struct TickOutput {
  ControlCommand command;
  std::vector<NavEvent> events;
  bool keyframe_recorded = false;
};

// Advances the mode machine by one tick.
TickOutput navigation_tick(NavState& state, const TickInput& input,
                           OccupancyGrid& grid, KeyframeWindow& window,
                           const NavConfig& cfg);

// Headings of an active-search scan centred on `center`.
std::vector<double> active_search_plan(double center, const NavConfig& cfg);
// Look-around headings starting at `start`, covering 360 deg - step.
std::vector<double> look_around_plan(double start, const NavConfig& cfg);

}  // namespace eznav

#endif  // EZNAV_NAVIGATOR_HPP_
