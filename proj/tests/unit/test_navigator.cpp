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

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "eznav/error.hpp"
#include "eznav/navigator.hpp"

namespace eznav {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

VisibilityVerdict visible_verdict() {
  VisibilityVerdict v;
  v.visible = true;
  v.deciding_level = 2;
  v.stats = {{0, 0.2, 0.03, 0.3, 1.5}, {1, 0.5, 0.05, 0.9, 1.8}, {2, 1.0, 0.3, 3.0, 3.0}};
  return v;
}

DirectionEstimate dir_at(double yaw) {
  DirectionEstimate d;
  d.direction = Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  return d;
}

TickInput visible_input(double t, double yaw, std::vector<double> desc = {1.0, 0.0}) {
  TickInput in;
  in.time = t;
  in.verdict = visible_verdict();
  in.live_dir = dir_at(yaw);
  in.anchor_descriptor = std::move(desc);
  in.local_std = 0.1;
  return in;
}

TickInput hidden_input(double t) {
  TickInput in;
  in.time = t;
  in.verdict.stats = visible_verdict().stats;
  for (auto& s : in.verdict.stats) s.ratio = 1.0;
  return in;
}

OccupancyGrid free_grid(int w = 40, int h = 40) {
  OccupancyGrid g(w, h, 0.5);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) g.set({x, y}, CellState::kFree);
  }
  return g;
}

void integrate(NavState& s, const ControlCommand& c, const NavConfig& cfg) {
  s.robot.theta = wrap_angle(s.robot.theta + c.angular * cfg.dt);
  s.robot.x += c.linear * std::cos(s.robot.theta) * cfg.dt;
  s.robot.y += c.linear * std::sin(s.robot.theta) * cfg.dt;
}

Keyframe kf(double t, double yaw, Vec2 at = Vec2::Zero()) {
  Keyframe k;
  k.timestamp = t;
  k.direction = dir_at(yaw).direction;
  k.sparsity_ratio = 2.0 + t;
  k.local_std = 0.1;
  k.salient_descriptor = {1.0, 0.0};
  k.robot_pose = Pose::level_camera(at.x(), at.y(), 1.0, yaw);
  return k;
}

TEST(Plans, ActiveSearchWithinThirtyDegrees) {
  NavConfig cfg;
  for (double c : {0.0, 1.0, 3.1, -3.1}) {
    const auto p = active_search_plan(c, cfg);
    EXPECT_EQ(p.size(), 7u);
    for (double h : p) EXPECT_LE(std::abs(wrap_angle(h - c)), 30 * kDeg + 1e-12);
    EXPECT_NEAR(wrap_angle(p.front() - c), -30 * kDeg, 1e-12);
    EXPECT_NEAR(wrap_angle(p.back() - c), 30 * kDeg, 1e-12);
  }
}

TEST(Plans, LookAroundCoversFullCircle) {
  NavConfig cfg;
  const auto p = look_around_plan(0.4, cfg);
  EXPECT_EQ(p.size(), 12u);
  EXPECT_GE((p.size() - 1) * cfg.fallback_step, 2 * std::numbers::pi - cfg.fallback_step - 1e-9);
}

TEST(Tick, VisibleAheadWithAlignedFrontier) {
  NavConfig cfg;
  cfg.frontier.max_cells = 0;
  // Known free strip west of x = 10 m, unknown beyond.
  OccupancyGrid g(40, 40, 0.5);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 20; ++x) g.set({x, y}, CellState::kFree);
  }
  KeyframeWindow w(cfg.window_size);
  NavState s;
  s.robot = {5.0, 10.0, 0.0};
  const auto out = navigation_tick(s, visible_input(0.0, 0.0), g, w, cfg);
  EXPECT_EQ(s.mode, NavMode::kTrackVisible);
  EXPECT_LE(std::abs(out.command.angular), cfg.omega_max);
  EXPECT_GT(out.command.linear, 0.0);
  ASSERT_TRUE(s.goal.has_value());
  EXPECT_GT(s.goal->x(), 9.0);
  EXPECT_TRUE(out.keyframe_recorded);
  EXPECT_EQ(w.size(), 1u);
}

TEST(Tick, LossSteersAlongFusedDirection) {
  NavConfig cfg;
  OccupancyGrid g(40, 40, 0.5);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 20; ++x) g.set({x, y}, CellState::kFree);
  }
  KeyframeWindow w(cfg.window_size);
  w.record(kf(0.0, 0.1));
  w.record(kf(1.0, 0.2));
  w.record(kf(2.0, 0.3));
  NavState s;
  s.robot = {5.0, 10.0, 0.0};
  const auto out = navigation_tick(s, hidden_input(3.0), g, w, cfg);
  EXPECT_EQ(s.mode, NavMode::kOccludedFused);
  const auto fused = fuse_directions(w, 3.0, cfg.decay);
  EXPECT_NEAR(s.steering.bearing(), fused.bearing(), 1e-12);
  ASSERT_GE(out.events.size(), 2u);
  EXPECT_EQ(out.events[0].kind, EventKind::kLost);
  EXPECT_EQ(out.events[1].kind, EventKind::kModeChange);
  EXPECT_EQ(out.events[1].to, NavMode::kOccludedFused);
}

TEST(Tick, FusionOffUsesLastLive) {
  NavConfig cfg;
  cfg.direction_fusion = false;
  OccupancyGrid g = free_grid();
  KeyframeWindow w(cfg.window_size);
  NavState s;
  s.robot = {5.0, 10.0, 0.0};
  navigation_tick(s, visible_input(0.0, 0.4), g, w, cfg);
  w.record(kf(0.1, -1.0));
  navigation_tick(s, hidden_input(0.2), g, w, cfg);
  EXPECT_NEAR(s.steering.bearing(), 0.4, 1e-12);
}

TEST(Tick, ExhaustedSearchesLeadToFallback) {
  NavConfig cfg;
  OccupancyGrid g = free_grid();  // no frontiers anywhere
  KeyframeWindow w(cfg.window_size);
  const Vec2 home(15.0, 10.0);
  w.record(kf(0.0, 0.0, home));
  NavState s;
  s.mode = NavMode::kOccludedFused;
  s.robot = {5.0, 10.0, 0.0};
  int searches_failed = 0;
  std::set<NavMode> seen;
  for (int i = 0; i < 2000 && s.mode != NavMode::kFallback; ++i) {
    const auto out = navigation_tick(s, hidden_input(1.0 + 0.2 * i), g, w, cfg);
    for (const auto& e : out.events) {
      if (e.kind == EventKind::kSearchFailed) ++searches_failed;
    }
    seen.insert(s.mode);
    integrate(s, out.command, cfg);
  }
  EXPECT_TRUE(seen.count(NavMode::kActiveSearch));
  ASSERT_EQ(s.mode, NavMode::kFallback);
  EXPECT_EQ(searches_failed, cfg.max_failed_searches);
  ASSERT_TRUE(s.goal.has_value());
  EXPECT_NEAR((*s.goal - home).norm(), 0.0, 1e-9);
}

TEST(Tick, FallbackLookAroundEndsInFailed) {
  NavConfig cfg;
  OccupancyGrid g = free_grid();
  KeyframeWindow w(cfg.window_size);
  w.record(kf(0.0, 0.0, Vec2(5.0, 10.0)));
  NavState s;
  s.mode = NavMode::kFallback;
  s.robot = {5.0, 10.0, 0.0};
  double turned = 0.0;
  int i = 0;
  for (; i < 2000 && s.mode == NavMode::kFallback; ++i) {
    const auto out = navigation_tick(s, hidden_input(1.0 + 0.2 * i), g, w, cfg);
    turned += std::abs(out.command.angular) * cfg.dt;
    integrate(s, out.command, cfg);
  }
  EXPECT_EQ(s.mode, NavMode::kFailed);
  EXPECT_GE(turned, 2 * std::numbers::pi - cfg.fallback_step - 2 * cfg.heading_tolerance);
}

TEST(Tick, RecoveryRequiresReid) {
  NavConfig cfg;
  OccupancyGrid g = free_grid();
  KeyframeWindow w(cfg.window_size);
  w.record(kf(0.0, 0.0));
  NavState s;
  s.mode = NavMode::kOccludedFused;
  s.robot = {5.0, 10.0, 0.0};
  navigation_tick(s, visible_input(1.0, 0.0, {0.0, 1.0}), g, w, cfg);
  EXPECT_NE(s.mode, NavMode::kTrackVisible);
  const auto out = navigation_tick(s, visible_input(1.2, 0.0, {1.0, 0.0}), g, w, cfg);
  EXPECT_EQ(s.mode, NavMode::kTrackVisible);
  EXPECT_EQ(out.events.front().kind, EventKind::kRecovered);
  EXPECT_EQ(s.failed_search_count, 0);
}

TEST(Tick, TargetReachedIsDoneFromAnyMode) {
  NavConfig cfg;
  for (NavMode m : {NavMode::kTrackVisible, NavMode::kOccludedFused,
                    NavMode::kActiveSearch, NavMode::kFallback}) {
    OccupancyGrid g = free_grid();
    KeyframeWindow w(cfg.window_size);
    NavState s;
    s.mode = m;
    TickInput in = hidden_input(0.0);
    in.target_reached = true;
    navigation_tick(s, in, g, w, cfg);
    EXPECT_EQ(s.mode, NavMode::kDone);
    const auto out = navigation_tick(s, visible_input(0.2, 0.0), g, w, cfg);
    EXPECT_EQ(s.mode, NavMode::kDone);
    EXPECT_TRUE(out.events.empty());
  }
}

TEST(Tick, FixedHeadingNeverSearches) {
  NavConfig cfg;
  cfg.policy = Policy::kFixedHeading;
  OccupancyGrid g = free_grid();
  KeyframeWindow w(cfg.window_size);
  NavState s;
  s.robot = {5.0, 10.0, 0.0};
  navigation_tick(s, visible_input(0.0, 0.5), g, w, cfg);
  for (int i = 1; i < 400; ++i) {
    const auto out = navigation_tick(s, hidden_input(0.2 * i), g, w, cfg);
    EXPECT_TRUE(s.mode == NavMode::kOccludedFused) << to_string(s.mode);
    EXPECT_NEAR(s.steering.bearing(), 0.5, 1e-12);
    integrate(s, out.command, cfg);
  }
}

TEST(Tick, SearchDisabledNeverScansOrFallsBack) {
  NavConfig cfg;
  cfg.active_search = false;
  OccupancyGrid g = free_grid();
  KeyframeWindow w(cfg.window_size);
  w.record(kf(0.0, 0.0));
  NavState s;
  s.mode = NavMode::kOccludedFused;
  s.robot = {5.0, 10.0, 0.0};
  for (int i = 1; i < 400; ++i) {
    const auto out = navigation_tick(s, hidden_input(0.2 * i), g, w, cfg);
    EXPECT_EQ(s.mode, NavMode::kOccludedFused);
    integrate(s, out.command, cfg);
  }
}

TEST(Tick, RandomSequencesRespectContracts) {
  NavConfig cfg;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Direct edges of the mode machine; one tick may chain several.
  const std::set<std::pair<NavMode, NavMode>> legal{
      {NavMode::kTrackVisible, NavMode::kOccludedFused},
      {NavMode::kTrackVisible, NavMode::kDone},
      {NavMode::kOccludedFused, NavMode::kTrackVisible},
      {NavMode::kOccludedFused, NavMode::kActiveSearch},
      {NavMode::kOccludedFused, NavMode::kDone},
      {NavMode::kActiveSearch, NavMode::kTrackVisible},
      {NavMode::kActiveSearch, NavMode::kOccludedFused},
      {NavMode::kActiveSearch, NavMode::kFallback},
      {NavMode::kActiveSearch, NavMode::kDone},
      {NavMode::kFallback, NavMode::kTrackVisible},
      {NavMode::kFallback, NavMode::kFailed},
      {NavMode::kFallback, NavMode::kDone},
  };
  for (int ep = 0; ep < 100; ++ep) {
    OccupancyGrid g(40, 40, 0.5);
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 40; ++x) {
        const double r = u(rng);
        g.set({x, y}, r < 0.6 ? CellState::kFree
                              : (r < 0.65 ? CellState::kOccupied : CellState::kUnknown));
      }
    }
    KeyframeWindow w(cfg.window_size);
    NavState s;
    s.robot = {10.0, 10.0, 0.0};
    g.set(g.world_to_cell({10.0, 10.0}), CellState::kFree);
    for (int i = 0; i < 100; ++i) {
      const double t = 0.2 * i;
      TickInput in = u(rng) < 0.5 ? visible_input(t, u(rng) * 6 - 3,
                                                  u(rng) < 0.8 ? std::vector<double>{1, 0}
                                                               : std::vector<double>{0, 1})
                                  : hidden_input(t);
      in.target_reached = u(rng) < 0.002;
      const NavMode before = s.mode;
      const auto out = navigation_tick(s, in, g, w, cfg);
      NavMode cur = before;
      for (const auto& e : out.events) {
        if (e.kind != EventKind::kModeChange) continue;
        EXPECT_EQ(e.from, cur);
        EXPECT_TRUE(legal.count({e.from, e.to}))
            << to_string(e.from) << " -> " << to_string(e.to);
        cur = e.to;
      }
      EXPECT_EQ(cur, s.mode);
      if (out.keyframe_recorded) {
        EXPECT_TRUE(in.verdict.visible);
      }
      EXPECT_GE(out.command.linear, 0.0);
      EXPECT_LE(out.command.linear, cfg.v_max);
      EXPECT_LE(std::abs(out.command.angular), cfg.omega_max);
      integrate(s, out.command, cfg);
      s.robot.x = std::clamp(s.robot.x, 0.5, 19.5);
      s.robot.y = std::clamp(s.robot.y, 0.5, 19.5);
    }
  }
}

TEST(Config, Validation) {
  NavConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.decay = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.track_max_deviation = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_policy("fixed-heading"), Policy::kFixedHeading);
  EXPECT_THROW(parse_policy("greedy"), Error);
}

}  // namespace
}  // namespace eznav
