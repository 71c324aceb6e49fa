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

#include "eznav/episode.hpp"
#include "eznav/error.hpp"

namespace eznav {
namespace {

EpisodeConfig open_config() {
  EpisodeConfig cfg;
  cfg.world.width = 60;
  cfg.world.height = 50;
  cfg.world.start = {5.0, 25.0, 0.0};
  cfg.world.target = {Vec2(35.0, 25.0), 6.0, 8.0};
  cfg.seed = 3;
  return cfg;
}

TEST(Episode, OpenWorldSucceedsWithoutIntervals) {
  const auto r = run_episode(open_config());
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.final_mode, NavMode::kDone);
  EXPECT_TRUE(r.intervals.empty());
  EXPECT_LE(r.final_distance, 5.0 + 1.5 * 0.2);
  EXPECT_LT(r.steps, 2000);
  EXPECT_GT(r.keyframes, 0);
  EXPECT_EQ(r.collisions, 0);
}

TEST(Episode, PermanentOcclusionBehindWallFails) {
  EpisodeConfig cfg = open_config();
  // A low wall is transparent to the camera but blocks driving.
  cfg.world.occluders.push_back({20.0, 0.0, 1.0, 50.0, 0.5});
  cfg.occlusion_script.events.push_back({1.0, 1e6, OcclusionKind::kLong});
  const auto r = run_episode(cfg);
  EXPECT_FALSE(r.success);
  ASSERT_EQ(r.intervals.size(), 1u);
  EXPECT_FALSE(r.intervals[0].t_recovered.has_value());
  EXPECT_FALSE(r.intervals[0].censored);
  EXPECT_NEAR(r.intervals[0].t_lost, 1.0, 1e-9);
}

TEST(Episode, ScriptedOcclusionIsRecovered) {
  EpisodeConfig cfg = open_config();
  cfg.world.target.position = Vec2(50.0, 25.0);
  cfg.occlusion_script.events.push_back({3.0, 3.0, OcclusionKind::kShort});
  const auto r = run_episode(cfg);
  EXPECT_TRUE(r.success);
  ASSERT_GE(r.intervals.size(), 1u);
  EXPECT_TRUE(r.intervals[0].t_recovered.has_value());
  EXPECT_GE(*r.intervals[0].t_recovered, 6.0 - 1e-9);
  EXPECT_GT(r.intervals[0].path_during, 0.0);
}

TEST(Episode, BitIdenticalUnderFixedSeed) {
  EpisodeConfig cfg = open_config();
  cfg.world.occluders.push_back({15.0, 20.0, 2.0, 3.0, 3.0});
  cfg.occlusion_script.events.push_back({2.0, 3.0, OcclusionKind::kShort});
  const auto a = run_episode(cfg);
  const auto b = run_episode(cfg);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  EXPECT_EQ(a.path_length, b.path_length);
  EXPECT_EQ(a.steps, b.steps);
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    EXPECT_EQ(a.trajectory[i].pose.x, b.trajectory[i].pose.x);
    EXPECT_EQ(a.trajectory[i].pose.y, b.trajectory[i].pose.y);
    EXPECT_EQ(a.trajectory[i].pose.theta, b.trajectory[i].pose.theta);
    EXPECT_EQ(a.trajectory[i].mode, b.trajectory[i].mode);
    EXPECT_EQ(a.trajectory[i].events.size(), b.trajectory[i].events.size());
  }
}

TEST(Episode, InvariantsHold) {
  EpisodeConfig cfg = open_config();
  cfg.world.occluders.push_back({15.0, 18.0, 3.0, 14.0, 3.0});
  cfg.world.occluders.push_back({28.0, 30.0, 3.0, 3.0, 3.0});
  cfg.occlusion_script.events.push_back({2.0, 8.0, OcclusionKind::kLong});
  const auto r = run_episode(cfg);
  double path = 0.0;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    const auto& p = r.trajectory[i].pose;
    for (const auto& b : cfg.world.occluders) EXPECT_FALSE(b.contains({p.x, p.y}));
    if (i > 0) {
      const auto& q = r.trajectory[i - 1].pose;
      path += std::hypot(p.x - q.x, p.y - q.y);
    }
    for (const auto& e : r.trajectory[i].events) {
      if (e.kind == EventKind::kKeyframe) {
        EXPECT_TRUE(r.trajectory[i].visible);
      }
    }
  }
  // The last record is the pose before the final move.
  EXPECT_LE(path, r.path_length + 1e-9);
  EXPECT_GE(path, r.path_length - 1.5 * cfg.navigator.dt - 1e-9);
  for (std::size_t i = 1; i < r.intervals.size(); ++i) {
    ASSERT_TRUE(r.intervals[i - 1].t_recovered.has_value());
    EXPECT_LE(*r.intervals[i - 1].t_recovered, r.intervals[i].t_lost);
  }
}

TEST(Episode, InvalidConfigRejected) {
  EpisodeConfig cfg = open_config();
  cfg.step_budget = 0;
  EXPECT_THROW(run_episode(cfg), Error);
  cfg = open_config();
  cfg.occlusion_script.events = {{5.0, 3.0, OcclusionKind::kShort},
                                 {6.0, 3.0, OcclusionKind::kShort}};
  EXPECT_THROW(run_episode(cfg), Error);
  cfg = open_config();
  cfg.camera.width = 640;
  EXPECT_THROW(run_episode(cfg), Error);
}

TEST(Script, ActiveAndLabel) {
  OcclusionScript s;
  EXPECT_EQ(s.label(), Suite::kMixed);
  s.events = {{1.0, 3.0, OcclusionKind::kShort}};
  EXPECT_TRUE(s.active(1.0));
  EXPECT_TRUE(s.active(3.99));
  EXPECT_FALSE(s.active(4.0));
  EXPECT_EQ(s.label(), Suite::kShort);
  s.events.push_back({10.0, 8.0, OcclusionKind::kLong});
  EXPECT_EQ(s.label(), Suite::kMixed);
  EXPECT_EQ(parse_suite("long"), Suite::kLong);
  EXPECT_THROW(parse_suite("medium"), Error);
}

}  // namespace
}  // namespace eznav
