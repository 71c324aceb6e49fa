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

// Metrics (penalized angular error, RSR, RPL, SR) and the seeded benchmark
// drivers built on the simulator.

#ifndef EZNAV_EVALUATION_HPP_
#define EZNAV_EVALUATION_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eznav/episode.hpp"

namespace eznav {

// Deterministic stream splitting (splitmix64 over seed and salt).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

struct PerceptionTrial {
  double distance_m = 0.0;
  std::optional<double> predicted_theta;  // nullopt when not detected
  double truth_theta = 0.0;
};

// Mean wrapped |error|, with pi for every missed detection. Throws
// Error(kEmptyTrials).
double penalized_angular_error(std::span<const PerceptionTrial> trials);

// Censored intervals (open when the target was reached) are excluded.
struct RecoveryStats {
  std::size_t intervals = 0;
  std::size_t recovered = 0;
  std::optional<double> rsr_percent;  // nullopt when there are no intervals
  std::optional<double> rpl_meters;   // nullopt when nothing was recovered
};

RecoveryStats compute_rsr_rpl(std::span<const EpisodeResult> results);
// 100 * successes / episodes; 0 for an empty list.
double compute_sr(std::span<const EpisodeResult> results);

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Callers write into slot i, so results do not depend on
// scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

struct PerceptionBenchConfig {
  std::vector<double> distances = {10.0, 25.0, 50.0, 100.0, 150.0};
  int trials_per_distance = 200;
  double max_bearing = 0.7;  // |truth bearing| relative to the camera, rad
  TargetSpec target{Vec2::Zero(), 10.0, 10.0};
  CameraModel camera;
  double mount_height = 1.0;
  PerceptionParams perception;
  ScorerParams scorer;
};

struct PerceptionRow {
  double distance_m = 0.0;
  double e_avg = 0.0;  // radians
  std::size_t detected = 0;
  std::size_t trials = 0;
};

// One static scene per trial: the target is placed at the given distance and
// a random bearing inside the field of view.
std::vector<PerceptionTrial> perception_trials(const PerceptionBenchConfig& cfg,
                                               double distance,
                                               const AblationFlags& flags,
                                               std::uint64_t seed);

std::vector<PerceptionRow> run_perception_bench(const PerceptionBenchConfig& cfg,
                                                const AblationFlags& flags,
                                                std::uint64_t seed,
                                                unsigned threads = 0);

struct WorldGenParams {
  double width = 60.0;
  double height = 50.0;
  double start_x_min = 3.0;
  double start_x_max = 6.0;
  double target_x_min = 40.0;
  double target_x_max = 46.0;
  double margin_y = 12.0;  // keep start and target this far from the y edges
  double min_start_distance = 36.0;
  double camera_height = 1.0;  // occluders may not hide the target at start
  int buildings = 2;
  int billboards = 2;
  int shrubs = 4;
  double short_duration = 3.0;
  double long_duration = 8.0;
  int events_per_episode = 3;
  double first_event_min = 3.0;
  double first_event_max = 6.0;
  double gap_min = 4.0;
  double gap_max = 8.0;
};

WorldSpec generate_world(const WorldGenParams& gen, std::uint64_t seed);
OcclusionScript generate_script(const WorldGenParams& gen, Suite suite,
                                std::uint64_t seed);

struct OcclusionBenchConfig {
  EpisodeConfig base;  // world and script are replaced per episode
  WorldGenParams gen;
  int episodes_per_suite = 20;
};

struct OcclusionSuiteResult {
  Suite suite = Suite::kShort;
  std::size_t n_episodes = 0;
  RecoveryStats recovery;
  double sr_percent = 0.0;
};

// The config of episode `index` of `suite`. The world and script depend only
// on (seed, suite, index), so policies and ablations see identical episodes.
EpisodeConfig occlusion_episode_config(const OcclusionBenchConfig& cfg,
                                       Suite suite, int index,
                                       const AblationFlags& flags,
                                       Policy policy, std::uint64_t seed);

std::vector<OcclusionSuiteResult> run_occlusion_bench(
    const OcclusionBenchConfig& cfg, std::span<const Suite> suites,
    const AblationFlags& flags, Policy policy, std::uint64_t seed,
    unsigned threads = 0,
    std::vector<std::vector<EpisodeResult>>* episodes = nullptr);

}  // namespace eznav

#endif  // EZNAV_EVALUATION_HPP_
