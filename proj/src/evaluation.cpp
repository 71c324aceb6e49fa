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

#include "eznav/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "eznav/error.hpp"

namespace eznav {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double penalized_angular_error(std::span<const PerceptionTrial> trials) {
  if (trials.empty()) {
    throw Error(ErrorCode::kEmptyTrials, "no perception trials");
  }
  double sum = 0.0;
  for (const auto& t : trials) {
    sum += t.predicted_theta
               ? std::abs(wrap_angle(*t.predicted_theta - t.truth_theta))
               : std::numbers::pi;
  }
  return sum / static_cast<double>(trials.size());
}

RecoveryStats compute_rsr_rpl(std::span<const EpisodeResult> results) {
  RecoveryStats s;
  double path = 0.0;
  for (const auto& r : results) {
    for (const auto& iv : r.intervals) {
      if (iv.censored) continue;
      ++s.intervals;
      if (iv.t_recovered) {
        ++s.recovered;
        path += iv.path_during;
      }
    }
  }
  if (s.intervals > 0) {
    s.rsr_percent = 100.0 * static_cast<double>(s.recovered) /
                    static_cast<double>(s.intervals);
  }
  if (s.recovered > 0) s.rpl_meters = path / static_cast<double>(s.recovered);
  return s;
}

double compute_sr(std::span<const EpisodeResult> results) {
  if (results.empty()) return 0.0;
  const auto n = std::count_if(results.begin(), results.end(),
                               [](const EpisodeResult& r) { return r.success; });
  return 100.0 * static_cast<double>(n) / static_cast<double>(results.size());
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<PerceptionTrial> perception_trials(const PerceptionBenchConfig& cfg,
                                               double distance,
                                               const AblationFlags& flags,
                                               std::uint64_t seed) {
  std::vector<PerceptionTrial> trials;
  trials.reserve(static_cast<std::size_t>(cfg.trials_per_distance));
  for (int i = 0; i < cfg.trials_per_distance; ++i) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> bearing(-cfg.max_bearing,
                                                   cfg.max_bearing);
    const double phi = bearing(rng);

    WorldSpec world;
    world.width = distance + 40.0;
    world.height = 2.0 * distance + 40.0;
    const Vec2 cam(10.0, 0.5 * world.height);
    world.start = {cam.x(), cam.y(), 0.0};
    world.target = cfg.target;
    world.target.position = cam + distance * Vec2(std::cos(phi), std::sin(phi));

    const Pose pose = Pose::level_camera(cam.x(), cam.y(), cfg.mount_height, 0.0);
    auto grids = render_score_grid(world, cfg.camera, pose, cfg.perception.layout,
                                   cfg.scorer, false, rng);
    const auto out = perceive(std::move(grids), cfg.perception, flags,
                              cfg.camera, pose);
    PerceptionTrial t;
    t.distance_m = distance;
    t.truth_theta = phi;
    if (out.verdict.visible || !flags.visibility_detection) {
      t.predicted_theta = out.direction.bearing();
    }
    trials.push_back(t);
  }
  return trials;
}

std::vector<PerceptionRow> run_perception_bench(const PerceptionBenchConfig& cfg,
                                                const AblationFlags& flags,
                                                std::uint64_t seed,
                                                unsigned threads) {
  cfg.camera.validate();
  cfg.scorer.validate();
  validate_layout(cfg.perception.layout);
  if (cfg.trials_per_distance <= 0) {
    throw Error(ErrorCode::kEmptyTrials, "trials_per_distance must be positive");
  }
  std::vector<PerceptionRow> rows(cfg.distances.size());
  parallel_for(cfg.distances.size(), threads, [&](std::size_t k) {
    const double d = cfg.distances[k];
    // Stream depends on the distance slot only, so every ablation variant
    // sees the same scenes and noise draws.
    const auto trials = perception_trials(cfg, d, flags, mix_seed(seed, k));
    PerceptionRow row;
    row.distance_m = d;
    row.trials = trials.size();
    row.detected = static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(),
                      [](const PerceptionTrial& t) { return t.predicted_theta.has_value(); }));
    row.e_avg = penalized_angular_error(trials);
    rows[k] = row;
  });
  return rows;
}

namespace {

double box_distance(const Box& b, const Vec2& p) {
  const double dx = std::max({b.x - p.x(), 0.0, p.x() - (b.x + b.w)});
  const double dy = std::max({b.y - p.y(), 0.0, p.y() - (b.y + b.h)});
  return std::hypot(dx, dy);
}

}  // namespace

WorldSpec generate_world(const WorldGenParams& gen, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x5eedULL));
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  WorldSpec w;
  w.width = gen.width;
  w.height = gen.height;
  Vec2 start;
  Vec2 target;
  do {
    start = {uniform(gen.start_x_min, gen.start_x_max),
             uniform(gen.margin_y, gen.height - gen.margin_y)};
    target = {uniform(gen.target_x_min, gen.target_x_max),
              uniform(gen.margin_y, gen.height - gen.margin_y)};
  } while ((target - start).norm() < gen.min_start_distance);
  w.start = {start.x(), start.y(),
             std::atan2(target.y() - start.y(), target.x() - start.x())};
  w.target.position = target;
  w.target.width_m = uniform(6.0, 10.0);
  w.target.height_m = uniform(6.0, 10.0);

  const Vec2 axis = (target - start).normalized();
  const Vec2 side(-axis.y(), axis.x());
  const auto place = [&](double w_m, double h_m, double height_m, const Vec2& c) {
    Box b{c.x() - 0.5 * w_m, c.y() - 0.5 * h_m, w_m, h_m, height_m};
    if (b.x < 1.0 || b.y < 1.0 || b.x + b.w > gen.width - 1.0 ||
        b.y + b.h > gen.height - 1.0) {
      return false;
    }
    if (box_distance(b, start) < 3.0 || box_distance(b, target) < 6.0) return false;
    w.occluders.push_back(b);
    if (visibility_fraction(w, start, gen.camera_height) < 1.0) {
      w.occluders.pop_back();
      return false;
    }
    return true;
  };
  const auto along = [&](double f_lo, double f_hi, double lateral) {
    return start + uniform(f_lo, f_hi) * (target - start) +
           uniform(-lateral, lateral) * side;
  };

  for (int i = 0; i < gen.buildings; ++i) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      if (place(uniform(4.0, 8.0), uniform(4.0, 10.0), uniform(6.0, 12.0),
                along(0.3, 0.7, 6.0))) {
        break;
      }
    }
  }
  for (int i = 0; i < gen.billboards; ++i) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const double len = uniform(3.0, 6.0);
      const bool along_x = uniform(0.0, 1.0) < 0.5;
      if (place(along_x ? len : 0.6, along_x ? 0.6 : len, uniform(3.0, 5.0),
                along(0.2, 0.8, 10.0))) {
        break;
      }
    }
  }
  for (int i = 0; i < gen.shrubs; ++i) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const double s = uniform(1.0, 2.5);
      if (place(s, s, uniform(0.4, 1.5),
                {uniform(1.0, gen.width - 1.0), uniform(1.0, gen.height - 1.0)})) {
        break;
      }
    }
  }
  return w;
}

OcclusionScript generate_script(const WorldGenParams& gen, Suite suite,
                                std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x5c41ULL));
  const auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  OcclusionScript script;
  double t = uniform(gen.first_event_min, gen.first_event_max);
  for (int i = 0; i < gen.events_per_episode; ++i) {
    OcclusionKind kind = OcclusionKind::kShort;
    if (suite == Suite::kLong) kind = OcclusionKind::kLong;
    if (suite == Suite::kMixed) {
      kind = (i % 2 == 0) ? OcclusionKind::kShort : OcclusionKind::kLong;
    }
    const double dur =
        kind == OcclusionKind::kShort ? gen.short_duration : gen.long_duration;
    script.events.push_back({t, dur, kind});
    t += dur + uniform(gen.gap_min, gen.gap_max);
  }
  return script;
}

EpisodeConfig occlusion_episode_config(const OcclusionBenchConfig& cfg,
                                       Suite suite, int index,
                                       const AblationFlags& flags,
                                       Policy policy, std::uint64_t seed) {
  const std::uint64_t s =
      mix_seed(mix_seed(seed, static_cast<std::uint64_t>(suite)),
               static_cast<std::uint64_t>(index));
  EpisodeConfig ec = cfg.base;
  ec.seed = s;
  ec.world = generate_world(cfg.gen, s);
  ec.occlusion_script = generate_script(cfg.gen, suite, s);
  ec.min_start_distance = cfg.gen.min_start_distance;
  ec.flags = flags;
  ec.navigator.policy = policy;
  return ec;
}

std::vector<OcclusionSuiteResult> run_occlusion_bench(
    const OcclusionBenchConfig& cfg, std::span<const Suite> suites,
    const AblationFlags& flags, Policy policy, std::uint64_t seed,
    unsigned threads, std::vector<std::vector<EpisodeResult>>* episodes) {
  if (cfg.episodes_per_suite <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "episodes_per_suite must be positive");
  }
  const std::size_t per = static_cast<std::size_t>(cfg.episodes_per_suite);
  std::vector<EpisodeResult> all(suites.size() * per);
  parallel_for(all.size(), threads, [&](std::size_t i) {
    const Suite suite = suites[i / per];
    all[i] = run_episode(occlusion_episode_config(
        cfg, suite, static_cast<int>(i % per), flags, policy, seed));
  });

  std::vector<OcclusionSuiteResult> out;
  if (episodes) episodes->clear();
  for (std::size_t k = 0; k < suites.size(); ++k) {
    std::span<const EpisodeResult> slice(all.data() + k * per, per);
    OcclusionSuiteResult r;
    r.suite = suites[k];
    r.n_episodes = per;
    r.recovery = compute_rsr_rpl(slice);
    r.sr_percent = compute_sr(slice);
    out.push_back(r);
    if (episodes) episodes->emplace_back(slice.begin(), slice.end());
  }
  return out;
}

}  // namespace eznav
