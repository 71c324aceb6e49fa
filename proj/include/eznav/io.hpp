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

// File formats: ScoreGrid files, JSON configs, trajectory logs, summaries
// and run manifests.
//
// Every writer emits canonical JSON: sorted keys, shortest round-trip
// numbers, a trailing newline. Equal values therefore give equal bytes.

#ifndef EZNAV_IO_HPP_
#define EZNAV_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eznav/episode.hpp"
#include "eznav/evaluation.hpp"
#include "eznav/saliency_pyramid.hpp"

namespace eznav {

inline constexpr int kConfigVersion = 1;
inline constexpr int kScoreGridVersion = 1;

// On-disk ScoreGrid file: one entry per pyramid level, finest first.
struct ScoreGridFile {
  int image_width = 0;
  int image_height = 0;
  std::string prompt;
  std::vector<ScoreGrid> levels;

  // Layout implied by the level shapes and the image size.
  PyramidLayout layout() const;
};

// Throws Error(kMalformedFile) on syntax or schema errors. Layout problems
// (non-dyadic levels, indivisible image) are reported by validate_layout.
ScoreGridFile parse_score_grid(std::string_view text);
std::string dump_score_grid(const ScoreGridFile& file);
ScoreGridFile read_score_grid(const std::filesystem::path& path);
void write_score_grid(const std::filesystem::path& path, const ScoreGridFile& file);

// Full run configuration. Sections absent from the file keep their defaults;
// unknown keys are rejected.
struct RunConfig {
  EpisodeConfig episode;
  PerceptionBenchConfig perception_bench;
  WorldGenParams world_gen;
  int episodes_per_suite = 20;
};

// Throws Error(kInvalidConfig) on syntax, unknown keys, wrong types or a
// config_version this build does not read.
RunConfig parse_run_config(std::string_view text);
std::string dump_run_config(const RunConfig& cfg);
RunConfig read_run_config(const std::filesystem::path& path);

// Reads the file into a string; throws Error(kMalformedFile) when it cannot.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// One JSON object per line.
std::string trajectory_jsonl(const EpisodeResult& result);
std::string events_jsonl(const EpisodeResult& result);
std::string episode_summary_json(const EpisodeResult& result);

// One benchmark configuration (flags and policy) and its result rows.
struct PerceptionVariant {
  std::string name;
  AblationFlags flags;
  std::vector<PerceptionRow> rows;
};

struct OcclusionVariant {
  std::string name;
  AblationFlags flags;
  Policy policy = Policy::kFull;
  std::vector<OcclusionSuiteResult> rows;
};

std::string perception_report_json(std::span<const PerceptionVariant> variants);
std::string occlusion_report_json(std::span<const OcclusionVariant> variants);
// Plot data: one CSV row per (variant, distance) or (variant, suite).
std::string perception_csv(std::span<const PerceptionVariant> variants);
std::string occlusion_csv(std::span<const OcclusionVariant> variants);

struct RunManifest {
  std::string command;
  std::string config_path;  // empty when defaults were used
  std::uint64_t seed = 0;
  std::vector<std::string> args;  // remaining flags, in command-line order
  std::string output_dir;
  std::string tool_version = EZNAV_VERSION;
  RunConfig config;  // resolved, so the run can be repeated from this alone
};

std::string dump_manifest(const RunManifest& m);

}  // namespace eznav

#endif  // EZNAV_IO_HPP_
