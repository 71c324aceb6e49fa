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

#include "eznav/perception.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eznav/error.hpp"

namespace eznav {

AblationFlags AblationFlags::all_off() {
  return {false, false, false, false, false, false};
}

const std::vector<std::string>& AblationFlags::names() {
  static const std::vector<std::string> kNames = {
      "multi_scale",         "saliency_amplification", "hierarchical_fusion",
      "visibility_detection", "direction_fusion",       "active_search"};
  return kNames;
}

namespace {

// Works for const and non-const flags alike.
template <typename Flags>
auto flag_ptr(Flags& f, std::string_view name) -> decltype(&f.multi_scale) {
  if (name == "multi_scale") return &f.multi_scale;
  if (name == "saliency_amplification") return &f.saliency_amplification;
  if (name == "hierarchical_fusion") return &f.hierarchical_fusion;
  if (name == "visibility_detection") return &f.visibility_detection;
  if (name == "direction_fusion") return &f.direction_fusion;
  if (name == "active_search") return &f.active_search;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown ablation flag '" + std::string(name) + "'");
}

// Pyramid whose fused levels are the raw levels, anchored on the raw
// coarsest argmax.
FusedPyramid unfused_pyramid(std::vector<ScoreGrid> raw,
                             const PyramidLayout& layout) {
  validate_layout(layout);
  if (static_cast<int>(raw.size()) != layout.num_levels()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected one score grid per pyramid level");
  }
  FusedPyramid fp;
  fp.layout = layout;
  for (std::size_t l = 0; l < raw.size(); ++l) {
    if (raw[l].shape() != layout.levels[l]) {
      throw Error(ErrorCode::kShapeMismatch,
                  "score grid shape differs from layout at level " +
                      std::to_string(l));
    }
    fp.fused.push_back(raw[l].scores);
  }
  fp.anchor = argmax(fp.fused.back());
  fp.raw = std::move(raw);
  return fp;
}

}  // namespace

void AblationFlags::set(std::string_view name, bool value) {
  *flag_ptr(*this, name) = value;
}

bool AblationFlags::get(std::string_view name) const {
  return *flag_ptr(*this, name);
}

PerceptionOutput perceive(std::vector<ScoreGrid> levels,
                          const PerceptionParams& params,
                          const AblationFlags& flags, const CameraModel& cam,
                          const Pose& pose) {
  for (const auto& g : levels) validate_score_grid(g);

  PerceptionOutput out;
  if (flags.hierarchical_fusion) {
    FusionParams fusion = params.fusion;
    if (!flags.saliency_amplification) fusion.base = 1.0;
    out.pyramid = fuse_pyramid(std::move(levels), params.layout, fusion);
  } else {
    out.pyramid = unfused_pyramid(std::move(levels), params.layout);
  }
  const FusedPyramid& fp = out.pyramid;
  const ScoreMatrix& finest = fp.raw.front().scores;

  if (flags.multi_scale) {
    out.verdict = detect_visibility(fp, params.visibility);
    out.salient_tile = descend_to_finest(fp);
    out.anchor_pixel = anchor_pixel(fp, params.refine_anchor);
  } else {
    // Single finest level: raw argmax, statistics on that level only.
    const std::span<const double> only[] = {finest.values()};
    out.verdict = detect_visibility(only, params.visibility);
    out.salient_tile = argmax(finest);
    const PixelRect r = tile_rect(fp.layout, 0, out.salient_tile);
    out.anchor_pixel = {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)};
  }

  const PixelCoord px{std::clamp(out.anchor_pixel.u, 0.0, double(cam.width)),
                      std::clamp(out.anchor_pixel.v, 0.0, double(cam.height))};
  out.direction = ray_to_world(pose, pixel_to_ray(cam, px));

  out.salient_score = finest.at(out.salient_tile);
  if (fp.raw.front().has_descriptors()) {
    out.salient_descriptor = fp.raw.front().descriptor(out.salient_tile);
  }

  // Local statistics over the finest block that maps to one coarse tile.
  const int block = 1 << (fp.layout.num_levels() - 1);
  const int r0 = (out.salient_tile.row / block) * block;
  const int c0 = (out.salient_tile.col / block) * block;
  double sum = 0.0;
  double sq = 0.0;
  int n = 0;
  for (int r = r0; r < std::min(r0 + block, finest.rows()); ++r) {
    for (int c = c0; c < std::min(c0 + block, finest.cols()); ++c) {
      sum += finest.at(r, c);
      sq += finest.at(r, c) * finest.at(r, c);
      ++n;
    }
  }
  out.local_mean = sum / n;
  out.local_std = std::sqrt(std::max(0.0, sq / n - out.local_mean * out.local_mean));
  return out;
}

}  // namespace eznav
