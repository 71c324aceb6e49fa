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

// One perception step: score grids -> fused pyramid -> visibility verdict,
// anchor and world direction, with the ablation switches applied.

#ifndef EZNAV_PERCEPTION_HPP_
#define EZNAV_PERCEPTION_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eznav/geometry.hpp"
#include "eznav/saliency_pyramid.hpp"
#include "eznav/visibility.hpp"

namespace eznav {

struct AblationFlags {
  bool multi_scale = true;
  bool saliency_amplification = true;
  bool hierarchical_fusion = true;
  bool visibility_detection = true;
  bool direction_fusion = true;
  bool active_search = true;

  bool operator==(const AblationFlags&) const = default;

  static AblationFlags all_off();
  // Flag names as used on the command line and in config files.
  static const std::vector<std::string>& names();
  // Sets one named flag; throws Error(kInvalidConfig) on an unknown name.
  void set(std::string_view name, bool value);
  bool get(std::string_view name) const;
};

struct PerceptionParams {
  PyramidLayout layout = PyramidLayout::standard();
  FusionParams fusion;
  VisibilityParams visibility;
  bool refine_anchor = false;
};

struct PerceptionOutput {
  FusedPyramid pyramid;
  VisibilityVerdict verdict;
  // Finest-level tile carrying the salient evidence: the descent target of
  // the anchor, or the raw argmax when multi-scale is disabled.
  TileIndex salient_tile;
  PixelCoord anchor_pixel;
  DirectionEstimate direction;  // always computed; meaningful when visible
  std::vector<double> salient_descriptor;
  double salient_score = 0.0;
  double local_mean = 0.0;  // over the aligned 4x4 finest block
  double local_std = 0.0;
};

// Throws Error(kShapeMismatch) when the grids do not match the layout.
PerceptionOutput perceive(std::vector<ScoreGrid> levels,
                          const PerceptionParams& params,
                          const AblationFlags& flags, const CameraModel& cam,
                          const Pose& pose);

}  // namespace eznav

#endif  // EZNAV_PERCEPTION_HPP_
