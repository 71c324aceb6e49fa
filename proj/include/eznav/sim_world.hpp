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

// 2.5-D outdoor world: axis-aligned occluder boxes with heights, a target
// with spatial extent, sight-line visibility, range sensing and a synthetic
// tile scorer that stands in for a vision-language model.

#ifndef EZNAV_SIM_WORLD_HPP_
#define EZNAV_SIM_WORLD_HPP_

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "eznav/geometry.hpp"
#include "eznav/occupancy.hpp"
#include "eznav/saliency_pyramid.hpp"

namespace eznav {

struct Box {
  double x = 0.0;  // min corner
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;
  double height_m = 1.0;

  bool contains(const Vec2& p, double margin = 0.0) const {
    return p.x() >= x - margin && p.x() <= x + w + margin &&
           p.y() >= y - margin && p.y() <= y + h + margin;
  }
};

struct TargetSpec {
  Vec2 position = Vec2::Zero();
  double width_m = 6.0;
  double height_m = 8.0;
};

struct WorldSpec {
  double width = 60.0;
  double height = 50.0;
  std::vector<Box> occluders;
  TargetSpec target;
  RobotPose start;

  // Throws Error(kInvalidConfig) when the start or target is out of bounds,
  // the start is inside an occluder, or the start is closer to the target
  // than min_start_distance.
  void validate(double min_start_distance) const;
};

// Parametric entry of the segment a->b into the box, in [0, 1], or nullopt.
std::optional<double> segment_box_entry(const Vec2& a, const Vec2& b,
                                        const Box& box);

// Share of `samples` sight lines from the camera to points spread across the
// target width that clear every occluder. A box blocks a level sight line
// when it is at least as tall as the camera.
double visibility_fraction(const WorldSpec& world, const Vec2& camera,
                           double camera_height, int samples = 16);

struct RangeSensorParams {
  int beams = 180;
  double fov = 2.0 * std::numbers::pi;
  double max_range = 20.0;
};

// Beams against occluder boxes and the world boundary, which acts as a wall.
std::vector<RangeBeam> range_scan(const WorldSpec& world, const RobotPose& robot,
                                  const RangeSensorParams& params);

struct ScorerParams {
  double noise_mean = 0.2;
  double noise_std = 0.03;
  double signal_gain = 0.6;
  double distance_ref = 65.0;
  // Covered fraction of a tile at which its response saturates.
  double coverage_saturation = 0.25;
  int descriptor_dim = 16;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct RenderInfo {
  double visibility = 0.0;
  double distance = 0.0;
  double signal = 0.0;
  bool in_view = false;
  PixelRect footprint;  // clipped to the image; empty when not in view
};

// Unit descriptor of the target, fixed for a given dimension.
std::vector<double> target_descriptor(int dim);

// One ScoreGrid per layout level. Descriptors are attached to the finest
// level only.
std::vector<ScoreGrid> render_score_grid(const WorldSpec& world,
                                         const CameraModel& cam,
                                         const Pose& pose,
                                         const PyramidLayout& layout,
                                         const ScorerParams& params,
                                         bool script_active, std::mt19937_64& rng,
                                         RenderInfo* info = nullptr);

}  // namespace eznav

#endif  // EZNAV_SIM_WORLD_HPP_
