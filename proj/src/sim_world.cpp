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

#include "eznav/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eznav/error.hpp"

namespace eznav {

void WorldSpec::validate(double min_start_distance) const {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "world size must be positive");
  }
  const auto inside = [&](const Vec2& p) {
    return p.x() > 0.0 && p.x() < width && p.y() > 0.0 && p.y() < height;
  };
  const Vec2 start_xy(start.x, start.y);
  if (!inside(start_xy)) {
    throw Error(ErrorCode::kInvalidConfig, "start pose outside the world");
  }
  if (!inside(target.position)) {
    throw Error(ErrorCode::kInvalidConfig, "target outside the world");
  }
  if (!(target.width_m > 0.0) || !(target.height_m > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "target extent must be positive");
  }
  for (const auto& b : occluders) {
    if (!(b.w > 0.0) || !(b.h > 0.0) || b.height_m < 0.0) {
      throw Error(ErrorCode::kInvalidConfig, "degenerate occluder box");
    }
    if (b.contains(start_xy)) {
      throw Error(ErrorCode::kInvalidConfig, "start pose inside an occluder");
    }
  }
  if ((target.position - start_xy).norm() < min_start_distance) {
    throw Error(ErrorCode::kInvalidConfig,
                "start is closer to the target than min_start_distance");
  }
}

std::optional<double> segment_box_entry(const Vec2& a, const Vec2& b,
                                        const Box& box) {
  const Vec2 d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  const double lo[2] = {box.x, box.y};
  const double hi[2] = {box.x + box.w, box.y + box.h};
  for (int i = 0; i < 2; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (a[i] < lo[i] || a[i] > hi[i]) return std::nullopt;
      continue;
    }
    double ta = (lo[i] - a[i]) / d[i];
    double tb = (hi[i] - a[i]) / d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

double visibility_fraction(const WorldSpec& world, const Vec2& camera,
                           double camera_height, int samples) {
  if (samples <= 0) return 0.0;
  const Vec2 to_target = world.target.position - camera;
  const double dist = to_target.norm();
  const Vec2 across = dist > 0.0 ? Vec2(-to_target.y(), to_target.x()) / dist
                                 : Vec2(0.0, 1.0);
  int clear = 0;
  for (int i = 0; i < samples; ++i) {
    const double offset = ((i + 0.5) / samples - 0.5) * world.target.width_m;
    const Vec2 p = world.target.position + offset * across;
    bool blocked = false;
    for (const auto& box : world.occluders) {
      if (box.height_m < camera_height) continue;
      if (segment_box_entry(camera, p, box)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) ++clear;
  }
  return static_cast<double>(clear) / samples;
}

std::vector<RangeBeam> range_scan(const WorldSpec& world, const RobotPose& robot,
                                  const RangeSensorParams& params) {
  std::vector<RangeBeam> scan;
  scan.reserve(static_cast<std::size_t>(std::max(0, params.beams)));
  const Vec2 origin(robot.x, robot.y);
  for (int i = 0; i < params.beams; ++i) {
    RangeBeam beam;
    beam.bearing = -0.5 * params.fov + (i + 0.5) * params.fov / params.beams;
    const double yaw = robot.theta + beam.bearing;
    const Vec2 dir(std::cos(yaw), std::sin(yaw));

    // Distance to the world boundary along the beam.
    double bound = std::numeric_limits<double>::infinity();
    if (dir.x() > 0) bound = std::min(bound, (world.width - origin.x()) / dir.x());
    if (dir.x() < 0) bound = std::min(bound, -origin.x() / dir.x());
    if (dir.y() > 0) bound = std::min(bound, (world.height - origin.y()) / dir.y());
    if (dir.y() < 0) bound = std::min(bound, -origin.y() / dir.y());
    // The world boundary is a wall.
    beam.distance = std::min(params.max_range, std::max(0.0, bound));
    beam.hit = bound <= params.max_range;

    const Vec2 end = origin + params.max_range * dir;
    for (const auto& box : world.occluders) {
      const auto t = segment_box_entry(origin, end, box);
      if (!t) continue;
      const double d = *t * params.max_range;
      if (d <= beam.distance) {
        beam.distance = d;
        beam.hit = true;
      }
    }
    scan.push_back(beam);
  }
  return scan;
}

void ScorerParams::validate() const {
  if (!(noise_std >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "noise_std must be nonnegative");
  }
  if (!(signal_gain >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "signal_gain must be nonnegative");
  }
  if (!(distance_ref > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "distance_ref must be positive");
  }
  if (!(coverage_saturation > 0.0 && coverage_saturation <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "coverage_saturation must be in (0, 1]");
  }
  if (descriptor_dim < 0) {
    throw Error(ErrorCode::kInvalidConfig, "descriptor_dim must be >= 0");
  }
}

std::vector<double> target_descriptor(int dim) {
  std::vector<double> d(static_cast<std::size_t>(std::max(0, dim)));
  if (d.empty()) return d;
  std::mt19937_64 rng(0x7a26e7ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  for (double& x : d) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : d) x /= norm;
  return d;
}

namespace {

std::vector<double> random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(dim));
  double norm = 0.0;
  for (double& x : v) {
    x = normal(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= norm;
  return v;
}

double overlap_area(const PixelRect& a, const PixelRect& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

// Image-space bounding box of the target billboard, clipped to the image.
std::optional<PixelRect> target_footprint(const WorldSpec& world,
                                          const CameraModel& cam,
                                          const Pose& pose) {
  const Vec2 cam_xy = pose.position.head<2>();
  const Vec2 to_target = world.target.position - cam_xy;
  const double dist = to_target.norm();
  if (dist <= 0.0) return std::nullopt;
  const Vec2 across = Vec2(-to_target.y(), to_target.x()) / dist;
  const Eigen::Quaterniond w_to_c = pose.orientation.normalized().conjugate();

  double u0 = std::numeric_limits<double>::infinity();
  double v0 = u0;
  double u1 = -u0;
  double v1 = -u0;
  int in_front = 0;
  for (int side = -1; side <= 1; side += 2) {
    const Vec2 xy =
        world.target.position + 0.5 * side * world.target.width_m * across;
    for (double z : {0.0, world.target.height_m}) {
      const Vec3 pc = w_to_c * (Vec3(xy.x(), xy.y(), z) - pose.position);
      if (pc.z() <= 1e-3) continue;
      ++in_front;
      const double u = cam.fx * pc.x() / pc.z() + cam.cx;
      const double v = cam.fy * pc.y() / pc.z() + cam.cy;
      u0 = std::min(u0, u);
      u1 = std::max(u1, u);
      v0 = std::min(v0, v);
      v1 = std::max(v1, v);
    }
  }
  if (in_front < 4) return std::nullopt;
  PixelRect r{std::max(0.0, u0), std::max(0.0, v0),
              std::min(double(cam.width), u1), std::min(double(cam.height), v1)};
  if (r.x1 <= r.x0 || r.y1 <= r.y0) return std::nullopt;
  return r;
}

}  // namespace

std::vector<ScoreGrid> render_score_grid(const WorldSpec& world,
                                         const CameraModel& cam,
                                         const Pose& pose,
                                         const PyramidLayout& layout,
                                         const ScorerParams& params,
                                         bool script_active, std::mt19937_64& rng,
                                         RenderInfo* info) {
  RenderInfo local;
  RenderInfo& ri = info ? *info : local;
  ri = RenderInfo{};

  std::optional<PixelRect> footprint;
  if (!script_active) {
    const Vec2 cam_xy = pose.position.head<2>();
    ri.distance = (world.target.position - cam_xy).norm();
    footprint = target_footprint(world, cam, pose);
    if (footprint) {
      ri.visibility = visibility_fraction(world, cam_xy, pose.position.z());
      ri.in_view = ri.visibility > 0.0;
      ri.footprint = *footprint;
      ri.signal = params.signal_gain * ri.visibility *
                  std::min(1.0, params.distance_ref / std::max(ri.distance, 1e-9));
    }
  }

  std::normal_distribution<double> noise(params.noise_mean, params.noise_std);
  std::vector<ScoreGrid> out(layout.levels.size());
  std::vector<double> finest_response;
  for (std::size_t l = 0; l < layout.levels.size(); ++l) {
    const GridShape& shape = layout.levels[l];
    ScoreMatrix m(shape);
    for (int r = 0; r < shape.rows; ++r) {
      for (int c = 0; c < shape.cols; ++c) {
        double s = std::clamp(noise(rng), 0.0, 1.0);
        double response = 0.0;
        if (ri.in_view && ri.signal > 0.0) {
          const PixelRect tile = tile_rect(layout, static_cast<int>(l), {r, c});
          response = std::min(
              1.0, overlap_area(tile, *footprint) /
                       (params.coverage_saturation * tile.area()));
          s = std::clamp(s + ri.signal * response, 0.0, 1.0);
        }
        m.at(r, c) = s;
        if (l == 0) finest_response.push_back(response);
      }
    }
    out[l].scores = std::move(m);
  }

  if (params.descriptor_dim > 0) {
    const auto target = target_descriptor(params.descriptor_dim);
    auto& descs = out.front().descriptors;
    descs.reserve(finest_response.size());
    for (double response : finest_response) {
      auto d = random_unit(params.descriptor_dim, rng);
      const double w = ri.visibility * response;
      if (w > 0.0) {
        double norm = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
          d[i] = w * target[i] + (1.0 - w) * d[i];
          norm += d[i] * d[i];
        }
        norm = std::sqrt(norm);
        for (double& x : d) x /= norm;
      }
      descs.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace eznav
