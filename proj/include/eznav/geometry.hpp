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

// Pinhole camera math.
//
// Camera frame: x right, y down, z forward. World frame: z up. Directions
// are free vectors, so camera-to-world only rotates them; the translation
// part of the extrinsics never touches a heading.

#ifndef EZNAV_GEOMETRY_HPP_
#define EZNAV_GEOMETRY_HPP_

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "eznav/saliency_pyramid.hpp"

namespace eznav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

struct CameraModel {
  double fx = 480.0;
  double fy = 480.0;
  double cx = 480.0;
  double cy = 240.0;
  int width = 960;
  int height = 480;

  double hfov() const;
  void validate() const;  // throws Error(kInvalidConfig)

  static CameraModel from_hfov(int width, int height, double hfov_rad);
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();  // c->w

  // Level camera (no pitch/roll) looking along world yaw `yaw`.
  static Pose level_camera(double x, double y, double z, double yaw);
};

// Rotation taking camera axes to a level camera with the given world yaw.
Eigen::Quaterniond level_camera_rotation(double yaw);

enum class DirectionSource { kLive, kKeyframeFused };

struct DirectionEstimate {
  Vec3 direction = Vec3::UnitX();
  DirectionSource source = DirectionSource::kLive;
  double confidence = 1.0;

  // World yaw of the horizontal projection.
  double bearing() const { return std::atan2(direction.y(), direction.x()); }
};

// Throws Error(kOutOfBounds) for pixels outside [0,width] x [0,height].
Vec3 pixel_to_ray(const CameraModel& cam, PixelCoord pixel);

DirectionEstimate ray_to_world(const Pose& pose, const Vec3& ray_cam);

struct Projection {
  enum class Status { kInView, kBehind, kOutOfView };
  Status status = Status::kBehind;
  PixelCoord pixel;
};

Projection project_point(const CameraModel& cam, const Pose& pose,
                         const Vec3& world_point);

// Wraps to (-pi, pi].
double wrap_angle(double a);

}  // namespace eznav

#endif  // EZNAV_GEOMETRY_HPP_
