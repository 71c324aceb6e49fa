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

#include "eznav/geometry.hpp"

#include <cmath>
#include <numbers>

#include "eznav/error.hpp"

namespace eznav {

double CameraModel::hfov() const {
  return 2.0 * std::atan(static_cast<double>(width) / (2.0 * fx));
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "image size must be positive");
  }
  if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height) {
    throw Error(ErrorCode::kInvalidConfig, "principal point outside image");
  }
}

CameraModel CameraModel::from_hfov(int width, int height, double hfov_rad) {
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fx = width / (2.0 * std::tan(0.5 * hfov_rad));
  cam.fy = cam.fx;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  return cam;
}

Eigen::Quaterniond level_camera_rotation(double yaw) {
  // Columns are the camera x/y/z axes expressed in the world frame.
  Eigen::Matrix3d r;
  r.col(0) = Vec3(std::sin(yaw), -std::cos(yaw), 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(std::cos(yaw), std::sin(yaw), 0.0);
  return Eigen::Quaterniond(r).normalized();
}

Pose Pose::level_camera(double x, double y, double z, double yaw) {
  return Pose{Vec3(x, y, z), level_camera_rotation(yaw)};
}

Vec3 pixel_to_ray(const CameraModel& cam, PixelCoord pixel) {
  if (!(pixel.u >= 0.0 && pixel.u <= cam.width && pixel.v >= 0.0 &&
        pixel.v <= cam.height)) {
    throw Error(ErrorCode::kOutOfBounds, "pixel outside image");
  }
  return Vec3((pixel.u - cam.cx) / cam.fx, (pixel.v - cam.cy) / cam.fy, 1.0)
      .normalized();
}

DirectionEstimate ray_to_world(const Pose& pose, const Vec3& ray_cam) {
  DirectionEstimate d;
  d.direction = (pose.orientation.normalized() * ray_cam).normalized();
  d.source = DirectionSource::kLive;
  d.confidence = 1.0;
  return d;
}

Projection project_point(const CameraModel& cam, const Pose& pose,
                         const Vec3& world_point) {
  const Vec3 p = pose.orientation.normalized().conjugate() *
                 (world_point - pose.position);
  Projection out;
  if (p.z() <= 0.0) {
    out.status = Projection::Status::kBehind;
    return out;
  }
  out.pixel = {cam.fx * p.x() / p.z() + cam.cx, cam.fy * p.y() / p.z() + cam.cy};
  const bool inside = out.pixel.u >= 0.0 && out.pixel.u < cam.width &&
                      out.pixel.v >= 0.0 && out.pixel.v < cam.height;
  out.status =
      inside ? Projection::Status::kInView : Projection::Status::kOutOfView;
  return out;
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

}  // namespace eznav
