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

// Keyframe memory for heading maintenance while the target is not visible.

#ifndef EZNAV_HEADING_MEMORY_HPP_
#define EZNAV_HEADING_MEMORY_HPP_

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "eznav/geometry.hpp"
#include "eznav/visibility.hpp"

namespace eznav {

struct Keyframe {
  double timestamp = 0.0;  // seconds
  long step = 0;
  std::vector<double> salient_descriptor;  // empty when the scorer has none
  double score = 0.0;                      // s_t of the salient tile
  double local_mean = 0.0;                 // mu_t around the salient tile
  double local_std = 0.0;                  // sigma_t around the salient tile
  double sparsity_ratio = 0.0;             // deciding-level ratio
  double level_std = 0.0;                  // deciding-level std, for analysis
  Vec3 direction = Vec3::UnitX();          // world frame, unit
  Pose robot_pose;
};

// Sliding window of the N most recent keyframes, oldest first.
class KeyframeWindow {
 public:
  explicit KeyframeWindow(std::size_t capacity = 10);

  // Appends and evicts the oldest entry when full. Throws
  // Error(kNonMonotonicTime) unless kf is strictly newer than the last entry.
  void record(Keyframe kf);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<Keyframe>& entries() const { return entries_; }
  const Keyframe& latest() const;
  void clear() { entries_.clear(); }

 private:
  std::size_t capacity_;
  std::deque<Keyframe> entries_;
};

// Normalized weights w_j ~ r_j * sigma_j * decay^(now - t_j), aligned with
// window.entries(). Throws Error(kEmptyWindow).
std::vector<double> fusion_weights(const KeyframeWindow& window, double now,
                                   double decay);

// Weighted average of keyframe directions, renormalized. Falls back to the
// most recent direction when the weighted sum nearly cancels.
DirectionEstimate fuse_directions(const KeyframeWindow& window, double now,
                                  double decay);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Re-identification: the candidate must pass the prominent-peak rule and
// match some stored salient descriptor with cosine >= tau_reid.
bool reid_match(std::span<const double> candidate_descriptor,
                const LevelStats& candidate, const KeyframeWindow& window,
                const VisibilityParams& vis_params, double tau_reid);

}  // namespace eznav

#endif  // EZNAV_HEADING_MEMORY_HPP_
