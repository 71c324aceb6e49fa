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

#include "eznav/heading_memory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "eznav/error.hpp"
#include "eznav/log.hpp"

namespace eznav {

KeyframeWindow::KeyframeWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw Error(ErrorCode::kInvalidConfig, "window capacity must be >= 1");
  }
}

void KeyframeWindow::record(Keyframe kf) {
  if (!entries_.empty() && !(kf.timestamp > entries_.back().timestamp)) {
    throw Error(ErrorCode::kNonMonotonicTime,
                "keyframe at t=" + std::to_string(kf.timestamp) +
                    " is not after t=" +
                    std::to_string(entries_.back().timestamp));
  }
  entries_.push_back(std::move(kf));
  while (entries_.size() > capacity_) entries_.pop_front();
}

const Keyframe& KeyframeWindow::latest() const {
  if (entries_.empty()) {
    throw Error(ErrorCode::kEmptyWindow, "no keyframes recorded");
  }
  return entries_.back();
}

std::vector<double> fusion_weights(const KeyframeWindow& window, double now,
                                   double decay) {
  if (window.empty()) {
    throw Error(ErrorCode::kEmptyWindow, "cannot fuse an empty window");
  }
  std::vector<double> w;
  w.reserve(window.size());
  double total = 0.0;
  for (const auto& kf : window.entries()) {
    const double age = std::max(0.0, now - kf.timestamp);
    const double saliency = std::max(0.0, kf.sparsity_ratio * kf.local_std);
    w.push_back(saliency * std::pow(decay, age));
    total += w.back();
  }
  if (!(total > 0.0)) {
    // Every saliency product is zero; fall back to decay alone.
    total = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double age =
          std::max(0.0, now - window.entries()[j].timestamp);
      w[j] = std::pow(decay, age);
      total += w[j];
    }
  }
  for (double& x : w) x /= total;
  return w;
}

DirectionEstimate fuse_directions(const KeyframeWindow& window, double now,
                                  double decay) {
  const auto w = fusion_weights(window, now, decay);
  Vec3 sum = Vec3::Zero();
  for (std::size_t j = 0; j < w.size(); ++j) {
    sum += w[j] * window.entries()[j].direction;
  }
  DirectionEstimate out;
  out.source = DirectionSource::kKeyframeFused;
  out.confidence = sum.norm();
  if (out.confidence < 1e-6) {
    out.direction = window.latest().direction.normalized();
  } else {
    out.direction = sum / out.confidence;
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

bool reid_match(std::span<const double> candidate_descriptor,
                const LevelStats& candidate, const KeyframeWindow& window,
                const VisibilityParams& vis_params, double tau_reid) {
  if (window.empty()) {
    throw Error(ErrorCode::kEmptyWindow, "re-identification needs keyframes");
  }
  if (!passes(candidate, vis_params)) return false;

  bool any_descriptor = false;
  double best = -1.0;
  for (const auto& kf : window.entries()) {
    if (kf.salient_descriptor.empty()) continue;
    any_descriptor = true;
    best = std::max(best,
                    cosine_similarity(candidate_descriptor, kf.salient_descriptor));
  }
  if (!any_descriptor || candidate_descriptor.empty()) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      log::warn("keyframes carry no descriptors; re-identification uses the "
                "saliency rule only");
    }
    return true;
  }
  return best >= tau_reid;
}

}  // namespace eznav
