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

#include "eznav/visibility.hpp"

#include <algorithm>
#include <cmath>

#include "eznav/error.hpp"

namespace eznav {

void VisibilityParams::validate() const {
  if (!(w_r > 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "w_r must exceed 1");
  }
  if (!(w_sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "w_sigma must be positive");
  }
  if (epsilon < 0.0 || epsilon > 1e-3) {
    throw Error(ErrorCode::kInvalidConfig, "epsilon must be in [0, 1e-3]");
  }
}

const LevelStats* VisibilityVerdict::deciding() const {
  if (!deciding_level) return nullptr;
  for (const auto& s : stats) {
    if (s.level == *deciding_level) return &s;
  }
  return nullptr;
}

LevelStats level_stats(std::span<const double> scores, int level,
                       const VisibilityParams& params) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyGrid, "level has no tiles");
  }
  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  double mx = scores.front();
  for (double s : scores) {
    sum += s;
    mx = std::max(mx, s);
  }
  LevelStats st;
  st.level = level;
  st.mean = sum / n;
  double ss = 0.0;
  for (double s : scores) ss += (s - st.mean) * (s - st.mean);
  st.std = std::sqrt(ss / n);
  st.max = mx;
  const double denom = st.mean + params.epsilon;
  st.ratio = denom > 0.0 ? mx / denom : 0.0;
  return st;
}

bool passes(const LevelStats& stats, const VisibilityParams& params) {
  return stats.ratio > params.w_r && stats.std > params.w_sigma;
}

VisibilityVerdict detect_visibility(
    std::span<const std::span<const double>> levels,
    const VisibilityParams& params) {
  VisibilityVerdict v;
  v.stats.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    v.stats.push_back(level_stats(levels[l], static_cast<int>(l), params));
    if (passes(v.stats.back(), params)) {
      v.deciding_level = static_cast<int>(l);  // later (coarser) levels win
    }
  }
  v.visible = v.deciding_level.has_value();
  return v;
}

VisibilityVerdict detect_visibility(const FusedPyramid& fp,
                                    const VisibilityParams& params) {
  std::vector<std::span<const double>> levels;
  levels.reserve(fp.fused.size());
  for (std::size_t l = 0; l < fp.fused.size(); ++l) {
    levels.push_back(params.use_fused ? fp.fused[l].values()
                                      : fp.raw[l].scores.values());
  }
  return detect_visibility(levels, params);
}

}  // namespace eznav
