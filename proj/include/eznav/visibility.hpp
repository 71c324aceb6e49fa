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

#ifndef EZNAV_VISIBILITY_HPP_
#define EZNAV_VISIBILITY_HPP_

#include <optional>
#include <span>
#include <vector>

#include "eznav/saliency_pyramid.hpp"

namespace eznav {

struct VisibilityParams {
  double w_r = 1.5;       // sparsity-ratio threshold
  double w_sigma = 0.05;  // standard-deviation threshold
  double epsilon = 1e-6;
  // Evaluate levels >= 1 on fused scores (true) or raw scores (false).
  bool use_fused = true;

  void validate() const;
};

struct LevelStats {
  int level = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double max = 0.0;
  double ratio = 0.0;
};

struct VisibilityVerdict {
  bool visible = false;
  std::optional<int> deciding_level;
  std::vector<LevelStats> stats;

  // Stats of the deciding level; null when not visible.
  const LevelStats* deciding() const;
};

// Throws Error(kEmptyGrid) on an empty span.
LevelStats level_stats(std::span<const double> scores, int level,
                       const VisibilityParams& params);

// The prominent-peak rule: ratio > w_r and std > w_sigma.
bool passes(const LevelStats& stats, const VisibilityParams& params);

// Visible iff any level passes; the coarsest passing level decides.
VisibilityVerdict detect_visibility(const FusedPyramid& fp,
                                    const VisibilityParams& params);

// Same rule over arbitrary per-level score vectors (finest first).
VisibilityVerdict detect_visibility(
    std::span<const std::span<const double>> levels,
    const VisibilityParams& params);

}  // namespace eznav

#endif  // EZNAV_VISIBILITY_HPP_
