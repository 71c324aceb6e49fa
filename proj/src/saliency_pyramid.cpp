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

#include "eznav/saliency_pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "eznav/error.hpp"

namespace eznav {

PyramidLayout PyramidLayout::standard(int image_width, int image_height) {
  return PyramidLayout{{{8, 12}, {4, 6}, {2, 3}}, image_width, image_height};
}

ScoreMatrix::ScoreMatrix(GridShape shape, double fill)
    : shape_(shape), values_(static_cast<std::size_t>(shape.size()), fill) {}

ScoreMatrix::ScoreMatrix(GridShape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != shape_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected " + std::to_string(shape_.size()) + " scores, got " +
                    std::to_string(values_.size()));
  }
}

const std::vector<double>& ScoreGrid::descriptor(TileIndex t) const {
  return descriptors.at(static_cast<std::size_t>(t.row) * shape().cols +
                        t.col);
}

void validate_score_grid(const ScoreGrid& grid) {
  for (double s : grid.scores.values()) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kMalformedFile, "non-finite score");
    }
  }
  if (!grid.has_descriptors()) return;
  if (static_cast<int>(grid.descriptors.size()) != grid.shape().size()) {
    throw Error(ErrorCode::kShapeMismatch, "descriptor count != tile count");
  }
  const std::size_t dim = grid.descriptors.front().size();
  for (const auto& d : grid.descriptors) {
    if (d.size() != dim || dim == 0) {
      throw Error(ErrorCode::kShapeMismatch, "ragged descriptors");
    }
    double n2 = 0.0;
    for (double x : d) n2 += x * x;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-6) {
      throw Error(ErrorCode::kMalformedFile, "descriptor is not unit-norm");
    }
  }
}

void FusionParams::validate(int num_steps) const {
  // base == 1 disables amplification (ablation); below 1 would invert it.
  if (!(base >= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "fusion base must be >= 1");
  }
  if (!(sigma_clip_lo < sigma_clip_hi)) {
    throw Error(ErrorCode::kInvalidConfig, "sigma clip range is empty");
  }
  if (static_cast<int>(top_k_per_step.size()) < num_steps) {
    throw Error(ErrorCode::kInvalidConfig,
                "top_k_per_step needs one entry per fusion step");
  }
  for (int k : top_k_per_step) {
    if (k < 1 || k > 4) {
      throw Error(ErrorCode::kInvalidConfig, "top-k must be in [1, 4]");
    }
  }
}

void validate_layout(const PyramidLayout& layout) {
  if (layout.levels.size() < 2) {
    throw Error(ErrorCode::kNonDyadic, "a pyramid needs at least two levels");
  }
  for (const auto& g : layout.levels) {
    if (g.rows < 1 || g.cols < 1) {
      throw Error(ErrorCode::kNonDyadic, "grid dimensions must be positive");
    }
  }
  for (std::size_t l = 0; l + 1 < layout.levels.size(); ++l) {
    const auto& fine = layout.levels[l];
    const auto& coarse = layout.levels[l + 1];
    if (fine.rows != 2 * coarse.rows || fine.cols != 2 * coarse.cols) {
      throw Error(ErrorCode::kNonDyadic,
                  "level " + std::to_string(l) + " is not 2x level " +
                      std::to_string(l + 1));
    }
  }
  const auto& f = layout.finest();
  if (layout.image_width <= 0 || layout.image_height <= 0 ||
      layout.image_width % f.cols != 0 || layout.image_height % f.rows != 0) {
    throw Error(ErrorCode::kIndivisible,
                "image " + std::to_string(layout.image_width) + "x" +
                    std::to_string(layout.image_height) +
                    " not divisible by finest grid " + std::to_string(f.rows) +
                    "x" + std::to_string(f.cols));
  }
}

std::array<TileIndex, 4> child_indices(const PyramidLayout& layout, int level,
                                       TileIndex tile) {
  if (level < 1 || level >= layout.num_levels()) {
    throw Error(ErrorCode::kOutOfRange,
                "level " + std::to_string(level) + " has no children");
  }
  const auto& g = layout.levels[static_cast<std::size_t>(level)];
  if (tile.row < 0 || tile.row >= g.rows || tile.col < 0 ||
      tile.col >= g.cols) {
    throw Error(ErrorCode::kOutOfRange, "tile outside level grid");
  }
  const int r = 2 * tile.row;
  const int c = 2 * tile.col;
  return {TileIndex{r, c}, TileIndex{r, c + 1}, TileIndex{r + 1, c},
          TileIndex{r + 1, c + 1}};
}

PixelRect tile_rect(const PyramidLayout& layout, int level, TileIndex tile) {
  const auto& g = layout.levels.at(static_cast<std::size_t>(level));
  const double w = static_cast<double>(layout.image_width) / g.cols;
  const double h = static_cast<double>(layout.image_height) / g.rows;
  return {tile.col * w, tile.row * h, (tile.col + 1) * w, (tile.row + 1) * h};
}

TileIndex argmax(const ScoreMatrix& m) {
  TileIndex best{0, 0};
  double best_value = m.at(0, 0);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m.at(r, c) > best_value) {
        best_value = m.at(r, c);
        best = {r, c};
      }
    }
  }
  return best;
}

Amplification amplification(std::span<const double, 4> children,
                            const FusionParams& params) {
  double mean = 0.0;
  for (double x : children) mean += x;
  mean /= 4.0;
  double ss = 0.0;
  for (double x : children) ss += (x - mean) * (x - mean);
  Amplification a;
  a.sigma = std::sqrt(ss / 4.0);
  a.sigma_hat = std::clamp(a.sigma, params.sigma_clip_lo, params.sigma_clip_hi);
  a.beta = std::pow(params.base, a.sigma_hat);
  return a;
}

namespace {

std::array<double, 4> gather(const ScoreMatrix& child, int pr, int pc) {
  const int r = 2 * pr;
  const int c = 2 * pc;
  return {child.at(r, c), child.at(r, c + 1), child.at(r + 1, c),
          child.at(r + 1, c + 1)};
}

}  // namespace

ScoreMatrix fuse_step(const ScoreMatrix& parent, const ScoreMatrix& child,
                      const FusionParams& params, int k,
                      const ScoreMatrix* sigma_source) {
  if (child.rows() != 2 * parent.rows() || child.cols() != 2 * parent.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "child grid must be twice the parent grid");
  }
  if (sigma_source != nullptr && sigma_source->shape() != child.shape()) {
    throw Error(ErrorCode::kShapeMismatch, "sigma source shape != child");
  }
  if (k < 1 || k > 4) {
    throw Error(ErrorCode::kOutOfRange, "top-k must be in [1, 4]");
  }
  const ScoreMatrix& spread = sigma_source ? *sigma_source : child;
  ScoreMatrix out = parent;
  for (int r = 0; r < parent.rows(); ++r) {
    for (int c = 0; c < parent.cols(); ++c) {
      auto kids = gather(child, r, c);
      const auto spread_kids = gather(spread, r, c);
      const double beta = amplification(spread_kids, params).beta;
      std::sort(kids.begin(), kids.end(), std::greater<>());
      double top = 0.0;
      for (int i = 0; i < k; ++i) top += kids[static_cast<std::size_t>(i)];
      out.at(r, c) = parent.at(r, c) + beta * top;
    }
  }
  return out;
}

FusedPyramid fuse_pyramid(std::vector<ScoreGrid> raw,
                          const PyramidLayout& layout,
                          const FusionParams& params) {
  validate_layout(layout);
  if (static_cast<int>(raw.size()) != layout.num_levels()) {
    throw Error(ErrorCode::kShapeMismatch,
                "expected one score grid per pyramid level");
  }
  for (int l = 0; l < layout.num_levels(); ++l) {
    if (raw[static_cast<std::size_t>(l)].shape() !=
        layout.levels[static_cast<std::size_t>(l)]) {
      throw Error(ErrorCode::kShapeMismatch,
                  "score grid shape differs from layout at level " +
                      std::to_string(l));
    }
  }
  params.validate(layout.num_levels() - 1);

  FusedPyramid fp;
  fp.layout = layout;
  fp.fused.reserve(raw.size());
  fp.fused.push_back(raw.front().scores);
  for (int l = 1; l < layout.num_levels(); ++l) {
    const auto step = static_cast<std::size_t>(l - 1);
    const ScoreMatrix* sigma_source =
        (!params.sigma_from_fused && l >= 2) ? &raw[step].scores : nullptr;
    fp.fused.push_back(fuse_step(raw[static_cast<std::size_t>(l)].scores,
                                 fp.fused.back(), params,
                                 params.top_k_per_step[step], sigma_source));
  }
  fp.anchor = argmax(fp.fused.back());
  fp.raw = std::move(raw);
  return fp;
}

TileIndex descend_to_finest(const FusedPyramid& fp) {
  TileIndex tile = fp.anchor;
  for (int l = fp.coarsest_level(); l >= 1; --l) {
    const auto kids = child_indices(fp.layout, l, tile);
    const auto& below = fp.fused[static_cast<std::size_t>(l - 1)];
    TileIndex best = kids[0];
    for (const auto& k : kids) {
      if (below.at(k) > below.at(best)) best = k;
    }
    tile = best;
  }
  return tile;
}

PixelCoord anchor_pixel(const FusedPyramid& fp, bool refine) {
  const int level = refine ? 0 : fp.coarsest_level();
  const TileIndex tile = refine ? descend_to_finest(fp) : fp.anchor;
  const PixelRect r = tile_rect(fp.layout, level, tile);
  return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)};
}

}  // namespace eznav
