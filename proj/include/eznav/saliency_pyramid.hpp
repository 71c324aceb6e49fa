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

// Aligned multi-scale tile pyramid over a single-resolution image and the
// bottom-up saliency fusion that turns fine-tile semantic contrast into a
// coarse regional saliency.
//
// Levels are stored finest first. Adjacent levels are dyadically aligned:
// every tile at level l+1 covers exactly a 2x2 block of level-l tiles, so
// attribution between scales is unique and deterministic.

#ifndef EZNAV_SALIENCY_PYRAMID_HPP_
#define EZNAV_SALIENCY_PYRAMID_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace eznav {

struct GridShape {
  int rows = 1;
  int cols = 1;

  int size() const { return rows * cols; }
  bool operator==(const GridShape&) const = default;
};

struct TileIndex {
  int row = 0;
  int col = 0;

  bool operator==(const TileIndex&) const = default;
};

struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

struct PixelRect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
};

struct PyramidLayout {
  std::vector<GridShape> levels;  // finest first
  int image_width = 0;
  int image_height = 0;

  int num_levels() const { return static_cast<int>(levels.size()); }
  const GridShape& finest() const { return levels.front(); }
  const GridShape& coarsest() const { return levels.back(); }

  // 8x12 / 4x6 / 2x3 over the given image size.
  static PyramidLayout standard(int image_width = 960, int image_height = 480);
};

// Row-major matrix of per-tile scores.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  explicit ScoreMatrix(GridShape shape, double fill = 0.0);
  ScoreMatrix(GridShape shape, std::vector<double> values);

  const GridShape& shape() const { return shape_; }
  int rows() const { return shape_.rows; }
  int cols() const { return shape_.cols; }

  double& at(int row, int col) { return values_[index(row, col)]; }
  double at(int row, int col) const { return values_[index(row, col)]; }
  double& at(TileIndex t) { return at(t.row, t.col); }
  double at(TileIndex t) const { return at(t.row, t.col); }

  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  bool operator==(const ScoreMatrix&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * shape_.cols + col;
  }

  GridShape shape_;
  std::vector<double> values_;
};

// Per-tile similarity scores for one level, with optional unit-norm
// per-tile descriptors used for re-identification.
struct ScoreGrid {
  ScoreMatrix scores;
  std::vector<std::vector<double>> descriptors;  // empty, or one per tile

  const GridShape& shape() const { return scores.shape(); }
  bool has_descriptors() const { return !descriptors.empty(); }
  const std::vector<double>& descriptor(TileIndex t) const;
};

// Throws Error(kShapeMismatch / kMalformedFile) when the scores are not
// finite or descriptors are malformed.
void validate_score_grid(const ScoreGrid& grid);

struct FusionParams {
  double base = 1.5;
  double sigma_clip_lo = 0.0;
  double sigma_clip_hi = 1.0;
  std::vector<int> top_k_per_step = {2, 1};
  // Compute the child spread over already-fused child scores (true) or over
  // the raw child scores (false) for steps after the first.
  bool sigma_from_fused = true;

  void validate(int num_steps) const;
};

struct FusedPyramid {
  PyramidLayout layout;
  std::vector<ScoreGrid> raw;
  std::vector<ScoreMatrix> fused;  // fused[0] == raw[0].scores
  TileIndex anchor;                // at the coarsest level

  int coarsest_level() const { return layout.num_levels() - 1; }
};

// Throws Error(kNonDyadic) or Error(kIndivisible).
void validate_layout(const PyramidLayout& layout);

// The 2x2 block of level-1 tiles under `tile` at `level`, row-major.
std::array<TileIndex, 4> child_indices(const PyramidLayout& layout, int level,
                                       TileIndex tile);

// Pixel rectangle of a tile, [x0, x1) x [y0, y1).
PixelRect tile_rect(const PyramidLayout& layout, int level, TileIndex tile);

// Argmax with row-major-first tie breaking.
TileIndex argmax(const ScoreMatrix& m);

struct Amplification {
  double sigma = 0.0;
  double sigma_hat = 0.0;
  double beta = 1.0;
};

Amplification amplification(std::span<const double, 4> children,
                            const FusionParams& params);

// One bottom-up step: parent(p) + beta * (sum of the k largest children).
// `sigma_source` defaults to `child`; pass the raw child scores to compute
// the spread over unfused values.
ScoreMatrix fuse_step(const ScoreMatrix& parent, const ScoreMatrix& child,
                      const FusionParams& params, int k,
                      const ScoreMatrix* sigma_source = nullptr);

FusedPyramid fuse_pyramid(std::vector<ScoreGrid> raw,
                          const PyramidLayout& layout,
                          const FusionParams& params);

// Follows fused argmax from the coarse anchor down to the finest level.
TileIndex descend_to_finest(const FusedPyramid& fp);

// Center pixel of the coarse anchor tile, or of the finest tile reached by
// descending along the fused argmax when `refine` is set.
PixelCoord anchor_pixel(const FusedPyramid& fp, bool refine);

}  // namespace eznav

#endif  // EZNAV_SALIENCY_PYRAMID_HPP_
