// Copyright 2026 The UnionST Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNIONST_COMPOSE_HPP_
#define UNIONST_COMPOSE_HPP_

#include <string>
#include <vector>

#include "unionst/config.hpp"
#include "unionst/image.hpp"
#include "unionst/rng.hpp"

namespace unionst {

// One background resource; the compositor never mutates it.
struct Background {
  ImageRgb image;
  std::string source_id;
};

// Read-only pool of backgrounds shared across workers.
class BackgroundSet {
 public:
  // Loads every PNG under `dir` (sorted by filename for reproducibility).
  // Images smaller than 64 px on either side are skipped with a warning in
  // `*warnings` when given. Throws IoError when the directory is missing
  // or no usable background remains.
  static BackgroundSet load_dir(const std::string& dir,
                                std::vector<std::string>* warnings = nullptr);

  const Background& pick(Rng& rng) const;
  const std::vector<Background>& all() const { return backgrounds_; }
  size_t size() const { return backgrounds_.size(); }

 private:
  std::vector<Background> backgrounds_;
};

// Where everything lands. All layers are positioned in crop-local
// coordinates; `crop` addresses the chosen background.
struct CompositionPlan {
  Layer fg;                 // styled foreground, box contained in the crop
  std::vector<Layer> mids;  // clutter text, may extend beyond the crop
  Box crop;                 // rectangle within the background image
};

// Geometry-only placement. The crop is sized around the foreground tight
// box: per-side margins ~ U[crop.margin_lo, crop.margin_hi] of the box
// dimension, and the crop height is stretched so the text height lands in
// [0.3, 0.9] of it. Each mid-ground layer is rescaled independently to a
// U[midground.ratio_lo, midground.ratio_hi] multiple of the foreground
// height and centered uniformly over the crop. Throws SkipBackground when
// the background cannot host the crop.
CompositionPlan compute_placements(const Layer& fg, const std::vector<Layer>& mids,
                                   const Background& bg, const EngineConfig& cfg,
                                   Rng& rng);

// Rescales a layer's raster by `factor` (premultiplied bilinear); the
// origin scales with it. factor <= 0 throws InvalidArgument.
Layer resize_layer(const Layer& layer, double factor);

// Zeroes the mid-ground alpha wherever the foreground alpha — dilated by
// `margin` px — covers it. Both layers are taken in common coordinates.
Layer erase_overlap(const Layer& mid, const Layer& fg, int margin = 2);

// Crops the background, blends each mid-ground layer with the foreground
// overlap erased, then blends the foreground on top.
ImageRgb compose_sample(const ImageRgb& bg_image, const CompositionPlan& plan);

struct LegibilityParams {
  double contrast_min = 24.0;   // minimal |mean fg luma - mean ring luma|
  double min_inside = 0.95;     // fraction of fg alpha mass inside the image
};

// Post-generation acceptance test: the rendered text must contrast with a
// 3 px ring around its opaque mask and must mostly lie inside the image.
bool legibility_filter(const ImageRgb& image, const Layer& fg,
                       const LegibilityParams& params);

}  // namespace unionst

#endif  // UNIONST_COMPOSE_HPP_
