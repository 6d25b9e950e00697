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

#ifndef UNIONST_AUGMENT_HPP_
#define UNIONST_AUGMENT_HPP_

#include <utility>

#include "unionst/config.hpp"
#include "unionst/image.hpp"
#include "unionst/rng.hpp"

namespace unionst {

// Degradation policy: low-resolution resampling, lossy compression and
// additive noise, modelling capture and transmission damage.
struct AugPolicy {
  double resample_lo = 0.1;
  double resample_hi = 1.0;
  double compress_prob = 0.2;
  int quality_lo = 10;
  int quality_hi = 95;
  double noise_sigma = 4.0;

  // Reads dtaug.* keys; throws InvalidArgument when the invariants
  // (0 < resample_lo <= resample_hi <= 1, prob in [0,1], quality in
  // [5,95] with lo <= hi, sigma >= 0) do not hold.
  static AugPolicy from_config(const EngineConfig& cfg);
  void validate() const;
};

// What dtaug_apply actually did to one sample, for logging.
struct AppliedAug {
  double scale = 1.0;
  bool compressed = false;
  int quality = 0;
  double noise_sigma = 0.0;
};

// Intermediate dimensions of the down-up resample at `scale` (each axis
// rounds but never collapses below 1 px).
std::pair<int, int> resample_dims(int w, int h, double scale);

// Bilinear downscale by `scale` then upscale back to the original size.
// scale = 1 is a bit-exact identity. Requires 0 < scale <= 1.
ImageRgb resample_degrade(const ImageRgb& image, double scale);

// Lossy 8x8 block-transform round trip (luma/chroma quantization at the
// given quality in [5, 95]). Deterministic, no external codec.
ImageRgb compression_degrade(const ImageRgb& image, int quality);

// Additive Gaussian pixel noise, clamped to [0, 255]. sigma = 0 is identity.
ImageRgb add_gaussian_noise(const ImageRgb& image, double sigma, Rng& rng);

// Rotates 90 degrees counterclockwise when H > 1.5 * W (strict); otherwise
// returns the input unchanged.
ImageRgb rotate_if_vertical(const ImageRgb& image);

// Full policy application: resample at U[lo,hi], compression round trip
// with probability compress_prob at quality U{lo..hi}, then noise. Fills
// `*log` with the drawn parameters when given.
ImageRgb dtaug_apply(const ImageRgb& image, const AugPolicy& policy, Rng& rng,
                     AppliedAug* log = nullptr);

}  // namespace unionst

#endif  // UNIONST_AUGMENT_HPP_
