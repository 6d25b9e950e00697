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

#include "unionst/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "unionst/error.hpp"

namespace unionst {

namespace {

// Standard luma/chroma quantization matrices (zig-zag-free, row-major).
constexpr int kLumaQ[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};
constexpr int kChromaQ[64] = {
    17, 18, 24, 47, 99, 99, 99, 99,  //
    18, 21, 26, 66, 99, 99, 99, 99,  //
    24, 26, 56, 99, 99, 99, 99, 99,  //
    47, 66, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99};

// Quality 1..100 scales the base table exactly the way common codecs do:
// S = 5000/q below 50, 200 - 2q above, entries clamped to [1, 255].
void scaled_table(const int base[64], int quality, int out[64]) {
  int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  for (int i = 0; i < 64; ++i)
    out[i] = std::clamp((base[i] * s + 50) / 100, 1, 255);
}

// Orthonormal 8-point DCT-II basis, cos((2x+1)u*pi/16) with C(0)=1/sqrt(2).
struct DctBasis {
  double c[8][8];
  DctBasis() {
    for (int u = 0; u < 8; ++u)
      for (int x = 0; x < 8; ++x)
        c[u][x] = std::cos((2 * x + 1) * u * std::numbers::pi / 16.0) *
                  (u == 0 ? 1.0 / std::sqrt(2.0) : 1.0) * 0.5;
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

// Quantize/dequantize one 8x8 block in place (values centered on 0).
void block_round_trip(double blk[64], const int q[64]) {
  const DctBasis& b = basis();
  double freq[64];
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double acc = 0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) acc += blk[y * 8 + x] * b.c[u][x] * b.c[v][y];
      double quantized = std::round(acc / q[v * 8 + u]);
      freq[v * 8 + u] = quantized * q[v * 8 + u];
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double acc = 0;
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) acc += freq[v * 8 + u] * b.c[u][x] * b.c[v][y];
      blk[y * 8 + x] = acc;
    }
}

void channel_round_trip(std::vector<double>& plane, int w, int h, const int q[64]) {
  int bw = (w + 7) / 8, bh = (h + 7) / 8;
  double blk[64];
  for (int by = 0; by < bh; ++by)
    for (int bx = 0; bx < bw; ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          int sx = std::min(bx * 8 + x, w - 1);  // edge replication pad
          int sy = std::min(by * 8 + y, h - 1);
          blk[y * 8 + x] = plane[static_cast<size_t>(sy) * w + sx] - 128.0;
        }
      block_round_trip(blk, q);
      for (int y = 0; y < 8; ++y) {
        int sy = by * 8 + y;
        if (sy >= h) break;
        for (int x = 0; x < 8; ++x) {
          int sx = bx * 8 + x;
          if (sx >= w) break;
          plane[static_cast<size_t>(sy) * w + sx] = blk[y * 8 + x] + 128.0;
        }
      }
    }
}

}  // namespace

AugPolicy AugPolicy::from_config(const EngineConfig& cfg) {
  AugPolicy p;
  p.resample_lo = cfg.f64("dtaug.resample_lo");
  p.resample_hi = cfg.f64("dtaug.resample_hi");
  p.compress_prob = cfg.f64("dtaug.compress_prob");
  p.quality_lo = static_cast<int>(cfg.i64("dtaug.quality_lo"));
  p.quality_hi = static_cast<int>(cfg.i64("dtaug.quality_hi"));
  p.noise_sigma = cfg.f64("dtaug.noise_sigma");
  p.validate();
  return p;
}

void AugPolicy::validate() const {
  if (!(resample_lo > 0) || resample_lo > resample_hi || resample_hi > 1.0)
    throw InvalidArgument("aug policy: need 0 < resample_lo <= resample_hi <= 1");
  if (compress_prob < 0 || compress_prob > 1)
    throw InvalidArgument("aug policy: compress_prob outside [0, 1]");
  if (quality_lo < 5 || quality_hi > 95 || quality_lo > quality_hi)
    throw InvalidArgument("aug policy: quality range outside [5, 95]");
  if (noise_sigma < 0) throw InvalidArgument("aug policy: negative noise sigma");
}

std::pair<int, int> resample_dims(int w, int h, double scale) {
  return {std::max(1, static_cast<int>(std::lround(w * scale))),
          std::max(1, static_cast<int>(std::lround(h * scale)))};
}

ImageRgb resample_degrade(const ImageRgb& image, double scale) {
  if (!(scale > 0) || scale > 1)
    throw InvalidArgument("resample_degrade: scale must be in (0, 1]");
  auto [dw, dh] = resample_dims(image.width, image.height, scale);
  if (dw == image.width && dh == image.height) return image;
  ImageRgb small = resize_bilinear(image, dw, dh);
  return resize_bilinear(small, image.width, image.height);
}

ImageRgb compression_degrade(const ImageRgb& image, int quality) {
  if (quality < 5 || quality > 95)
    throw InvalidArgument("compression_degrade: quality outside [5, 95]");
  int w = image.width, h = image.height;
  size_t n = static_cast<size_t>(w) * h;
  std::vector<double> Y(n), Cb(n), Cr(n);
  for (size_t i = 0; i < n; ++i) {
    const uint8_t* p = image.pixels.data() + 3 * i;
    double r = p[0], g = p[1], b = p[2];
    Y[i] = 0.299 * r + 0.587 * g + 0.114 * b;
    Cb[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
    Cr[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
  }
  int luma_q[64], chroma_q[64];
  scaled_table(kLumaQ, quality, luma_q);
  scaled_table(kChromaQ, quality, chroma_q);
  channel_round_trip(Y, w, h, luma_q);
  channel_round_trip(Cb, w, h, chroma_q);
  channel_round_trip(Cr, w, h, chroma_q);

  ImageRgb out(w, h);
  for (size_t i = 0; i < n; ++i) {
    double y = Y[i], cb = Cb[i] - 128.0, cr = Cr[i] - 128.0;
    double r = y + 1.402 * cr;
    double g = y - 0.344136 * cb - 0.714136 * cr;
    double b = y + 1.772 * cb;
    uint8_t* p = out.pixels.data() + 3 * i;
    p[0] = static_cast<uint8_t>(std::clamp(std::lround(r), 0L, 255L));
    p[1] = static_cast<uint8_t>(std::clamp(std::lround(g), 0L, 255L));
    p[2] = static_cast<uint8_t>(std::clamp(std::lround(b), 0L, 255L));
  }
  return out;
}

ImageRgb add_gaussian_noise(const ImageRgb& image, double sigma, Rng& rng) {
  if (sigma < 0) throw InvalidArgument("add_gaussian_noise: negative sigma");
  if (sigma == 0) return image;
  ImageRgb out = image;
  for (uint8_t& v : out.pixels) {
    double noisy = v + sigma * rng.normal();
    v = static_cast<uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
  }
  return out;
}

ImageRgb rotate_if_vertical(const ImageRgb& image) {
  if (image.height > 1.5 * image.width) return rotate90_ccw(image);
  return image;
}

ImageRgb dtaug_apply(const ImageRgb& image, const AugPolicy& policy, Rng& rng,
                     AppliedAug* log) {
  policy.validate();
  AppliedAug applied;
  applied.scale = rng.uniform(policy.resample_lo, policy.resample_hi);
  ImageRgb out = resample_degrade(image, applied.scale);
  applied.compressed = rng.bernoulli(policy.compress_prob);
  if (applied.compressed) {
    applied.quality = policy.quality_lo + static_cast<int>(rng.uniform_index(
        static_cast<size_t>(policy.quality_hi - policy.quality_lo + 1)));
    out = compression_degrade(out, applied.quality);
  }
  applied.noise_sigma = policy.noise_sigma;
  if (policy.noise_sigma > 0) out = add_gaussian_noise(out, policy.noise_sigma, rng);
  if (log) *log = applied;
  return out;
}

}  // namespace unionst
