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

#include "unionst/compose.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "unionst/error.hpp"
#include "unionst/png_io.hpp"

namespace unionst {

namespace fs = std::filesystem;

BackgroundSet BackgroundSet::load_dir(const std::string& dir,
                                      std::vector<std::string>* warnings) {
  if (!fs::is_directory(dir)) throw IoError("backgrounds directory not found: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  BackgroundSet set;
  for (const auto& path : paths) {
    ImageRgb img = read_png(path.string());
    if (img.width < 64 || img.height < 64) {
      if (warnings)
        warnings->push_back("background too small (< 64 px), skipped: " + path.string());
      continue;
    }
    set.backgrounds_.push_back({std::move(img), path.filename().string()});
  }
  if (set.backgrounds_.empty())
    throw IoError("no usable background (>= 64 px PNG) in " + dir);
  return set;
}

const Background& BackgroundSet::pick(Rng& rng) const {
  return backgrounds_[rng.uniform_index(backgrounds_.size())];
}

Layer resize_layer(const Layer& layer, double factor) {
  if (!(factor > 0)) throw InvalidArgument("resize_layer: factor must be positive");
  if (layer.empty()) return layer;
  int ow = std::max(1, static_cast<int>(std::lround(layer.width * factor)));
  int oh = std::max(1, static_cast<int>(std::lround(layer.height * factor)));
  if (ow == layer.width && oh == layer.height) {
    Layer same = layer;
    same.x0 = static_cast<int>(std::lround(layer.x0 * factor));
    same.y0 = static_cast<int>(std::lround(layer.y0 * factor));
    return same;
  }

  // Premultiplied bilinear resample; transparent outside the source.
  std::vector<float> premul(static_cast<size_t>(layer.width) * layer.height * 4);
  for (size_t i = 0, n = premul.size() / 4; i < n; ++i) {
    const uint8_t* p = layer.pixels.data() + 4 * i;
    float a = p[3] / 255.0f;
    premul[4 * i + 0] = p[0] * a;
    premul[4 * i + 1] = p[1] * a;
    premul[4 * i + 2] = p[2] * a;
    premul[4 * i + 3] = p[3];
  }
  auto texel = [&](int x, int y, float* v) {
    if (x < 0 || y < 0 || x >= layer.width || y >= layer.height) {
      v[0] = v[1] = v[2] = v[3] = 0;
      return;
    }
    const float* p = premul.data() + 4 * (static_cast<size_t>(y) * layer.width + x);
    std::copy(p, p + 4, v);
  };

  Layer out(static_cast<int>(std::lround(layer.x0 * factor)),
            static_cast<int>(std::lround(layer.y0 * factor)), ow, oh);
  double sx = static_cast<double>(layer.width) / ow;
  double sy = static_cast<double>(layer.height) / oh;
  for (int y = 0; y < oh; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int iy = static_cast<int>(std::floor(fy));
    double wy = fy - iy;
    for (int x = 0; x < ow; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int ix = static_cast<int>(std::floor(fx));
      double wx = fx - ix;
      float t00[4], t10[4], t01[4], t11[4];
      texel(ix, iy, t00);
      texel(ix + 1, iy, t10);
      texel(ix, iy + 1, t01);
      texel(ix + 1, iy + 1, t11);
      uint8_t* dst = out.at(x, y);
      float a = 0;
      float acc[4];
      for (int c = 0; c < 4; ++c) {
        acc[c] = static_cast<float>((t00[c] * (1 - wx) + t10[c] * wx) * (1 - wy) +
                                    (t01[c] * (1 - wx) + t11[c] * wx) * wy);
      }
      a = acc[3];
      dst[3] = static_cast<uint8_t>(std::clamp(std::lround(a), 0L, 255L));
      if (dst[3] == 0) {
        dst[0] = dst[1] = dst[2] = 0;
      } else {
        for (int c = 0; c < 3; ++c)
          dst[c] = static_cast<uint8_t>(
              std::clamp(std::lround(acc[c] * 255.0f / a), 0L, 255L));
      }
    }
  }
  return out;
}

CompositionPlan compute_placements(const Layer& fg, const std::vector<Layer>& mids,
                                   const Background& bg, const EngineConfig& cfg,
                                   Rng& rng) {
  Box tight = tight_alpha_box(fg);
  if (fg.empty() || tight.empty())
    throw InvalidArgument("compute_placements: empty foreground");
  int bw = tight.width(), bh = tight.height();

  // Frozen draw order: height fraction, margins (l, r, t, b), crop x/y,
  // vertical slack, then per-mid (ratio, cx, cy).
  double f = rng.uniform(0.3, 0.9);
  double margin_lo = cfg.f64("crop.margin_lo"), margin_hi = cfg.f64("crop.margin_hi");
  int ml = static_cast<int>(std::lround(rng.uniform(margin_lo, margin_hi) * bw));
  int mr = static_cast<int>(std::lround(rng.uniform(margin_lo, margin_hi) * bw));
  int mt = static_cast<int>(std::lround(rng.uniform(margin_lo, margin_hi) * bh));
  int mb = static_cast<int>(std::lround(rng.uniform(margin_lo, margin_hi) * bh));

  int crop_w = bw + ml + mr;
  int crop_h = std::max(bh + mt + mb, static_cast<int>(std::lround(bh / f)));
  if (crop_h > bg.image.height) {
    // The drawn height fraction overshoots this background; fall back to
    // the smallest crop that keeps the fraction within [0.3, 0.9].
    crop_h = std::max(bh + mt + mb, static_cast<int>(std::ceil(bh / 0.9)));
  }
  if (crop_w > bg.image.width || crop_h > bg.image.height)
    throw SkipBackground("background " + bg.source_id + " (" +
                         std::to_string(bg.image.width) + "x" +
                         std::to_string(bg.image.height) +
                         ") cannot host crop " + std::to_string(crop_w) + "x" +
                         std::to_string(crop_h));

  int crop_x = static_cast<int>(rng.uniform_index(
      static_cast<size_t>(bg.image.width - crop_w + 1)));
  int crop_y = static_cast<int>(rng.uniform_index(
      static_cast<size_t>(bg.image.height - crop_h + 1)));

  CompositionPlan plan;
  plan.crop = Box{crop_x, crop_y, crop_x + crop_w, crop_y + crop_h};
  plan.fg = fg;
  plan.fg.x0 = ml - tight.x0;
  int slack = crop_h - bh - mt - mb;
  double u = rng.uniform(0.0, 1.0);
  int top = mt + (slack > 0 ? static_cast<int>(std::lround(u * slack)) : 0);
  plan.fg.y0 = top - tight.y0;

  double ratio_lo = cfg.f64("midground.ratio_lo");
  double ratio_hi = cfg.f64("midground.ratio_hi");
  for (const Layer& mid : mids) {
    Box mt_box = tight_alpha_box(mid);
    if (mid.empty() || mt_box.empty()) continue;
    double r = rng.uniform(ratio_lo, ratio_hi);
    double cx = rng.uniform(0.0, static_cast<double>(crop_w));
    double cy = rng.uniform(0.0, static_cast<double>(crop_h));
    Layer placed = resize_layer(mid, r * bh / mt_box.height());
    Box rt = tight_alpha_box(placed);
    placed.x0 = static_cast<int>(std::lround(cx - rt.width() / 2.0)) - rt.x0;
    placed.y0 = static_cast<int>(std::lround(cy - rt.height() / 2.0)) - rt.y0;
    plan.mids.push_back(std::move(placed));
  }
  return plan;
}

Layer erase_overlap(const Layer& mid, const Layer& fg, int margin) {
  if (mid.empty() || fg.empty()) return mid;
  Layer dilated = dilate_alpha(fg, margin);
  Layer out = mid;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      int dx = out.x0 + x - dilated.x0;
      int dy = out.y0 + y - dilated.y0;
      if (dx < 0 || dy < 0 || dx >= dilated.width || dy >= dilated.height) continue;
      if (dilated.alpha(dx, dy) > 0) out.at(x, y)[3] = 0;
    }
  return out;
}

ImageRgb compose_sample(const ImageRgb& bg_image, const CompositionPlan& plan) {
  ImageRgb image = crop(bg_image, plan.crop);
  for (const Layer& mid : plan.mids)
    blend_onto(image, erase_overlap(mid, plan.fg));
  blend_onto(image, plan.fg);
  return image;
}

bool legibility_filter(const ImageRgb& image, const Layer& fg,
                       const LegibilityParams& params) {
  if (fg.empty()) return false;

  uint64_t total = 0, inside = 0;
  Layer mask(fg.x0, fg.y0, fg.width, fg.height);
  for (int y = 0; y < fg.height; ++y)
    for (int x = 0; x < fg.width; ++x) {
      uint8_t a = fg.alpha(x, y);
      total += a;
      if (image.in_bounds(fg.x0 + x, fg.y0 + y)) inside += a;
      if (a >= 128) mask.at(x, y)[3] = 255;
    }
  if (total == 0) return false;
  if (static_cast<double>(inside) / static_cast<double>(total) < params.min_inside)
    return false;

  Layer ring = dilate_alpha(mask, 3);
  double fg_sum = 0, ring_sum = 0;
  uint64_t fg_n = 0, ring_n = 0;
  for (int y = 0; y < ring.height; ++y)
    for (int x = 0; x < ring.width; ++x) {
      if (ring.alpha(x, y) == 0) continue;
      int gx = ring.x0 + x, gy = ring.y0 + y;
      if (!image.in_bounds(gx, gy)) continue;
      int mx = gx - mask.x0, my = gy - mask.y0;
      bool in_mask = mx >= 0 && my >= 0 && mx < mask.width && my < mask.height &&
                     mask.alpha(mx, my) > 0;
      double lum = luminance(image.at(gx, gy));
      if (in_mask) {
        fg_sum += lum;
        ++fg_n;
      } else {
        ring_sum += lum;
        ++ring_n;
      }
    }
  if (fg_n == 0 || ring_n == 0) return false;
  double contrast = std::abs(fg_sum / fg_n - ring_sum / ring_n);
  return contrast >= params.contrast_min;
}

}  // namespace unionst
