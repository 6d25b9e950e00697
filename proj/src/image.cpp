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

#include "unionst/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "unionst/charset.hpp"
#include "unionst/error.hpp"

namespace unionst {

ImageRgb::ImageRgb(int w, int h, Rgb fill) : width(w), height(h) {
  pixels.resize(static_cast<size_t>(3) * w * h);
  for (size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

Layer::Layer(int x0_, int y0_, int w, int h) : x0(x0_), y0(y0_), width(w), height(h) {
  pixels.assign(static_cast<size_t>(4) * w * h, 0);
}

void blend_onto(ImageRgb& base, const Layer& layer) {
  for (int ly = 0; ly < layer.height; ++ly) {
    int by = layer.y0 + ly;
    if (by < 0 || by >= base.height) continue;
    for (int lx = 0; lx < layer.width; ++lx) {
      int bx = layer.x0 + lx;
      if (bx < 0 || bx >= base.width) continue;
      const uint8_t* src = layer.at(lx, ly);
      int a = src[3];
      if (a == 0) continue;
      uint8_t* dst = base.at(bx, by);
      for (int c = 0; c < 3; ++c)
        dst[c] = static_cast<uint8_t>((src[c] * a + dst[c] * (255 - a) + 127) / 255);
    }
  }
}

void merge_over(Layer& under, const Layer& over) {
  if (over.empty()) return;
  if (under.empty()) {
    under = over;
    return;
  }
  int nx0 = std::min(under.x0, over.x0);
  int ny0 = std::min(under.y0, over.y0);
  int nx1 = std::max(under.x0 + under.width, over.x0 + over.width);
  int ny1 = std::max(under.y0 + under.height, over.y0 + over.height);
  Layer out(nx0, ny0, nx1 - nx0, ny1 - ny0);
  for (int y = 0; y < under.height; ++y)
    std::memcpy(out.at(under.x0 - nx0, under.y0 - ny0 + y), under.at(0, y),
                static_cast<size_t>(4) * under.width);
  for (int y = 0; y < over.height; ++y) {
    for (int x = 0; x < over.width; ++x) {
      const uint8_t* src = over.at(x, y);
      int ao = src[3];
      if (ao == 0) continue;
      uint8_t* dst = out.at(over.x0 - nx0 + x, over.y0 - ny0 + y);
      int au = dst[3];
      if (ao == 255 || au == 0) {
        std::memcpy(dst, src, 4);
        continue;
      }
      // Straight-alpha source-over, rounded to nearest.
      double fo = ao / 255.0, fu = au / 255.0;
      double fa = fo + fu * (1.0 - fo);
      for (int c = 0; c < 3; ++c) {
        double v = (src[c] * fo + dst[c] * fu * (1.0 - fo)) / fa;
        dst[c] = static_cast<uint8_t>(std::lround(v));
      }
      dst[3] = static_cast<uint8_t>(std::lround(fa * 255.0));
    }
  }
  under = std::move(out);
}

Box tight_alpha_box(const Layer& layer, uint8_t threshold) {
  int x0 = layer.width, y0 = layer.height, x1 = 0, y1 = 0;
  for (int y = 0; y < layer.height; ++y) {
    for (int x = 0; x < layer.width; ++x) {
      if (layer.alpha(x, y) > threshold) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x + 1);
        y1 = std::max(y1, y + 1);
      }
    }
  }
  if (x1 <= x0) return {};
  return {x0, y0, x1, y1};
}

uint64_t alpha_mass(const Layer& layer) {
  uint64_t sum = 0;
  for (size_t i = 3; i < layer.pixels.size(); i += 4) sum += layer.pixels[i];
  return sum;
}

Rgb mean_rgb(const ImageRgb& image, const Box& region) {
  int x0 = std::max(0, region.x0), y0 = std::max(0, region.y0);
  int x1 = std::min(image.width, region.x1), y1 = std::min(image.height, region.y1);
  if (x1 <= x0 || y1 <= y0) {
    x0 = 0;
    y0 = 0;
    x1 = image.width;
    y1 = image.height;
  }
  uint64_t sum[3] = {0, 0, 0};
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      const uint8_t* p = image.at(x, y);
      sum[0] += p[0];
      sum[1] += p[1];
      sum[2] += p[2];
    }
  uint64_t n = static_cast<uint64_t>(x1 - x0) * (y1 - y0);
  return {static_cast<uint8_t>(sum[0] / n), static_cast<uint8_t>(sum[1] / n),
          static_cast<uint8_t>(sum[2] / n)};
}

ImageRgb crop(const ImageRgb& image, const Box& region) {
  if (region.empty() || region.x0 < 0 || region.y0 < 0 || region.x1 > image.width ||
      region.y1 > image.height)
    throw InvalidArgument("crop region outside image");
  ImageRgb out(region.width(), region.height());
  for (int y = 0; y < out.height; ++y)
    std::memcpy(out.at(0, y), image.at(region.x0, region.y0 + y),
                static_cast<size_t>(3) * out.width);
  return out;
}

ImageRgb resize_bilinear(const ImageRgb& image, int new_w, int new_h) {
  if (new_w == image.width && new_h == image.height) return image;
  if (new_w < 1 || new_h < 1) throw InvalidArgument("resize target must be positive");
  ImageRgb out(new_w, new_h);
  double sx = static_cast<double>(image.width) / new_w;
  double sy = static_cast<double>(image.height) / new_h;
  for (int y = 0; y < new_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int iy = static_cast<int>(std::floor(fy));
    double wy = fy - iy;
    int y0 = std::clamp(iy, 0, image.height - 1);
    int y1 = std::clamp(iy + 1, 0, image.height - 1);
    for (int x = 0; x < new_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int ix = static_cast<int>(std::floor(fx));
      double wx = fx - ix;
      int x0 = std::clamp(ix, 0, image.width - 1);
      int x1 = std::clamp(ix + 1, 0, image.width - 1);
      const uint8_t* p00 = image.at(x0, y0);
      const uint8_t* p10 = image.at(x1, y0);
      const uint8_t* p01 = image.at(x0, y1);
      const uint8_t* p11 = image.at(x1, y1);
      uint8_t* dst = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        double v = p00[c] * (1 - wx) * (1 - wy) + p10[c] * wx * (1 - wy) +
                   p01[c] * (1 - wx) * wy + p11[c] * wx * wy;
        dst[c] = static_cast<uint8_t>(std::lround(v));
      }
    }
  }
  return out;
}

ImageRgb rotate90_ccw(const ImageRgb& image) {
  ImageRgb out(image.height, image.width);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      std::memcpy(out.at(x, y), image.at(image.width - 1 - y, x), 3);
  return out;
}

void gaussian_blur(std::vector<float>& channel, int w, int h, double sigma) {
  if (sigma <= 0.0) return;
  int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<float> kernel(2 * radius + 1);
  double norm = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[i + radius] = static_cast<float>(v);
    norm += v;
  }
  for (auto& k : kernel) k = static_cast<float>(k / norm);

  std::vector<float> tmp(channel.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0;
      for (int i = -radius; i <= radius; ++i) {
        int xx = std::clamp(x + i, 0, w - 1);
        acc += kernel[i + radius] * channel[static_cast<size_t>(y) * w + xx];
      }
      tmp[static_cast<size_t>(y) * w + x] = acc;
    }
  }
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      float acc = 0;
      for (int i = -radius; i <= radius; ++i) {
        int yy = std::clamp(y + i, 0, h - 1);
        acc += kernel[i + radius] * tmp[static_cast<size_t>(yy) * w + x];
      }
      channel[static_cast<size_t>(y) * w + x] = acc;
    }
  }
}

Layer dilate_alpha(const Layer& layer, int radius) {
  Layer out(layer.x0 - radius, layer.y0 - radius, layer.width + 2 * radius,
            layer.height + 2 * radius);
  // Disk offsets within radius.
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      int best = 0;
      for (auto [dx, dy] : offsets) {
        int sx = x - radius + dx;
        int sy = y - radius + dy;
        if (sx < 0 || sy < 0 || sx >= layer.width || sy >= layer.height) continue;
        best = std::max<int>(best, layer.alpha(sx, sy));
        if (best == 255) break;
      }
      out.at(x, y)[3] = static_cast<uint8_t>(best);
    }
  }
  return out;
}

Layer pad_layer(const Layer& layer, int margin) {
  Layer out(layer.x0 - margin, layer.y0 - margin, layer.width + 2 * margin,
            layer.height + 2 * margin);
  for (int y = 0; y < layer.height; ++y)
    std::memcpy(out.at(margin, margin + y), layer.at(0, y),
                static_cast<size_t>(4) * layer.width);
  return out;
}

uint64_t content_hash(const ImageRgb& image) {
  uint64_t h = 0xcbf29ce484222325ull;
  int32_t dims[2] = {image.width, image.height};
  h = fnv1a64(dims, sizeof(dims), h);
  return fnv1a64(image.pixels.data(), image.pixels.size(), h);
}

}  // namespace unionst
