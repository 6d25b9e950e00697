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

#ifndef UNIONST_IMAGE_HPP_
#define UNIONST_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace unionst {

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// 8-bit RGB image, row-major.
struct ImageRgb {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // 3 * width * height

  ImageRgb() = default;
  ImageRgb(int w, int h, Rgb fill = {0, 0, 0});

  uint8_t* at(int x, int y) { return pixels.data() + 3 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* at(int x, int y) const {
    return pixels.data() + 3 * (static_cast<size_t>(y) * width + x);
  }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

// RGBA raster positioned in composition space by its top-left origin.
struct Layer {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // 4 * width * height, straight (unpremultiplied) alpha

  Layer() = default;
  Layer(int x0, int y0, int w, int h);

  uint8_t* at(int x, int y) { return pixels.data() + 4 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* at(int x, int y) const {
    return pixels.data() + 4 * (static_cast<size_t>(y) * width + x);
  }
  uint8_t alpha(int x, int y) const { return at(x, y)[3]; }
  bool empty() const { return width <= 0 || height <= 0; }
};

struct Box {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open [x0,x1) x [y0,y1)
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(const Box& inner) const {
    return inner.x0 >= x0 && inner.y0 >= y0 && inner.x1 <= x1 && inner.y1 <= y1;
  }
};

// Source-over of a layer onto an RGB base. Per channel, with a = layer
// alpha: out = (c_f*a + c_b*(255-a) + 127) / 255. Pixels outside the base
// are clipped.
void blend_onto(ImageRgb& base, const Layer& layer);

// Source-over of `over` onto `under`, growing `under`'s box to the union.
void merge_over(Layer& under, const Layer& over);

// Tight bounding box of pixels with alpha > threshold, in layer-local
// coordinates. Empty box if none.
Box tight_alpha_box(const Layer& layer, uint8_t threshold = 0);

// Sum of the alpha channel.
uint64_t alpha_mass(const Layer& layer);

// Rec.601 luma of an RGB pixel, in [0, 255].
inline double luminance(const uint8_t* px) {
  return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
}

// Mean RGB over the intersection of `region` (composition coords) with the
// image; image itself sits at (0,0). Falls back to the whole-image mean
// when the intersection is empty.
Rgb mean_rgb(const ImageRgb& image, const Box& region);

ImageRgb crop(const ImageRgb& image, const Box& region);
ImageRgb resize_bilinear(const ImageRgb& image, int new_w, int new_h);

// 90 degrees counterclockwise; out(x, y) = in(W-1-y, x) with W the input
// width, so input (x, y) lands at (y, W-1-x).
ImageRgb rotate90_ccw(const ImageRgb& image);

// Separable Gaussian blur of a single float channel (kernel radius
// ceil(3*sigma), edges clamped).
void gaussian_blur(std::vector<float>& channel, int w, int h, double sigma);

// Euclidean disk dilation of the alpha channel by integer radius; the
// returned layer grows by `radius` on every side.
Layer dilate_alpha(const Layer& layer, int radius);

// Grows the canvas by `margin` on every side, preserving content position.
Layer pad_layer(const Layer& layer, int margin);

// FNV-1a over width, height and pixel bytes; identifies pixel content
// independent of file encoding.
uint64_t content_hash(const ImageRgb& image);

}  // namespace unionst

#endif  // UNIONST_IMAGE_HPP_
