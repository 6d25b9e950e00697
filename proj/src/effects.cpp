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

#include "unionst/effects.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "unionst/error.hpp"

namespace unionst {

namespace {

// Premultiplied float copy of a layer; bilinear sampling during warps works
// on premultiplied values so transparent neighborhoods do not bleed color.
struct PremulImage {
  int w = 0, h = 0;
  std::vector<float> px;  // 4 floats per pixel

  static PremulImage from(const Layer& layer) {
    PremulImage img;
    img.w = layer.width;
    img.h = layer.height;
    img.px.resize(static_cast<size_t>(img.w) * img.h * 4);
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) {
        const uint8_t* s = layer.at(x, y);
        float a = s[3] / 255.0f;
        float* d = &img.px[(static_cast<size_t>(y) * img.w + x) * 4];
        d[0] = s[0] * a;
        d[1] = s[1] * a;
        d[2] = s[2] * a;
        d[3] = s[3];
      }
    return img;
  }

  // Bilinear sample at (x, y); outside the raster counts as transparent.
  void sample(double x, double y, float out[4]) const {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0, fy = y - y0;
    out[0] = out[1] = out[2] = out[3] = 0.0f;
    for (int dy = 0; dy <= 1; ++dy)
      for (int dx = 0; dx <= 1; ++dx) {
        int sx = x0 + dx, sy = y0 + dy;
        if (sx < 0 || sy < 0 || sx >= w || sy >= h) continue;
        double wgt = (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy);
        const float* s = &px[(static_cast<size_t>(sy) * w + sx) * 4];
        for (int c = 0; c < 4; ++c) out[c] += static_cast<float>(wgt * s[c]);
      }
  }
};

uint8_t to_u8(double v) {
  return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void store_unpremul(uint8_t* d, const float s[4]) {
  double a = s[3];
  d[3] = to_u8(a);
  if (d[3] == 0) {
    d[0] = d[1] = d[2] = 0;
    return;
  }
  double inv = 255.0 / a;
  d[0] = to_u8(s[0] * inv);
  d[1] = to_u8(s[1] * inv);
  d[2] = to_u8(s[2] * inv);
}

}  // namespace

Layer render_char(const Font& font, char32_t ch, const CharPlacement& placement,
                  Rgb color) {
  if (!font.has_glyph(ch))
    throw NoGlyphError("render_char: codepoint not mapped by font");
  GlyphRaster g = font.rasterize(ch, placement.s, placement.o);
  if (g.empty()) return Layer();
  // Device space: y flips relative to the mathematical layout coordinates.
  int x0 = static_cast<int>(std::lround(placement.x + g.offset_x));
  int y0 = static_cast<int>(std::lround(-placement.y + g.offset_y));
  Layer layer(x0, y0, g.width, g.height);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) {
      uint8_t* d = layer.at(x, y);
      d[0] = color.r;
      d[1] = color.g;
      d[2] = color.b;
      d[3] = g.alpha[static_cast<size_t>(y) * g.width + x];
    }
  return layer;
}

Layer render_text(const Font& font, const std::u32string& text,
                  const TextLayout& layout, Rgb color) {
  if (text.size() != layout.placements.size())
    throw InvalidArgument("render_text: text/layout length mismatch");
  Layer merged;
  for (size_t i = 0; i < text.size(); ++i) {
    Layer ch = render_char(font, text[i], layout.placements[i], color);
    if (ch.empty()) continue;
    if (merged.empty())
      merged = std::move(ch);
    else
      merge_over(merged, ch);
  }
  return merged;
}

Layer elastic_deform(const Layer& layer, double alpha, double sigma, Rng& rng) {
  if (alpha < 0) throw InvalidArgument("elastic_deform: alpha must be >= 0");
  if (sigma <= 0) throw InvalidArgument("elastic_deform: sigma must be > 0");
  if (alpha == 0.0 || layer.empty()) return layer;

  int pad = static_cast<int>(std::ceil(alpha)) + 1;
  int w = layer.width + 2 * pad, h = layer.height + 2 * pad;
  size_t n = static_cast<size_t>(w) * h;

  // Draw order: the full x-field, then the full y-field (row-major).
  std::vector<float> du(n), dv(n);
  for (auto& v : du) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (auto& v : dv) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  gaussian_blur(du, w, h, sigma);
  gaussian_blur(dv, w, h, sigma);

  double max_mag = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double m = std::sqrt(static_cast<double>(du[i]) * du[i] +
                         static_cast<double>(dv[i]) * dv[i]);
    max_mag = std::max(max_mag, m);
  }
  double scale = max_mag > 0 ? alpha / max_mag : 0.0;

  PremulImage src = PremulImage::from(layer);
  Layer out(layer.x0 - pad, layer.y0 - pad, w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      size_t i = static_cast<size_t>(y) * w + x;
      float v[4];
      src.sample(x - pad + du[i] * scale, y - pad + dv[i] * scale, v);
      store_unpremul(out.at(x, y), v);
    }
  return out;
}

namespace {

bool quad_convex(const QuadF& q) {
  double sign = 0;
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4, k = (i + 2) % 4;
    double cross = (q.x[j] - q.x[i]) * (q.y[k] - q.y[j]) -
                   (q.y[j] - q.y[i]) * (q.x[k] - q.x[j]);
    if (cross == 0) return false;
    if (sign == 0)
      sign = cross;
    else if ((cross > 0) != (sign > 0))
      return false;
  }
  return true;
}

// Homography H (row-major 3x3) with H * (sx, sy, 1) ~ (dx, dy, 1) for the
// four corner correspondences, solved by Gaussian elimination.
void solve_homography(const double sx[4], const double sy[4], const double dx[4],
                      const double dy[4], double H[9]) {
  double m[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    double* r1 = m[2 * i];
    double* r2 = m[2 * i + 1];
    r1[0] = sx[i]; r1[1] = sy[i]; r1[2] = 1;
    r1[6] = -sx[i] * dx[i]; r1[7] = -sy[i] * dx[i]; r1[8] = dx[i];
    r2[3] = sx[i]; r2[4] = sy[i]; r2[5] = 1;
    r2[6] = -sx[i] * dy[i]; r2[7] = -sy[i] * dy[i]; r2[8] = dy[i];
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-12)
      throw InvalidArgument("perspective_warp: degenerate corner mapping");
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      for (int c = col; c < 9; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int i = 0; i < 8; ++i) H[i] = m[i][8] / m[i][i];
  H[8] = 1.0;
}

void invert3(const double H[9], double inv[9]) {
  double a = H[0], b = H[1], c = H[2], d = H[3], e = H[4], f = H[5], g = H[6],
         h = H[7], i = H[8];
  double det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  if (std::abs(det) < 1e-12)
    throw InvalidArgument("perspective_warp: singular homography");
  inv[0] = (e * i - f * h) / det;
  inv[1] = (c * h - b * i) / det;
  inv[2] = (b * f - c * e) / det;
  inv[3] = (f * g - d * i) / det;
  inv[4] = (a * i - c * g) / det;
  inv[5] = (c * d - a * f) / det;
  inv[6] = (d * h - e * g) / det;
  inv[7] = (b * g - a * h) / det;
  inv[8] = (a * e - b * d) / det;
}

}  // namespace

QuadF quad_from_fractions(const Layer& layer, const PerspectiveSpec& spec) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(spec.dx[i]) > 0.35 || std::abs(spec.dy[i]) > 0.35)
      throw InvalidArgument("perspective: corner displacement exceeds 0.35");
  double w = layer.width, h = layer.height;
  const double cx[4] = {0, w, w, 0};
  const double cy[4] = {0, 0, h, h};
  QuadF q;
  for (int i = 0; i < 4; ++i) {
    q.x[i] = cx[i] + spec.dx[i] * w;
    q.y[i] = cy[i] + spec.dy[i] * h;
  }
  return q;
}

Layer perspective_warp(const Layer& layer, const QuadF& corners) {
  if (layer.empty()) return layer;
  if (!quad_convex(corners))
    throw InvalidArgument("perspective_warp: corners form a non-convex quad");

  double w = layer.width, h = layer.height;
  const double sx[4] = {0, w, w, 0};
  const double sy[4] = {0, 0, h, h};
  // Uniform integer corner displacement is a pure translation: shift the
  // origin and copy the pixels exactly instead of resampling.
  double tx = corners.x[0] - sx[0], ty = corners.y[0] - sy[0];
  bool translation = tx == std::floor(tx) && ty == std::floor(ty);
  for (int i = 0; i < 4; ++i)
    if (corners.x[i] != sx[i] + tx || corners.y[i] != sy[i] + ty) translation = false;
  if (translation) {
    Layer out = layer;
    out.x0 += static_cast<int>(tx);
    out.y0 += static_cast<int>(ty);
    return out;
  }

  double H[9], Hinv[9];
  solve_homography(sx, sy, corners.x, corners.y, H);
  invert3(H, Hinv);

  double min_x = corners.x[0], max_x = corners.x[0];
  double min_y = corners.y[0], max_y = corners.y[0];
  for (int i = 1; i < 4; ++i) {
    min_x = std::min(min_x, corners.x[i]);
    max_x = std::max(max_x, corners.x[i]);
    min_y = std::min(min_y, corners.y[i]);
    max_y = std::max(max_y, corners.y[i]);
  }
  int ox = static_cast<int>(std::floor(min_x));
  int oy = static_cast<int>(std::floor(min_y));
  int ow = static_cast<int>(std::ceil(max_x)) - ox;
  int oh = static_cast<int>(std::ceil(max_y)) - oy;
  if (ow <= 0 || oh <= 0) return Layer();

  PremulImage src = PremulImage::from(layer);
  Layer out(layer.x0 + ox, layer.y0 + oy, ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double px = x + ox, py = y + oy;
      double denom = Hinv[6] * px + Hinv[7] * py + Hinv[8];
      if (std::abs(denom) < 1e-12) continue;
      double ux = (Hinv[0] * px + Hinv[1] * py + Hinv[2]) / denom;
      double uy = (Hinv[3] * px + Hinv[4] * py + Hinv[5]) / denom;
      float v[4];
      src.sample(ux, uy, v);
      store_unpremul(out.at(x, y), v);
    }
  return out;
}

Layer apply_border(const Layer& layer, const BorderSpec& spec) {
  if (spec.width <= 0 || layer.empty()) return layer;
  Layer border = dilate_alpha(layer, spec.width);
  for (int y = 0; y < border.height; ++y)
    for (int x = 0; x < border.width; ++x) {
      uint8_t* d = border.at(x, y);
      d[0] = spec.color.r;
      d[1] = spec.color.g;
      d[2] = spec.color.b;
    }
  merge_over(border, layer);  // glyph composites over its border
  return border;
}

Layer apply_shadow(const Layer& layer, const ShadowSpec& spec) {
  if (spec.opacity <= 0 || layer.empty()) return layer;
  int pad = static_cast<int>(std::ceil(3 * std::max(spec.sigma, 0.0))) + 1;
  int w = layer.width + 2 * pad, h = layer.height + 2 * pad;

  std::vector<float> a(static_cast<size_t>(w) * h, 0.0f);
  for (int y = 0; y < layer.height; ++y)
    for (int x = 0; x < layer.width; ++x)
      a[static_cast<size_t>(y + pad) * w + (x + pad)] = layer.alpha(x, y);
  if (spec.sigma > 0) gaussian_blur(a, w, h, spec.sigma);

  Layer shadow(layer.x0 - pad + static_cast<int>(std::lround(spec.dx)),
               layer.y0 - pad + static_cast<int>(std::lround(spec.dy)), w, h);
  double op = std::clamp(spec.opacity, 0.0, 1.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      uint8_t* d = shadow.at(x, y);
      d[0] = d[1] = d[2] = 0;  // shadows are black
      d[3] = to_u8(a[static_cast<size_t>(y) * w + x] * op);
    }
  merge_over(shadow, layer);  // text composites over its shadow
  return shadow;
}

Layer apply_emboss(const Layer& layer, const EmbossSpec& spec) {
  if (spec.strength <= 0 || layer.empty()) return layer;
  Layer out = layer;
  double gain = 128.0 * spec.strength;
  for (int y = 0; y < layer.height; ++y)
    for (int x = 0; x < layer.width; ++x) {
      auto alpha_at = [&](int xx, int yy) -> double {
        return layer.alpha(std::clamp(xx, 0, layer.width - 1),
                           std::clamp(yy, 0, layer.height - 1));
      };
      // Central differences of coverage; light from the top-left, so edges
      // facing up/left brighten and edges facing down/right darken.
      double gx = (alpha_at(x + 1, y) - alpha_at(x - 1, y)) / 510.0;
      double gy = (alpha_at(x, y + 1) - alpha_at(x, y - 1)) / 510.0;
      double lighting = gain * (gx + gy) * 0.7071067811865476;
      uint8_t* d = out.at(x, y);
      for (int c = 0; c < 3; ++c) d[c] = to_u8(d[c] + lighting);
    }
  return out;
}

Layer apply_style(const Layer& layer, const StyleSpec& style, Rng& rng) {
  Layer out = layer;
  if (style.elastic)
    out = elastic_deform(out, style.elastic->alpha, style.elastic->sigma, rng);
  if (style.perspective)
    out = perspective_warp(out, quad_from_fractions(out, *style.perspective));
  if (style.border) out = apply_border(out, *style.border);
  if (style.shadow) out = apply_shadow(out, *style.shadow);
  if (style.emboss) out = apply_emboss(out, *style.emboss);
  return out;
}

namespace {

Rgb parse_color(const std::string& item, int lineno) {
  std::istringstream is(item);
  int r, g, b;
  char c1, c2;
  if (!(is >> r >> c1 >> g >> c2 >> b) || c1 != ',' || c2 != ',' || r < 0 ||
      r > 255 || g < 0 || g > 255 || b < 0 || b > 255)
    throw IoError("colormap line " + std::to_string(lineno) + ": bad color '" +
                  item + "'");
  return {static_cast<uint8_t>(r), static_cast<uint8_t>(g), static_cast<uint8_t>(b)};
}

}  // namespace

ColorMap ColorMap::parse(const std::string& content) {
  ColorMap map;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw IoError("colormap line " + std::to_string(lineno) + ": missing ':'");
    ColorMapEntry entry;
    entry.bg_mean = parse_color(line.substr(0, colon), lineno);
    std::string rest = line.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t semi = rest.find(';', pos);
      if (semi == std::string::npos) semi = rest.size();
      std::string item = rest.substr(pos, semi - pos);
      if (item.find_first_not_of(" \t\r") != std::string::npos)
        entry.fg_candidates.push_back(parse_color(item, lineno));
      pos = semi + 1;
    }
    if (entry.fg_candidates.empty())
      throw IoError("colormap line " + std::to_string(lineno) + ": no candidates");
    map.entries_.push_back(std::move(entry));
  }
  return map;
}

ColorMap ColorMap::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("colormap: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ColorMapEntry& nearest_entry(const ColorMap& map, Rgb bg_mean) {
  if (map.empty()) throw InvalidArgument("nearest_entry: empty colormap");
  size_t best = 0;
  long best_d = -1;
  const auto& entries = map.entries();
  for (size_t i = 0; i < entries.size(); ++i) {
    long dr = static_cast<long>(entries[i].bg_mean.r) - bg_mean.r;
    long dg = static_cast<long>(entries[i].bg_mean.g) - bg_mean.g;
    long db = static_cast<long>(entries[i].bg_mean.b) - bg_mean.b;
    long d = dr * dr + dg * dg + db * db;
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return entries[best];
}

Rgb pick_color(const ColorMap& map, Rgb bg_mean, Rng& rng) {
  const auto& cands = nearest_entry(map, bg_mean).fg_candidates;
  return cands[rng.uniform_index(cands.size())];
}

StyleSpec sample_style(const EngineConfig& cfg, double base_size, Rgb fg, Rng& rng) {
  StyleSpec style;
  style.fg_color = fg;
  // Fixed draw order: elastic, perspective, border, shadow, emboss.
  if (rng.bernoulli(cfg.f64("effect.elastic_prob"))) {
    ElasticSpec e;
    e.alpha = rng.uniform(1.0, 3.0);
    e.sigma = rng.uniform(6.0, 10.0);
    style.elastic = e;
  }
  if (rng.bernoulli(cfg.f64("effect.perspective_prob"))) {
    PerspectiveSpec p;
    for (int i = 0; i < 4; ++i) p.dx[i] = rng.uniform(-0.15, 0.15);
    for (int i = 0; i < 4; ++i) p.dy[i] = rng.uniform(-0.15, 0.15);
    style.perspective = p;
  }
  if (rng.bernoulli(cfg.f64("effect.border_prob"))) {
    BorderSpec b;
    long max_w = std::max(1L, std::lround(base_size / 16.0));
    b.width = 1 + static_cast<int>(rng.uniform_index(static_cast<size_t>(max_w)));
    uint8_t px[3] = {fg.r, fg.g, fg.b};
    b.color = luminance(px) > 127 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
    style.border = b;
  }
  if (rng.bernoulli(cfg.f64("effect.shadow_prob"))) {
    ShadowSpec s;
    s.dx = rng.uniform(-0.12, 0.12) * base_size;
    s.dy = rng.uniform(0.04, 0.12) * base_size;
    s.sigma = rng.uniform(0.5, 2.0);
    s.opacity = rng.uniform(0.4, 0.8);
    style.shadow = s;
  }
  if (rng.bernoulli(cfg.f64("effect.emboss_prob"))) {
    EmbossSpec e;
    e.strength = rng.uniform(0.4, 1.2);
    style.emboss = e;
  }
  return style;
}

}  // namespace unionst
