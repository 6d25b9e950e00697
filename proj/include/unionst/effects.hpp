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

#ifndef UNIONST_EFFECTS_HPP_
#define UNIONST_EFFECTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "unionst/config.hpp"
#include "unionst/image.hpp"
#include "unionst/layout.hpp"
#include "unionst/rng.hpp"
#include "unionst/truetype.hpp"

namespace unionst {

struct BorderSpec {
  int width = 0;  // dilation radius in px; 0 = no border
  Rgb color;
};

struct ShadowSpec {
  double dx = 0, dy = 0;  // offset in px, device space (y down)
  double sigma = 0;       // Gaussian blur of the silhouette
  double opacity = 0;     // 0..1; 0 = no shadow
};

struct EmbossSpec {
  double strength = 0;  // relief lighting gain; 0 = no emboss
};

struct ElasticSpec {
  double alpha = 0;  // maximum displacement in px; 0 = identity
  double sigma = 8;  // smoothing of the displacement field
};

// Corner displacements as fractions of the layer box dimensions, order
// TL, TR, BR, BL. Displacement fractions must stay within +-0.35.
struct PerspectiveSpec {
  double dx[4] = {0, 0, 0, 0};
  double dy[4] = {0, 0, 0, 0};
};

// Full styling decision for one text layer.
struct StyleSpec {
  Rgb fg_color;
  std::optional<BorderSpec> border;
  std::optional<ShadowSpec> shadow;
  std::optional<EmbossSpec> emboss;
  std::optional<ElasticSpec> elastic;
  std::optional<PerspectiveSpec> perspective;
};

// Absolute destination corners of a warped layer rectangle, order
// TL, TR, BR, BL, in the layer's local pixel space.
struct QuadF {
  double x[4] = {0, 0, 0, 0};
  double y[4] = {0, 0, 0, 0};
};

// Rasterizes one character at placement size/orientation in `color`. The
// returned layer lives in device space (y down) with the glyph anchor (the
// mid-advance baseline point) at (placement.x, -placement.y) — layout
// coordinates are mathematical, device space flips y. Whitespace yields an
// empty layer. Unmapped codepoints throw NoGlyphError.
Layer render_char(const Font& font, char32_t ch, const CharPlacement& placement,
                  Rgb color);

// Renders every character of `text` per the layout and merges the per-char
// layers (later characters composite over earlier ones).
Layer render_text(const Font& font, const std::u32string& text,
                  const TextLayout& layout, Rgb color);

// Random smooth warp: two uniform noise fields are Gaussian-smoothed with
// `sigma`, jointly normalized so the largest displacement vector has length
// `alpha`, then applied by inverse bilinear warping. alpha = 0 returns the
// layer byte-identical. The canvas grows by ceil(alpha)+1 so no ink clips.
Layer elastic_deform(const Layer& layer, double alpha, double sigma, Rng& rng);

// Homography warp mapping the layer rectangle onto `corners`. Identity
// corners return the layer byte-identical; non-convex quads throw
// InvalidArgument.
Layer perspective_warp(const Layer& layer, const QuadF& corners);

QuadF quad_from_fractions(const Layer& layer, const PerspectiveSpec& spec);

// Each returns a new layer; zero-magnitude specs are bit-exact identities.
// Border: silhouette dilated by `width`, colored, under the glyph.
// Shadow: silhouette offset, blurred, opacity-scaled, under everything.
// Emboss: signed alpha-gradient relief lighting added to the colors.
Layer apply_border(const Layer& layer, const BorderSpec& spec);
Layer apply_shadow(const Layer& layer, const ShadowSpec& spec);
Layer apply_emboss(const Layer& layer, const EmbossSpec& spec);

// Applies the whole style in the fixed order: elastic, perspective,
// border, shadow, emboss — which stacks shadow under border under glyph.
Layer apply_style(const Layer& layer, const StyleSpec& style, Rng& rng);

// Background-mean -> foreground-color correspondence table.
struct ColorMapEntry {
  Rgb bg_mean;
  std::vector<Rgb> fg_candidates;
};

class ColorMap {
 public:
  // Text format, one entry per line: `bgR,bgG,bgB : fgR,fgG,fgB ; ...`.
  static ColorMap load(const std::string& path);
  static ColorMap parse(const std::string& content);

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<ColorMapEntry>& entries() const { return entries_; }

 private:
  std::vector<ColorMapEntry> entries_;
};

// Nearest entry by Euclidean RGB distance to `bg_mean` (ties: lowest
// index). Empty map throws InvalidArgument.
const ColorMapEntry& nearest_entry(const ColorMap& map, Rgb bg_mean);

// Nearest entry, then a uniform draw among its candidates.
Rgb pick_color(const ColorMap& map, Rgb bg_mean, Rng& rng);

// Draws effect presence and magnitudes from the config policy
// (effect.*_prob keys). The draw order is fixed: elastic, perspective,
// border, shadow, emboss. Border color contrasts with `fg` luminance.
StyleSpec sample_style(const EngineConfig& cfg, double base_size, Rgb fg, Rng& rng);

}  // namespace unionst

#endif  // UNIONST_EFFECTS_HPP_
