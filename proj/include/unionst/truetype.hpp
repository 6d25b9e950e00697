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

#ifndef UNIONST_TRUETYPE_HPP_
#define UNIONST_TRUETYPE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "unionst/image.hpp"

namespace unionst {

// A rasterized glyph. The bitmap holds anti-aliased coverage; (offset_x,
// offset_y) position its top-left corner in device space (y down) relative
// to the glyph reference point, which is the midpoint of the advance on the
// baseline. Rotation happens about that reference point.
struct GlyphRaster {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> alpha;  // width * height coverage
  double offset_x = 0.0;
  double offset_y = 0.0;
  double advance = 0.0;  // unrotated advance width in device px

  bool empty() const { return width <= 0 || height <= 0; }
};

// Minimal TrueType (glyf-outline) font: enough of head/maxp/cmap/loca/glyf/
// hhea/hmtx to enumerate coverage and rasterize anti-aliased glyphs with an
// arbitrary rotation. CFF-outline OpenType files are rejected as
// unparseable. Immutable after load; all queries are const and thread-safe.
class Font {
 public:
  static Font load(const std::string& path);
  static Font from_memory(std::vector<uint8_t> data);

  int units_per_em() const { return units_per_em_; }
  // hhea ascender/descender as fractions of the em.
  double ascender() const;
  double descender() const;

  // 0 means "not mapped" (.notdef).
  uint32_t glyph_index(char32_t cp) const;
  bool has_glyph(char32_t cp) const { return glyph_index(cp) != 0; }

  // Mapped codepoints as sorted, merged inclusive ranges.
  std::vector<std::pair<uint32_t, uint32_t>> coverage_ranges() const;

  // Family name from the name table (empty when absent).
  const std::string& family() const { return family_; }

  // Advance width in device px at `size` px per em.
  double advance(char32_t cp, double size) const;

  // Anti-aliased coverage of `cp` at `size` px per em, rotated by `angle`
  // radians (mathematical convention: counterclockwise with y up; the
  // bitmap itself is y-down device space). Unmapped codepoints throw
  // InvalidArgument; whitespace yields an empty raster with an advance.
  GlyphRaster rasterize(char32_t cp, double size, double angle) const;

 private:
  Font() = default;
  void parse();
  uint32_t glyf_offset(uint32_t glyph, uint32_t* next) const;
  void decode_outline(uint32_t glyph, double xform[6], int depth,
                      std::vector<double>& lines) const;

  std::vector<uint8_t> data_;
  std::string family_;
  uint32_t head_ = 0, maxp_ = 0, cmap_ = 0, loca_ = 0, glyf_ = 0, hhea_ = 0, hmtx_ = 0;
  uint32_t cmap_sub_ = 0;  // selected cmap subtable offset
  uint16_t cmap_format_ = 0;
  int units_per_em_ = 0;
  int num_glyphs_ = 0;
  int num_hmetrics_ = 0;
  bool long_loca_ = false;
};

}  // namespace unionst

#endif  // UNIONST_TRUETYPE_HPP_
