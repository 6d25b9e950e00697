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

#include "unionst/truetype.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "unionst/error.hpp"
#include "unionst/utf8.hpp"

namespace unionst {

namespace {

// Affine [a b c d e f]: (x, y) -> (a*x + c*y + e, b*x + d*y + f).
void compose_affine(const double parent[6], const double child[6], double out[6]) {
  out[0] = parent[0] * child[0] + parent[2] * child[1];
  out[1] = parent[1] * child[0] + parent[3] * child[1];
  out[2] = parent[0] * child[2] + parent[2] * child[3];
  out[3] = parent[1] * child[2] + parent[3] * child[3];
  out[4] = parent[0] * child[4] + parent[2] * child[5] + parent[4];
  out[5] = parent[1] * child[4] + parent[3] * child[5] + parent[5];
}

struct Pt {
  double x, y;
};

Pt apply(const double t[6], double x, double y) {
  return {t[0] * x + t[2] * y + t[4], t[1] * x + t[3] * y + t[5]};
}

void emit_line(std::vector<double>& lines, Pt a, Pt b) {
  lines.push_back(a.x);
  lines.push_back(a.y);
  lines.push_back(b.x);
  lines.push_back(b.y);
}

// Flattens a quadratic by midpoint subdivision until the control point is
// within ~0.3 px of the chord midpoint (max deviation ~0.15 px).
void flatten_quad(std::vector<double>& lines, Pt p0, Pt c, Pt p1, int depth) {
  double mx = 0.5 * (p0.x + p1.x), my = 0.5 * (p0.y + p1.y);
  if (depth >= 10 ||
      (std::abs(c.x - mx) <= 0.3 && std::abs(c.y - my) <= 0.3)) {
    emit_line(lines, p0, p1);
    return;
  }
  Pt q0{0.5 * (p0.x + c.x), 0.5 * (p0.y + c.y)};
  Pt q1{0.5 * (c.x + p1.x), 0.5 * (c.y + p1.y)};
  Pt m{0.5 * (q0.x + q1.x), 0.5 * (q0.y + q1.y)};
  flatten_quad(lines, p0, q0, m, depth + 1);
  flatten_quad(lines, m, q1, p1, depth + 1);
}

// Signed scanline-cell accumulation (cover = dy per cell, area = dy
// weighted by distance to the cell's right edge); pixel coverage is
// |running cover + area| integrated left to right per row.
struct CellRaster {
  int w = 0, h = 0;
  std::vector<double> area, cover;

  CellRaster(int w_, int h_) : w(w_), h(h_) {
    area.assign(static_cast<size_t>(w) * h, 0.0);
    cover.assign(static_cast<size_t>(w) * h, 0.0);
  }

  void span_in_row(int row, double xs, double xe, double dy) {
    if (row < 0 || row >= h) return;
    size_t base = static_cast<size_t>(row) * w;
    if (xs > xe) std::swap(xs, xe);
    int c0 = std::clamp(static_cast<int>(std::floor(xs)), 0, w - 1);
    int c1 = std::clamp(static_cast<int>(std::floor(xe)), 0, w - 1);
    if (c0 == c1) {
      double xavg = 0.5 * (xs + xe) - c0;
      area[base + c0] += (1.0 - xavg) * dy;
      cover[base + c0] += dy;
      return;
    }
    double span = xe - xs;
    for (int col = c0; col <= c1; ++col) {
      double xa = std::max(xs, static_cast<double>(col));
      double xb = std::min(xe, static_cast<double>(col + 1));
      if (xb <= xa) continue;
      double sub = dy * (xb - xa) / span;
      double xavg = 0.5 * (xa + xb) - col;
      area[base + col] += (1.0 - xavg) * sub;
      cover[base + col] += sub;
    }
  }

  void add_line(double x0, double y0, double x1, double y1) {
    if (y0 == y1) return;
    double sign = 1.0;
    if (y0 > y1) {
      std::swap(x0, x1);
      std::swap(y0, y1);
      sign = -1.0;
    }
    double dxdy = (x1 - x0) / (y1 - y0);
    int r0 = static_cast<int>(std::floor(y0));
    int r1 = static_cast<int>(std::ceil(y1)) - 1;
    for (int row = r0; row <= r1; ++row) {
      double ys = std::max(y0, static_cast<double>(row));
      double ye = std::min(y1, static_cast<double>(row + 1));
      if (ye <= ys) continue;
      double xs = x0 + (ys - y0) * dxdy;
      double xe = x0 + (ye - y0) * dxdy;
      span_in_row(row, xs, xe, (ye - ys) * sign);
    }
  }

  void integrate(std::vector<uint8_t>& out) const {
    out.assign(static_cast<size_t>(w) * h, 0);
    for (int row = 0; row < h; ++row) {
      size_t base = static_cast<size_t>(row) * w;
      double acc = 0.0;
      for (int col = 0; col < w; ++col) {
        double v = std::min(1.0, std::abs(acc + area[base + col]));
        out[base + col] = static_cast<uint8_t>(v * 255.0 + 0.5);
        acc += cover[base + col];
      }
    }
  }
};

}  // namespace

// ---- byte readers -----------------------------------------------------

namespace {

uint8_t getu8(const std::vector<uint8_t>& d, uint32_t off) {
  if (off >= d.size()) throw InvalidArgument("font parse: read past end");
  return d[off];
}

uint16_t getu16(const std::vector<uint8_t>& d, uint32_t off) {
  if (off + 2 > d.size()) throw InvalidArgument("font parse: read past end");
  return static_cast<uint16_t>(d[off] << 8 | d[off + 1]);
}

int16_t geti16(const std::vector<uint8_t>& d, uint32_t off) {
  return static_cast<int16_t>(getu16(d, off));
}

uint32_t getu32(const std::vector<uint8_t>& d, uint32_t off) {
  if (off + 4 > d.size()) throw InvalidArgument("font parse: read past end");
  return static_cast<uint32_t>(d[off]) << 24 | static_cast<uint32_t>(d[off + 1]) << 16 |
         static_cast<uint32_t>(d[off + 2]) << 8 | d[off + 3];
}

}  // namespace

Font Font::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open font: " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  return from_memory(std::move(data));
}

Font Font::from_memory(std::vector<uint8_t> data) {
  Font font;
  font.data_ = std::move(data);
  font.parse();
  return font;
}

void Font::parse() {
  const auto& d = data_;
  uint32_t base = 0;
  uint32_t name_table = 0;
  uint32_t magic = getu32(d, 0);
  if (magic == 0x74746366) {  // 'ttcf': collection, take the first face
    if (getu32(d, 8) == 0) throw InvalidArgument("font parse: empty collection");
    base = getu32(d, 12);
    magic = getu32(d, base);
  }
  if (magic == 0x4F54544F)  // 'OTTO': CFF outlines
    throw InvalidArgument("font parse: CFF outlines not supported");
  if (magic != 0x00010000 && magic != 0x74727565)
    throw InvalidArgument("font parse: not a TrueType file");

  uint16_t num_tables = getu16(d, base + 4);
  for (uint16_t i = 0; i < num_tables; ++i) {
    uint32_t rec = base + 12 + 16u * i;
    uint32_t tag = getu32(d, rec);
    uint32_t off = getu32(d, rec + 8);
    switch (tag) {
      case 0x68656164: head_ = off; break;  // head
      case 0x6D617870: maxp_ = off; break;  // maxp
      case 0x636D6170: cmap_ = off; break;  // cmap
      case 0x6C6F6361: loca_ = off; break;  // loca
      case 0x676C7966: glyf_ = off; break;  // glyf
      case 0x68686561: hhea_ = off; break;  // hhea
      case 0x686D7478: hmtx_ = off; break;  // hmtx
      case 0x6E616D65: name_table = off; break;  // name
      default: break;
    }
  }
  if (!head_ || !maxp_ || !cmap_ || !loca_ || !glyf_ || !hhea_ || !hmtx_)
    throw InvalidArgument("font parse: required table missing");

  units_per_em_ = getu16(d, head_ + 18);
  if (units_per_em_ <= 0) throw InvalidArgument("font parse: bad unitsPerEm");
  long_loca_ = geti16(d, head_ + 50) != 0;
  num_glyphs_ = getu16(d, maxp_ + 4);
  num_hmetrics_ = getu16(d, hhea_ + 34);
  if (num_hmetrics_ <= 0) throw InvalidArgument("font parse: no horizontal metrics");

  // Pick the best cmap subtable: prefer format 12 (full Unicode), then 4.
  uint16_t n_sub = getu16(d, cmap_ + 2);
  int best_score = 0;
  for (uint16_t i = 0; i < n_sub; ++i) {
    uint32_t rec = cmap_ + 4 + 8u * i;
    uint16_t platform = getu16(d, rec);
    uint32_t sub = cmap_ + getu32(d, rec + 4);
    if (sub + 2 > d.size()) continue;
    uint16_t format = getu16(d, sub);
    int score = 0;
    if (format == 12) score = 4;
    else if (format == 4) score = 2;
    else continue;
    if (platform == 3 || platform == 0) ++score;  // Windows/Unicode tables first
    if (score > best_score) {
      best_score = score;
      cmap_sub_ = sub;
      cmap_format_ = format;
    }
  }
  if (!cmap_sub_) throw InvalidArgument("font parse: no usable cmap subtable");

  // Family name (name table id 1), preferring the Windows UTF-16 record.
  if (name_table) {
    try {
      uint16_t count = getu16(d, name_table + 2);
      uint32_t strings = name_table + getu16(d, name_table + 4);
      int best = -1;
      bool best_wide = false;
      for (uint16_t i = 0; i < count; ++i) {
        uint32_t rec = name_table + 6 + 12u * i;
        uint16_t platform = getu16(d, rec);
        uint16_t name_id = getu16(d, rec + 6);
        if (name_id != 1) continue;
        bool wide = platform == 3 || platform == 0;
        if (best < 0 || (wide && !best_wide)) {
          best = i;
          best_wide = wide;
        }
      }
      if (best >= 0) {
        uint32_t rec = name_table + 6 + 12u * best;
        uint16_t len = getu16(d, rec + 8);
        uint32_t off = strings + getu16(d, rec + 10);
        std::string fam;
        if (best_wide) {
          for (uint32_t i = 0; i + 1 < len; i += 2) {
            char32_t cp = getu16(d, off + i);
            if (cp >= 0xD800 && cp <= 0xDFFF) continue;  // skip surrogates
            utf8::append(fam, cp);
          }
        } else {
          for (uint32_t i = 0; i < len; ++i) fam.push_back(static_cast<char>(getu8(d, off + i)));
        }
        family_ = fam;
      }
    } catch (const InvalidArgument&) {
      family_.clear();  // malformed name table is not fatal
    }
  }
}

double Font::ascender() const {
  return static_cast<double>(geti16(data_, hhea_ + 4)) / units_per_em_;
}

double Font::descender() const {
  return static_cast<double>(geti16(data_, hhea_ + 6)) / units_per_em_;
}

uint32_t Font::glyph_index(char32_t cp) const {
  const auto& d = data_;
  if (cmap_format_ == 4) {
    if (cp > 0xFFFF) return 0;
    uint32_t seg_x2 = getu16(d, cmap_sub_ + 6);
    uint32_t end_codes = cmap_sub_ + 14;
    uint32_t start_codes = end_codes + seg_x2 + 2;
    uint32_t deltas = start_codes + seg_x2;
    uint32_t range_offsets = deltas + seg_x2;
    // Binary search for the first segment with endCode >= cp.
    uint32_t lo = 0, hi = seg_x2 / 2;
    while (lo < hi) {
      uint32_t mid = (lo + hi) / 2;
      if (getu16(d, end_codes + 2 * mid) < cp) lo = mid + 1;
      else hi = mid;
    }
    if (lo >= seg_x2 / 2) return 0;
    uint16_t start = getu16(d, start_codes + 2 * lo);
    if (cp < start) return 0;
    int16_t delta = geti16(d, deltas + 2 * lo);
    uint16_t range_off = getu16(d, range_offsets + 2 * lo);
    if (range_off == 0) return static_cast<uint16_t>(cp + delta);
    uint32_t addr = range_offsets + 2 * lo + range_off + 2 * (cp - start);
    uint16_t g = getu16(d, addr);
    return g == 0 ? 0 : static_cast<uint16_t>(g + delta);
  }
  // format 12
  uint32_t n_groups = getu32(d, cmap_sub_ + 12);
  uint32_t lo = 0, hi = n_groups;
  while (lo < hi) {
    uint32_t mid = (lo + hi) / 2;
    uint32_t grp = cmap_sub_ + 16 + 12 * mid;
    if (getu32(d, grp + 4) < cp) lo = mid + 1;
    else hi = mid;
  }
  if (lo >= n_groups) return 0;
  uint32_t grp = cmap_sub_ + 16 + 12 * lo;
  uint32_t start = getu32(d, grp);
  if (cp < start) return 0;
  return getu32(d, grp + 8) + (cp - start);
}

std::vector<std::pair<uint32_t, uint32_t>> Font::coverage_ranges() const {
  const auto& d = data_;
  std::vector<std::pair<uint32_t, uint32_t>> ranges;
  auto push_cp = [&](uint32_t cp) {
    if (!ranges.empty() && ranges.back().second + 1 == cp) {
      ranges.back().second = cp;
    } else {
      ranges.emplace_back(cp, cp);
    }
  };
  if (cmap_format_ == 4) {
    uint32_t seg_count = getu16(d, cmap_sub_ + 6) / 2;
    uint32_t end_codes = cmap_sub_ + 14;
    uint32_t start_codes = end_codes + 2 * seg_count + 2;
    for (uint32_t s = 0; s < seg_count; ++s) {
      uint32_t start = getu16(d, start_codes + 2 * s);
      uint32_t end = getu16(d, end_codes + 2 * s);
      if (start == 0xFFFF) continue;  // sentinel segment
      // Range-offset segments can hold zero glyph ids, so verify per code.
      for (uint32_t cp = start; cp <= end && cp != 0xFFFF; ++cp)
        if (glyph_index(cp) != 0) push_cp(cp);
    }
  } else {
    uint32_t n_groups = getu32(d, cmap_sub_ + 12);
    for (uint32_t g = 0; g < n_groups; ++g) {
      uint32_t grp = cmap_sub_ + 16 + 12 * g;
      uint32_t start = getu32(d, grp);
      uint32_t end = getu32(d, grp + 4);
      uint32_t gid0 = getu32(d, grp + 8);
      if (gid0 == 0) {
        if (start == end) continue;
        ++start;  // only the first code maps to .notdef
      }
      if (!ranges.empty() && ranges.back().second + 1 >= start) {
        ranges.back().second = std::max(ranges.back().second, end);
      } else {
        ranges.emplace_back(start, end);
      }
    }
  }
  return ranges;
}

double Font::advance(char32_t cp, double size) const {
  uint32_t gid = glyph_index(cp);
  uint32_t idx = std::min<uint32_t>(gid, num_hmetrics_ - 1);
  uint16_t adv = getu16(data_, hmtx_ + 4 * idx);
  return static_cast<double>(adv) * size / units_per_em_;
}

uint32_t Font::glyf_offset(uint32_t glyph, uint32_t* next) const {
  if (glyph >= static_cast<uint32_t>(num_glyphs_))
    throw InvalidArgument("font parse: glyph id out of range");
  uint32_t off, nxt;
  if (long_loca_) {
    off = getu32(data_, loca_ + 4 * glyph);
    nxt = getu32(data_, loca_ + 4 * glyph + 4);
  } else {
    off = 2u * getu16(data_, loca_ + 2 * glyph);
    nxt = 2u * getu16(data_, loca_ + 2 * glyph + 2);
  }
  if (next) *next = nxt;
  return off;
}

void Font::decode_outline(uint32_t glyph, double xform[6], int depth,
                          std::vector<double>& lines) const {
  if (depth > 5) return;  // malformed recursive composite
  const auto& d = data_;
  uint32_t next = 0;
  uint32_t off = glyf_offset(glyph, &next);
  if (off == next) return;  // empty glyph (e.g. space)
  uint32_t g = glyf_ + off;
  int16_t n_contours = geti16(d, g);
  g += 10;  // skip bbox

  if (n_contours >= 0) {
    // Simple glyph.
    std::vector<uint16_t> end_pts(n_contours);
    for (int i = 0; i < n_contours; ++i) end_pts[i] = getu16(d, g + 2 * i);
    g += 2 * n_contours;
    uint32_t n_pts = n_contours ? end_pts.back() + 1u : 0;
    uint16_t n_ins = getu16(d, g);
    g += 2 + n_ins;

    std::vector<uint8_t> flags;
    flags.reserve(n_pts);
    while (flags.size() < n_pts) {
      uint8_t f = getu8(d, g++);
      flags.push_back(f);
      if (f & 0x08) {  // REPEAT
        uint8_t reps = getu8(d, g++);
        while (reps-- && flags.size() < n_pts) flags.push_back(f);
      }
    }

    std::vector<Pt> pts(n_pts);
    int32_t v = 0;
    for (uint32_t i = 0; i < n_pts; ++i) {
      uint8_t f = flags[i];
      if (f & 0x02) {  // X_SHORT
        uint8_t dx = getu8(d, g++);
        v += (f & 0x10) ? dx : -dx;
      } else if (!(f & 0x10)) {
        v += geti16(d, g);
        g += 2;
      }
      pts[i].x = v;
    }
    v = 0;
    for (uint32_t i = 0; i < n_pts; ++i) {
      uint8_t f = flags[i];
      if (f & 0x04) {  // Y_SHORT
        uint8_t dy = getu8(d, g++);
        v += (f & 0x20) ? dy : -dy;
      } else if (!(f & 0x20)) {
        v += geti16(d, g);
        g += 2;
      }
      pts[i].y = v;
    }
    for (auto& p : pts) p = apply(xform, p.x, p.y);

    uint32_t first = 0;
    for (int c = 0; c < n_contours; ++c) {
      uint32_t last = end_pts[c];
      uint32_t count = last - first + 1;
      if (count < 2) {
        first = last + 1;
        continue;
      }
      auto on = [&](uint32_t i) { return (flags[first + i % count] & 0x01) != 0; };
      auto pt = [&](uint32_t i) { return pts[first + i % count]; };

      // Find a starting on-curve point (or synthesize the midpoint).
      Pt start;
      uint32_t begin = 0;
      if (on(0)) {
        start = pt(0);
        begin = 1;
      } else if (on(count - 1)) {
        start = pt(count - 1);
        begin = 0;
      } else {
        start = {0.5 * (pt(0).x + pt(count - 1).x), 0.5 * (pt(0).y + pt(count - 1).y)};
        begin = 0;
      }
      Pt cur = start;
      bool have_ctrl = false;
      Pt ctrl{0, 0};
      for (uint32_t k = 0; k < count; ++k) {
        uint32_t i = begin + k;
        Pt p = pt(i);
        if (on(i)) {
          if (have_ctrl) {
            flatten_quad(lines, cur, ctrl, p, 0);
            have_ctrl = false;
          } else {
            emit_line(lines, cur, p);
          }
          cur = p;
        } else {
          if (have_ctrl) {
            Pt mid{0.5 * (ctrl.x + p.x), 0.5 * (ctrl.y + p.y)};
            flatten_quad(lines, cur, ctrl, mid, 0);
            cur = mid;
          }
          ctrl = p;
          have_ctrl = true;
        }
      }
      if (have_ctrl) {
        flatten_quad(lines, cur, ctrl, start, 0);
      } else if (cur.x != start.x || cur.y != start.y) {
        emit_line(lines, cur, start);
      }
      first = last + 1;
    }
    return;
  }

  // Composite glyph.
  bool more = true;
  while (more) {
    uint16_t flags = getu16(d, g);
    uint16_t child = getu16(d, g + 2);
    g += 4;
    more = (flags & 0x0020) != 0;
    double dx = 0, dy = 0;
    bool xy_args = (flags & 0x0002) != 0;
    if (flags & 0x0001) {  // words
      if (xy_args) {
        dx = geti16(d, g);
        dy = geti16(d, g + 2);
      }
      g += 4;
    } else {
      if (xy_args) {
        dx = static_cast<int8_t>(getu8(d, g));
        dy = static_cast<int8_t>(getu8(d, g + 1));
      }
      g += 2;
    }
    double local[6] = {1, 0, 0, 1, dx, dy};
    auto f2dot14 = [&](uint32_t o) { return geti16(d, o) / 16384.0; };
    if (flags & 0x0008) {  // uniform scale
      local[0] = local[3] = f2dot14(g);
      g += 2;
    } else if (flags & 0x0040) {  // x and y scale
      local[0] = f2dot14(g);
      local[3] = f2dot14(g + 2);
      g += 4;
    } else if (flags & 0x0080) {  // 2x2
      local[0] = f2dot14(g);
      local[1] = f2dot14(g + 2);
      local[2] = f2dot14(g + 4);
      local[3] = f2dot14(g + 6);
      g += 8;
    }
    if (!xy_args) continue;  // point-matching components are not supported
    double combined[6];
    compose_affine(xform, local, combined);
    decode_outline(child, combined, depth + 1, lines);
  }
}

GlyphRaster Font::rasterize(char32_t cp, double size, double angle) const {
  if (size <= 0.0) throw InvalidArgument("rasterize: size must be positive");
  uint32_t gid = glyph_index(cp);
  if (gid == 0) throw InvalidArgument("rasterize: codepoint not mapped by font");

  double scale = size / units_per_em_;
  GlyphRaster out;
  out.advance = advance(cp, size);
  double ref_x = 0.5 * out.advance / scale;  // font units

  // Font units (y up) -> device px (y down), rotated by `angle` about the
  // reference point (mid-advance on the baseline).
  double ca = std::cos(angle), sa = std::sin(angle);
  double xf[6] = {ca * scale, -sa * scale, -sa * scale, -ca * scale,
                  -ca * scale * ref_x, sa * scale * ref_x};

  std::vector<double> lines;
  decode_outline(gid, xf, 0, lines);
  if (lines.empty()) return out;  // blank glyph (whitespace)

  double minx = lines[0], maxx = lines[0], miny = lines[1], maxy = lines[1];
  for (size_t i = 0; i < lines.size(); i += 2) {
    minx = std::min(minx, lines[i]);
    maxx = std::max(maxx, lines[i]);
    miny = std::min(miny, lines[i + 1]);
    maxy = std::max(maxy, lines[i + 1]);
  }
  int x0 = static_cast<int>(std::floor(minx)) - 1;
  int y0 = static_cast<int>(std::floor(miny)) - 1;
  int w = static_cast<int>(std::ceil(maxx)) + 1 - x0;
  int h = static_cast<int>(std::ceil(maxy)) + 1 - y0;
  if (w <= 0 || h <= 0 || w > 8192 || h > 8192)
    throw InvalidArgument("rasterize: degenerate glyph raster");

  CellRaster raster(w, h);
  for (size_t i = 0; i + 3 < lines.size(); i += 4)
    raster.add_line(lines[i] - x0, lines[i + 1] - y0, lines[i + 2] - x0, lines[i + 3] - y0);

  out.width = w;
  out.height = h;
  out.offset_x = x0;
  out.offset_y = y0;
  raster.integrate(out.alpha);
  return out;
}

}  // namespace unionst
