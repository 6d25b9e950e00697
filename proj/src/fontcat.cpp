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

#include "unionst/fontcat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "unionst/error.hpp"
#include "unionst/tsv.hpp"

namespace fs = std::filesystem;

namespace unionst {

bool FontRecord::supports_cp(char32_t cp) const {
  auto it = std::upper_bound(
      supported.begin(), supported.end(), static_cast<uint32_t>(cp),
      [](uint32_t v, const std::pair<uint32_t, uint32_t>& r) { return v < r.first; });
  if (it == supported.begin()) return false;
  --it;
  return cp >= it->first && cp <= it->second;
}

bool supports(const FontRecord& record, const std::u32string& text) {
  for (char32_t cp : text)
    if (!record.supports_cp(cp)) return false;
  return true;
}

namespace {

constexpr int kCompareBox = 32;  // size-normalized comparison raster
constexpr double kReferenceSize = 64.0;

// Bilinear resample of a tight sub-rectangle of a glyph's alpha into a
// fixed comparison box (float precision; no quantization artifacts).
std::vector<float> normalize_box(const GlyphRaster& g, int bx, int by, int bw, int bh) {
  std::vector<float> out(static_cast<size_t>(kCompareBox) * kCompareBox, 0.0f);
  if (bw <= 0 || bh <= 0) return out;
  for (int y = 0; y < kCompareBox; ++y) {
    double sy = (y + 0.5) * bh / kCompareBox - 0.5;
    int y0 = static_cast<int>(std::floor(sy));
    double fy = sy - y0;
    for (int x = 0; x < kCompareBox; ++x) {
      double sx = (x + 0.5) * bw / kCompareBox - 0.5;
      int x0 = static_cast<int>(std::floor(sx));
      double fx = sx - x0;
      auto at = [&](int yy, int xx) -> double {
        yy = std::clamp(yy, 0, bh - 1) + by;
        xx = std::clamp(xx, 0, bw - 1) + bx;
        return g.alpha[static_cast<size_t>(yy) * g.width + xx];
      };
      out[static_cast<size_t>(y) * kCompareBox + x] = static_cast<float>(
          at(y0, x0) * (1 - fx) * (1 - fy) + at(y0, x0 + 1) * fx * (1 - fy) +
          at(y0 + 1, x0) * (1 - fx) * fy + at(y0 + 1, x0 + 1) * fx * fy);
    }
  }
  return out;
}

std::vector<float> normalized_shape(const GlyphRaster& g) {
  int x0 = g.width, y0 = g.height, x1 = -1, y1 = -1;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      if (g.alpha[static_cast<size_t>(y) * g.width + x] > 0) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < x0) return {};  // blank glyph
  return normalize_box(g, x0, y0, x1 - x0 + 1, y1 - y0 + 1);
}

bool is_font_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".ttf" || ext == ".ttc" || ext == ".otf";
}

std::string hex_ranges(const std::vector<std::pair<uint32_t, uint32_t>>& ranges) {
  std::ostringstream os;
  os << std::hex << std::uppercase;
  for (size_t i = 0; i < ranges.size(); ++i) {
    if (i) os << ',';
    os << ranges[i].first << '-' << ranges[i].second;
  }
  return os.str();
}

std::vector<std::pair<uint32_t, uint32_t>> parse_hex_ranges(const std::string& s) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = s.substr(pos, comma - pos);
    size_t dash = item.find('-');
    if (dash == std::string::npos)
      throw IoError("catalog: malformed codepoint range: " + item);
    uint32_t lo = 0, hi = 0;
    auto r1 = std::from_chars(item.data(), item.data() + dash, lo, 16);
    auto r2 = std::from_chars(item.data() + dash + 1, item.data() + item.size(), hi, 16);
    if (r1.ec != std::errc() || r2.ec != std::errc() || lo > hi)
      throw IoError("catalog: malformed codepoint range: " + item);
    out.emplace_back(lo, hi);
    pos = comma + 1;
  }
  return out;
}

bool covers_letters(const Font& font) {
  for (char32_t c = U'A'; c <= U'Z'; ++c)
    if (!font.has_glyph(c) || !font.has_glyph(c + 32)) return false;
  return true;
}

}  // namespace

double glyph_pair_difference(const Font& font, char32_t a, char32_t b, double size) {
  GlyphRaster ga = font.rasterize(a, size, 0.0);
  GlyphRaster gb = font.rasterize(b, size, 0.0);
  std::vector<float> na = normalized_shape(ga);
  std::vector<float> nb = normalized_shape(gb);
  if (na.empty() && nb.empty()) return 0.0;
  if (na.empty() || nb.empty()) return 1.0;
  double sum = 0.0;
  for (size_t i = 0; i < na.size(); ++i) sum += std::abs(na[i] - nb[i]);
  return sum / (255.0 * na.size());
}

bool case_distinguishable(const Font& font, double eps, int max_coinciding) {
  if (!covers_letters(font))
    throw PreconditionViolation("case_distinguishable: font lacks full A-Z/a-z coverage");
  int coinciding = 0;
  for (char32_t c = U'A'; c <= U'Z'; ++c)
    if (glyph_pair_difference(font, c, c + 32, kReferenceSize) < eps) ++coinciding;
  return coinciding <= max_coinciding;
}

FontCatalog FontCatalog::index_fonts(const std::string& dir, IndexReport* report,
                                     double eps, int max_coinciding) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw IoError("index_fonts: not a directory: " + dir);

  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && is_font_file(entry.path()))
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());

  FontCatalog cat;
  IndexReport local;
  for (const std::string& p : paths) {
    try {
      Font font = Font::load(p);
      FontRecord rec;
      rec.id = static_cast<int>(cat.records_.size());
      rec.path = p;
      rec.family = font.family().empty() ? fs::path(p).stem().string() : font.family();
      rec.supported = font.coverage_ranges();
      if (rec.supported.empty()) throw InvalidArgument("font maps no codepoints");
      rec.case_ok = covers_letters(font) ? case_distinguishable(font, eps, max_coinciding)
                                         : true;
      cat.records_.push_back(std::move(rec));
      ++local.parsed;
    } catch (const InvalidArgument& e) {
      ++local.skipped;
      local.warnings.push_back(p + ": " + e.what());
    }
  }
  if (report) *report = std::move(local);
  return cat;
}

FontCatalog FontCatalog::load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("catalog: cannot open " + path);
  FontCatalog cat;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = tsv::split_fields(line);
    if (fields.size() != 4) throw IoError("catalog: expected 4 fields: " + line);
    FontRecord rec;
    rec.id = std::stoi(fields[0]);
    rec.path = tsv::unescape(fields[1]);
    rec.family = fs::path(rec.path).stem().string();
    if (fields[2] != "0" && fields[2] != "1")
      throw IoError("catalog: case_ok must be 0 or 1: " + line);
    rec.case_ok = fields[2] == "1";
    rec.supported = parse_hex_ranges(fields[3]);
    cat.records_.push_back(std::move(rec));
  }
  return cat;
}

void FontCatalog::save_tsv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("catalog: cannot write " + path);
  for (const FontRecord& rec : records_) {
    out << rec.id << '\t' << tsv::escape(rec.path) << '\t' << (rec.case_ok ? 1 : 0)
        << '\t' << hex_ranges(rec.supported) << '\n';
  }
  if (!out) throw IoError("catalog: write failed: " + path);
}

const FontRecord& FontCatalog::record(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= records_.size())
    throw InvalidArgument("catalog: record id out of range");
  return records_[static_cast<size_t>(id)];
}

const FontRecord& FontCatalog::select_font(const std::u32string& text, Rng& rng) const {
  std::vector<const FontRecord*> eligible;
  for (const FontRecord& rec : records_)
    if (rec.case_ok && supports(rec, text)) eligible.push_back(&rec);
  if (eligible.empty()) throw NoFontError("no font supports the requested text");
  return *eligible[rng.uniform_index(eligible.size())];
}

const Font& FontCatalog::font(int id) const {
  const FontRecord& rec = record(id);
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->fonts.find(id);
  if (it == cache_->fonts.end())
    it = cache_->fonts.emplace(id, std::make_shared<Font>(Font::load(rec.path))).first;
  return *it->second;
}

}  // namespace unionst
