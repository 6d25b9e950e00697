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

#ifndef UNIONST_FONTCAT_HPP_
#define UNIONST_FONTCAT_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unionst/rng.hpp"
#include "unionst/truetype.hpp"

namespace unionst {

// One indexed font file. `supported` holds sorted, merged, inclusive
// codepoint ranges; `case_ok` is false only for fonts whose lowercase
// letters render indistinguishably from their capitals.
struct FontRecord {
  int id = 0;
  std::string path;
  std::string family;
  bool case_ok = true;
  std::vector<std::pair<uint32_t, uint32_t>> supported;

  bool supports_cp(char32_t cp) const;
};

// True iff the record covers every codepoint of `text` (vacuously true for
// empty text).
bool supports(const FontRecord& record, const std::u32string& text);

// Mean absolute alpha difference in [0, 1] between the two glyphs after
// rasterizing at `size` px and size-normalizing both tight boxes to a
// common comparison box. 0 = identical shapes.
double glyph_pair_difference(const Font& font, char32_t a, char32_t b, double size);

// Rasterizes each (X, x) letter pair at a 64 px em and compares the
// size-normalized shapes. Returns false when more than `max_coinciding`
// of the 26 pairs differ by less than `eps`. Throws PreconditionViolation
// if the font does not cover A-Z and a-z.
bool case_distinguishable(const Font& font, double eps = 0.02, int max_coinciding = 20);

// Per-directory indexing summary; `skipped` counts unparseable files.
struct IndexReport {
  size_t parsed = 0;
  size_t skipped = 0;
  std::vector<std::string> warnings;
};

// An immutable, queryable set of FontRecords with a lazy loaded-font cache.
// Thread-safe for concurrent queries once built.
class FontCatalog {
 public:
  FontCatalog() = default;

  // Scans `dir` (non-recursive then recursive subdirs, sorted paths) for
  // .ttf/.ttc/.otf files; ids follow sorted path order. Unparseable files
  // are skipped and reported. Throws IoError when `dir` is missing.
  static FontCatalog index_fonts(const std::string& dir, IndexReport* report = nullptr,
                                 double eps = 0.02, int max_coinciding = 20);

  // TSV persistence: `id \t path \t case_ok \t hex-ranges` (e.g. 41-5A,61-7A).
  static FontCatalog load_tsv(const std::string& path);
  void save_tsv(const std::string& path) const;

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<FontRecord>& records() const { return records_; }
  const FontRecord& record(int id) const;

  // Uniform choice among fonts that support `text` and pass the case
  // filter. Throws NoFontError when none is eligible.
  const FontRecord& select_font(const std::u32string& text, Rng& rng) const;

  // Lazily loads (and caches) the parsed font for a record.
  const Font& font(int id) const;

 private:
  // Cache lives behind a shared_ptr so the catalog itself stays movable;
  // copies share one cache, which is safe (loads are idempotent).
  struct Cache {
    std::mutex mu;
    std::unordered_map<int, std::shared_ptr<Font>> fonts;
  };

  std::vector<FontRecord> records_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace unionst

#endif  // UNIONST_FONTCAT_HPP_
