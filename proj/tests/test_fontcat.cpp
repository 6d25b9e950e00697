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

// Pair-difference bounds below were cross-checked against an independent
// rasterizer (FreeType via Pillow) using the same normalize-and-compare
// procedure; assertions keep wide margins around those values.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "test_support.hpp"
#include "unionst/error.hpp"
#include "unionst/fontcat.hpp"

using namespace unionst;

namespace {

FontRecord abc_record() {
  FontRecord rec;
  rec.id = 0;
  rec.supported = {{0x61, 0x63}};  // a-c
  return rec;
}

}  // namespace

TEST_CASE("supports checks every codepoint against the ranges") {
  FontRecord rec = abc_record();
  CHECK(supports(rec, U"abc"));
  CHECK(supports(rec, U"cba"));
  CHECK(!supports(rec, U"abd"));
  CHECK(supports(rec, U""));  // vacuous
  rec.supported = {{0x41, 0x5A}, {0x61, 0x7A}};
  CHECK(rec.supports_cp(U'A'));
  CHECK(rec.supports_cp(U'Z'));
  CHECK(rec.supports_cp(U'a'));
  CHECK(!rec.supports_cp(U'['));  // 0x5B, between the ranges
  CHECK(!rec.supports_cp(U'0'));
  CHECK(!rec.supports_cp(char32_t(0x10000)));
}

TEST_CASE("glyph pair difference separates shapes") {
  Font sans = Font::load(testsup::data_path("fonts/DejaVuSans.ttf"));
  // Same-letter pairs are identical.
  CHECK(glyph_pair_difference(sans, U'A', U'A', 64.0) == doctest::Approx(0.0));
  // Optically-similar case pair: distinct but close (oracle: C/c ~ 0.08).
  double cc = glyph_pair_difference(sans, U'C', U'c', 64.0);
  CHECK(cc > 0.02);
  CHECK(cc < 0.18);
  // Structurally different pairs are far apart (oracle: A/a ~ 0.50, L/l ~ 0.68).
  CHECK(glyph_pair_difference(sans, U'A', U'a', 64.0) > 0.3);
  CHECK(glyph_pair_difference(sans, U'L', U'l', 64.0) > 0.45);
  // Symmetric in argument order.
  CHECK(glyph_pair_difference(sans, U'G', U'g', 64.0) ==
        doctest::Approx(glyph_pair_difference(sans, U'g', U'G', 64.0)));
}

TEST_CASE("case filter accepts a regular font and rejects small caps") {
  Font sans = Font::load(testsup::data_path("fonts/DejaVuSans.ttf"));
  CHECK(case_distinguishable(sans));
  // At the default threshold no DejaVu pair coincides at all; the decision
  // is stable across reference sizes.
  for (double size : {32.0, 64.0, 128.0}) {
    int coinciding = 0;
    for (char32_t c = U'A'; c <= U'Z'; ++c)
      if (glyph_pair_difference(sans, c, c + 32, size) < 0.02) ++coinciding;
    CHECK(coinciding == 0);
  }

  Font caps = Font::load(testsup::data_path("testfonts/smallcaps.ttf"));
  CHECK(!case_distinguishable(caps));
  for (char32_t c : {U'A', U'M', U'Q'})
    CHECK(glyph_pair_difference(caps, c, c + 32, 64.0) == doctest::Approx(0.0));

  Font digits = Font::load(testsup::data_path("testfonts/digits.ttf"));
  CHECK_THROWS_AS(case_distinguishable(digits), PreconditionViolation);
}

TEST_CASE("index_fonts walks the directory deterministically") {
  IndexReport report;
  FontCatalog cat = FontCatalog::index_fonts(testsup::data_path("fonts"), &report);
  CHECK(cat.size() == 10);
  CHECK(report.parsed == 10);
  CHECK(report.skipped == 0);
  for (size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat.records()[i].id == static_cast<int>(i));
    CHECK(cat.records()[i].case_ok);
    CHECK(!cat.records()[i].supported.empty());
    if (i > 0) CHECK(cat.records()[i - 1].path < cat.records()[i].path);
  }
  // DejaVu family names come from the name table.
  CHECK(cat.records()[0].family.substr(0, 6) == "DejaVu");

  // Re-indexing produces an identical catalog.
  FontCatalog again = FontCatalog::index_fonts(testsup::data_path("fonts"));
  REQUIRE(again.size() == cat.size());
  for (size_t i = 0; i < cat.size(); ++i) {
    CHECK(again.records()[i].path == cat.records()[i].path);
    CHECK(again.records()[i].supported == cat.records()[i].supported);
    CHECK(again.records()[i].case_ok == cat.records()[i].case_ok);
  }
}

TEST_CASE("index_fonts skips corrupt files with a warning") {
  IndexReport report;
  FontCatalog cat = FontCatalog::index_fonts(testsup::data_path("testfonts"), &report);
  // digits.ttf, pair.ttc, smallcaps.ttf parse; corrupt.ttf is skipped;
  // notfont.txt is not a font extension and is never considered.
  CHECK(cat.size() == 3);
  CHECK(report.parsed == 3);
  CHECK(report.skipped == 1);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("corrupt.ttf") != std::string::npos);

  bool saw_smallcaps = false, saw_digits = false;
  for (const auto& rec : cat.records()) {
    if (rec.path.find("smallcaps") != std::string::npos) {
      saw_smallcaps = true;
      CHECK(!rec.case_ok);  // the filter rejects it
    }
    if (rec.path.find("digits.ttf") != std::string::npos) {
      saw_digits = true;
      CHECK(rec.case_ok);  // no letter coverage: filter does not apply
    }
  }
  CHECK(saw_smallcaps);
  CHECK(saw_digits);
}

TEST_CASE("index_fonts handles empty and missing directories") {
  auto dir = testsup::scratch_dir("fontcat_empty");
  FontCatalog cat = FontCatalog::index_fonts(dir);
  CHECK(cat.empty());
  CHECK_THROWS_AS(FontCatalog::index_fonts(dir + "/missing"), IoError);
}

TEST_CASE("catalog persists to tsv and loads back identically") {
  FontCatalog cat = FontCatalog::index_fonts(testsup::data_path("testfonts"));
  auto dir = testsup::scratch_dir("fontcat_tsv");
  std::string path = dir + "/catalog.tsv";
  cat.save_tsv(path);

  FontCatalog loaded = FontCatalog::load_tsv(path);
  REQUIRE(loaded.size() == cat.size());
  for (size_t i = 0; i < cat.size(); ++i) {
    CHECK(loaded.records()[i].id == cat.records()[i].id);
    CHECK(loaded.records()[i].path == cat.records()[i].path);
    CHECK(loaded.records()[i].case_ok == cat.records()[i].case_ok);
    CHECK(loaded.records()[i].supported == cat.records()[i].supported);
  }
  // The format is the documented 4-column TSV with hex ranges.
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(std::count(first.begin(), first.end(), '\t') == 3);
  CHECK(first.find("30-39") != std::string::npos);  // digits range

  CHECK_THROWS_AS(FontCatalog::load_tsv(dir + "/nope.tsv"), IoError);
  {
    std::ofstream bad(dir + "/bad.tsv");
    bad << "0\tx.ttf\t1\tzz-qq\n";
  }
  CHECK_THROWS_AS(FontCatalog::load_tsv(dir + "/bad.tsv"), IoError);
}

TEST_CASE("select_font draws uniformly among eligible fonts") {
  FontCatalog cat = FontCatalog::index_fonts(testsup::data_path("testfonts"));
  Rng rng(11);

  // "409": smallcaps fails the case filter, so only digits.ttf and
  // pair.ttc (whose first face is the digits subset) are eligible.
  std::set<std::string> seen;
  int digits_count = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const FontRecord& rec = cat.select_font(U"409", rng);
    CHECK(supports(rec, U"409"));
    CHECK(rec.case_ok);
    seen.insert(rec.path);
    if (rec.path.find("digits.ttf") != std::string::npos) ++digits_count;
  }
  CHECK(seen.size() == 2);
  CHECK(std::abs(digits_count - n / 2) < 3 * std::sqrt(n * 0.25) + 1);

  // Lowercase text: only smallcaps covers letters, but its case_ok=false.
  CHECK_THROWS_AS(cat.select_font(U"abc", rng), NoFontError);
  CHECK_THROWS_AS(cat.select_font(U"Ф", rng), NoFontError);

  FontCatalog empty;
  CHECK_THROWS_AS(empty.select_font(U"1", rng), NoFontError);
}

TEST_CASE("loaded fonts are cached per record") {
  FontCatalog cat = FontCatalog::index_fonts(testsup::data_path("fonts"));
  const Font& a = cat.font(0);
  const Font& b = cat.font(0);
  CHECK(&a == &b);
  CHECK(a.units_per_em() == 2048);
  CHECK_THROWS_AS(cat.font(999), InvalidArgument);
}
