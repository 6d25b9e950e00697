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

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "unionst/dataset_io.hpp"
#include "unionst/error.hpp"
#include "unionst/png_io.hpp"
#include "unionst/rng.hpp"

using namespace unionst;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ImageRgb sample_image(int index) {
  return ImageRgb(8, 6, {static_cast<uint8_t>(index * 31 % 256),
                         static_cast<uint8_t>(index * 7 % 256), 200});
}

TextSample label_of(const std::string& text) {
  TextSample s;
  s.text = text;
  return s;
}

SampleMeta meta_of(uint64_t index) {
  SampleMeta m;
  m.seed = mix_seed(1, index);
  m.font_id = static_cast<int>(index % 3);
  m.category = "common";
  m.size = 32;
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  REQUIRE(out.good());
}

}  // namespace

TEST_CASE("manifest round-trips and rejects malformed files") {
  std::string dir = testsup::scratch_dir("manifest");
  DatasetManifest m;
  m.count = 123;
  m.seed = 0xdeadbeef;
  m.config_hash = 0x0123456789abcdefULL;
  m.charset_hash = 0xfedcba9876543210ULL;
  m.packed = true;
  m.save(dir + "/manifest.json");
  DatasetManifest r = DatasetManifest::load(dir + "/manifest.json");
  CHECK(r.count == m.count);
  CHECK(r.seed == m.seed);
  CHECK(r.config_hash == m.config_hash);
  CHECK(r.charset_hash == m.charset_hash);
  CHECK(r.packed == m.packed);

  write_file(dir + "/bad.json", "{\"count\": 1}");
  CHECK_THROWS_AS(DatasetManifest::load(dir + "/bad.json"), IoError);
  CHECK_THROWS_AS(DatasetManifest::load(dir + "/missing.json"), IoError);
}

TEST_CASE("writer stores samples and labels in index order") {
  std::string dir = testsup::scratch_dir("ds_basic");
  std::string root = dir + "/ds";
  {
    DatasetWriter writer(root);
    CHECK(writer.write_sample(0, sample_image(0), label_of("alpha"), meta_of(0)) ==
          "00000000");
    writer.write_sample(1, sample_image(1), label_of("beta"), meta_of(1));
    writer.write_sample(2, sample_image(2), label_of("gamma"), meta_of(2));
    DatasetManifest m = writer.close(1, 2, 3);
    CHECK(m.count == 3);
    CHECK(m.seed == 1);
  }
  auto rows = read_labels(root + "/labels.tsv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first == "images/00000000.png");
  CHECK(rows[0].second == "alpha");
  CHECK(rows[2].second == "gamma");
  // Images decodable and matching what was written.
  ImageRgb img = read_png(root + "/images/00000001.png");
  CHECK(content_hash(img) == content_hash(sample_image(1)));
  // meta.tsv has one row per sample with 10 columns.
  std::string meta = slurp(root + "/meta.tsv");
  CHECK(std::count(meta.begin(), meta.end(), '\n') == 3);
  CHECK(std::count(meta.begin(), meta.end(), '\t') == 3 * 9);
  DatasetManifest m = DatasetManifest::load(root + "/manifest.json");
  CHECK(m.count == 3);
}

TEST_CASE("out-of-order commits produce the same bytes as in-order") {
  std::string dir = testsup::scratch_dir("ds_order");
  {
    DatasetWriter w(dir + "/in_order");
    for (uint64_t i = 0; i < 4; ++i)
      w.write_sample(i, sample_image(static_cast<int>(i)),
                     label_of("w" + std::to_string(i)), meta_of(i));
    w.close(7, 8, 9);
  }
  {
    DatasetWriter w(dir + "/shuffled");
    for (uint64_t i : {2, 0, 3, 1})
      w.write_sample(i, sample_image(static_cast<int>(i)),
                     label_of("w" + std::to_string(i)), meta_of(i));
    w.close(7, 8, 9);
  }
  CHECK(slurp(dir + "/in_order/labels.tsv") == slurp(dir + "/shuffled/labels.tsv"));
  CHECK(slurp(dir + "/in_order/meta.tsv") == slurp(dir + "/shuffled/meta.tsv"));
  CHECK(slurp(dir + "/in_order/manifest.json") == slurp(dir + "/shuffled/manifest.json"));
}

TEST_CASE("concurrent producers cannot perturb the output") {
  std::string dir = testsup::scratch_dir("ds_threads");
  const int n = 64;
  {
    DatasetWriter w(dir + "/serial");
    for (int i = 0; i < n; ++i)
      w.write_sample(i, sample_image(i), label_of("t" + std::to_string(i)), meta_of(i));
    w.close(1, 1, 1);
  }
  {
    DatasetWriter w(dir + "/parallel");
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
      threads.emplace_back([&w, t] {
        for (int i = t; i < n; i += 4)
          w.write_sample(i, sample_image(i), label_of("t" + std::to_string(i)),
                         meta_of(i));
      });
    for (auto& th : threads) th.join();
    w.close(1, 1, 1);
  }
  CHECK(slurp(dir + "/serial/labels.tsv") == slurp(dir + "/parallel/labels.tsv"));
  CHECK(slurp(dir + "/serial/meta.tsv") == slurp(dir + "/parallel/meta.tsv"));
}

TEST_CASE("labels with tabs and backslashes round-trip") {
  std::string dir = testsup::scratch_dir("ds_escape");
  std::string root = dir + "/ds";
  {
    DatasetWriter w(root);
    w.write_sample(0, sample_image(0), label_of("has\ttab"), meta_of(0));
    w.write_sample(1, sample_image(1), label_of("back\\slash"), meta_of(1));
    w.close(0, 0, 0);
  }
  // Escaped on disk: each row is still one line with exactly one raw tab.
  std::string raw = slurp(root + "/labels.tsv");
  CHECK(std::count(raw.begin(), raw.end(), '\n') == 2);
  std::istringstream lines(raw);
  std::string line;
  while (std::getline(lines, line))
    CHECK(std::count(line.begin(), line.end(), '\t') == 1);

  auto rows = read_labels(root + "/labels.tsv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].second == "has\ttab");
  CHECK(rows[1].second == "back\\slash");
}

TEST_CASE("writer rejects gaps, duplicates and reuse") {
  std::string dir = testsup::scratch_dir("ds_err");
  {
    DatasetWriter w(dir + "/gap");
    w.write_sample(0, sample_image(0), label_of("a"), meta_of(0));
    w.write_sample(2, sample_image(2), label_of("c"), meta_of(2));
    CHECK_THROWS_AS(w.close(0, 0, 0), GenerationError);
  }
  {
    DatasetWriter w(dir + "/dup");
    w.write_sample(0, sample_image(0), label_of("a"), meta_of(0));
    CHECK_THROWS_AS(w.write_sample(0, sample_image(0), label_of("a"), meta_of(0)),
                    IoError);
  }
  CHECK_THROWS_AS(DatasetWriter(dir + "/dup"), IoError);  // labels.tsv exists
}

TEST_CASE("packed mode stores recoverable records behind pack ids") {
  std::string dir = testsup::scratch_dir("ds_pack");
  std::string root = dir + "/ds";
  {
    DatasetWriter w(root, /*packed=*/true);
    for (uint64_t i = 0; i < 5; ++i)
      w.write_sample(i, sample_image(static_cast<int>(i) + 3),
                     label_of("p" + std::to_string(i)), meta_of(i));
    DatasetManifest m = w.close(4, 5, 6);
    CHECK(m.packed);
  }
  auto rows = read_labels(root + "/labels.tsv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].first == "pack:00000000");
  CHECK(rows[4].first == "pack:00000004");
  CHECK(!std::filesystem::exists(root + "/images"));

  PackReader reader(root);
  REQUIRE(reader.count() == 5);
  for (uint64_t i = 0; i < 5; ++i)
    CHECK(content_hash(reader.image(i)) ==
          content_hash(sample_image(static_cast<int>(i) + 3)));
  CHECK_THROWS_AS(reader.image(5), InvalidArgument);
  CHECK_THROWS_AS(PackReader(dir + "/nope"), IoError);
}

TEST_CASE("read_predictions parses, clamps and skips with warnings") {
  std::string dir = testsup::scratch_dir("preds");
  write_file(dir + "/ok.tsv",
             "img1\tstop\t0.97\n"
             "img2\tgo\t0.5\n"
             "img3\tfifty\t1\n");
  auto recs = read_predictions(dir + "/ok.tsv");
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].image_id == "img1");
  CHECK(recs[0].text == "stop");
  CHECK(recs[0].confidence == doctest::Approx(0.97));
  CHECK(recs[2].confidence == doctest::Approx(1.0));

  write_file(dir + "/messy.tsv",
             "img1\tstop\t1.2\n"        // clamped
             "img2\tmissing_conf\n"     // skipped: 2 fields
             "img3\tgo\tnot_a_number\n" // skipped: bad float
             "\n"                       // blank: ignored
             "img4\tok\t-0.5\n"         // clamped
             "img5\ttab\\there\t0.75\n");
  std::vector<std::string> warnings;
  auto messy = read_predictions(dir + "/messy.tsv", &warnings);
  REQUIRE(messy.size() == 3);
  CHECK(messy[0].confidence == 1.0);
  CHECK(messy[1].confidence == 0.0);
  CHECK(messy[2].text == "tab\there");
  CHECK(warnings.size() == 4);  // 2 clamps + 2 skips

  write_file(dir + "/empty.tsv", "");
  CHECK(read_predictions(dir + "/empty.tsv").empty());
  CHECK_THROWS_AS(read_predictions(dir + "/missing.tsv"), IoError);
}

TEST_CASE("predictions become a frequency-preserving pseudo corpus") {
  std::vector<PredictionRecord> recs = {
      {"i1", "stop", 0.99},
      {"i2", "stop", 0.8},
      {"i3", "", 0.9},
      {"i4", std::string(30, 'x'), 0.9},
      {"i5", "go", 0.7},
  };
  std::vector<std::string> warnings;
  auto corpus = predictions_to_corpus(recs, &warnings);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[0].text == "stop");
  CHECK(corpus[1].text == "stop");  // frequency preserved, no dedup
  CHECK(corpus[2].text == "go");
  for (const auto& s : corpus) CHECK(s.category == Category::Pseudo);
  CHECK(corpus[0].source_id == "i1");
  CHECK(warnings.size() == 2);  // empty + overlong

  // 25 codepoints is the inclusive limit; multibyte counts as one.
  std::vector<PredictionRecord> edge = {{"e1", std::string(25, 'a'), 0.5},
                                        {"e2", "caf\xc3\xa9", 0.5}};
  CHECK(predictions_to_corpus(edge).size() == 2);
}
