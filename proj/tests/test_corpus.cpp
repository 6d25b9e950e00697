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
#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "unionst/corpus.hpp"
#include "unionst/error.hpp"
#include "unionst/utf8.hpp"

using namespace unionst;

namespace {

std::set<std::string> texts_of(const std::vector<TextSample>& samples) {
  std::set<std::string> out;
  for (const auto& s : samples) out.insert(s.text);
  return out;
}

}  // namespace

TEST_CASE("case_transform enumerates variants and dedupes") {
  CHECK(texts_of(case_transform("Union")) ==
        std::set<std::string>{"Union", "union", "UNION"});
  CHECK(texts_of(case_transform("a")) == std::set<std::string>{"a", "A"});
  CHECK(texts_of(case_transform("MJ")) == std::set<std::string>{"MJ", "mj", "Mj"});
  CHECK_THROWS_AS(case_transform(""), InvalidArgument);

  // Variant idempotence: lowering an already-lower word returns it.
  auto lower = case_transform("stop");
  auto it = std::find_if(lower.begin(), lower.end(), [](const TextSample& s) {
    return s.case_variant == CaseVariant::Original;
  });
  REQUIRE(it != lower.end());
  CHECK(it->text == "stop");
  CHECK(ascii_lower("stop") == "stop");
  CHECK(ascii_lower("StOp") == "stop");
  CHECK(ascii_upper("StOp") == "STOP");
  // Non-ASCII passes through untouched.
  CHECK(ascii_lower("\xC3\x89") == "\xC3\x89");
}

TEST_CASE("gen_contextless draws uniformly from the charset") {
  Charset cs = Charset::engine_default();
  Rng rng(41);

  auto empty = gen_contextless(5, 0, cs, rng);
  CHECK(empty.empty());
  CHECK_THROWS_AS(gen_contextless(1, 1, cs, rng), InvalidArgument);
  CHECK_THROWS_AS(gen_contextless(26, 1, cs, rng), InvalidArgument);

  auto batch = gen_contextless(3, 10000, cs, rng);
  REQUIRE(batch.size() == 10000);
  // Character histogram within 3 sigma of the multinomial expectation.
  size_t counts[94] = {0};
  for (const auto& s : batch) {
    auto cps = utf8::decode(s.text);
    REQUIRE(cps.size() == 3);
    for (char32_t cp : cps) {
      auto idx = cs.index_of(cp);
      REQUIRE(idx.has_value());
      ++counts[*idx];
    }
  }
  double n = 30000.0, p = 1.0 / 94.0;
  double expect = n * p, sigma = std::sqrt(n * p * (1 - p));
  for (size_t c : counts) CHECK(std::abs(static_cast<double>(c) - expect) < 3 * sigma + 1);
}

TEST_CASE("contextless pool hits the documented 240K volume") {
  // 10K per length over lengths 2..25 = 240,000 with exact per-length
  // counts.
  Charset cs = Charset::engine_default();
  Rng rng(7);
  size_t total = 0;
  for (int len = 2; len <= 25; ++len) {
    auto batch = gen_contextless(len, 10000, cs, rng);
    REQUIRE(batch.size() == 10000);
    for (size_t i = 0; i < batch.size(); i += 997)
      CHECK(utf8::length(batch[i].text) == static_cast<size_t>(len));
    total += batch.size();
  }
  CHECK(total == 240000);
}

TEST_CASE("gen_incomplete deletes exactly one character at the mode position") {
  Rng rng(1);
  CHECK(gen_incomplete("word", DeletionMode::Initial, rng).text == "ord");
  CHECK(gen_incomplete("word", DeletionMode::Terminal, rng).text == "wor");
  CHECK(gen_incomplete("at", DeletionMode::Terminal, rng).text == "a");
  for (int i = 0; i < 50; ++i) {
    std::string internal = gen_incomplete("word", DeletionMode::Internal, rng).text;
    CHECK((internal == "wrd" || internal == "wod"));
  }
  CHECK_THROWS_AS(gen_incomplete("a", DeletionMode::Initial, rng), InvalidArgument);
  CHECK_THROWS_AS(gen_incomplete("at", DeletionMode::Internal, rng), InvalidArgument);
}

TEST_CASE("every incomplete sample is a single-deletion edit of its source") {
  // 10K-sweep property: output appears in the brute-force set of all
  // single deletions of the source, restricted to the mode's positions.
  Rng rng(77);
  const std::string words[] = {"alphabet", "synthesis", "zx", "curve", "blending"};
  for (int i = 0; i < 10000; ++i) {
    const std::string& w = words[i % 5];
    auto mode = static_cast<DeletionMode>(i % 3);
    if (mode == DeletionMode::Internal && utf8::length(w) < 3) mode = DeletionMode::Initial;
    TextSample s = gen_incomplete(w, mode, rng);
    auto src = utf8::decode(w);
    std::set<std::string> allowed;
    for (size_t d = 0; d < src.size(); ++d) {
      bool ok = (mode == DeletionMode::Initial && d == 0) ||
                (mode == DeletionMode::Terminal && d == src.size() - 1) ||
                (mode == DeletionMode::Internal && d > 0 && d < src.size() - 1);
      if (!ok) continue;
      auto copy = src;
      copy.erase(d, 1);
      allowed.insert(utf8::encode(copy));
    }
    CHECK(allowed.count(s.text) == 1);
    CHECK(utf8::length(s.text) == src.size() - 1);
    CHECK(s.source_id == w);
  }
}

TEST_CASE("gen_multiword_substrings returns verified substrings") {
  Rng rng(5);
  std::string source = "the quick fox jumps over a lazy dog";
  auto batch = gen_multiword_substrings(source, 5, 200, rng);
  CHECK(!batch.empty());
  for (const auto& s : batch) {
    CHECK(utf8::length(s.text) == 5);
    CHECK(source.find(s.text) != std::string::npos);
    CHECK(s.text.front() != ' ');
    CHECK(s.text.back() != ' ');
  }
  auto singles = gen_multiword_substrings(source, 1, 50, rng);
  for (const auto& s : singles) {
    CHECK(s.text.size() == 1);
    CHECK(s.text != " ");
    CHECK(source.find(s.text) != std::string::npos);
  }
  CHECK_THROWS_AS(gen_multiword_substrings("ab", 5, 1, rng), InvalidArgument);
}

TEST_CASE("sample_text follows category weights") {
  Charset cs = Charset::engine_default();
  CorpusSpec spec;
  spec.ctxless_per_len = 10;
  spec.ctxless_max = 5;
  spec.substr_per_len = 5;
  std::vector<std::string> words = {"alpha", "beta", "gamma"};
  std::vector<std::string> phrases = {"on sale", "no entry"};
  std::string source = "news of the day in brief";

  SUBCASE("single positive weight pins the category") {
    spec.w_common = 1;
    spec.w_contextless = 0;
    spec.w_incomplete = 0;
    spec.w_multiwords = 0;
    Corpus corpus = Corpus::build(spec, words, phrases, source, {}, cs, 1);
    Rng rng(2);
    for (int i = 0; i < 200; ++i)
      CHECK(corpus.sample_text(rng).category == Category::Common);
  }

  SUBCASE("two equal weights split 50/50 within 3 sigma") {
    spec.w_common = 1;
    spec.w_contextless = 1;
    spec.w_incomplete = 0;
    spec.w_multiwords = 0;
    Corpus corpus = Corpus::build(spec, words, phrases, source, {}, cs, 1);
    Rng rng(3);
    int common = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
      if (corpus.sample_text(rng).category == Category::Common) ++common;
    CHECK(std::abs(common - n / 2) < 3 * std::sqrt(n * 0.25) + 1);
  }

  SUBCASE("multiwords samples come from the multiwords pool") {
    spec.w_common = 0;
    spec.w_contextless = 0;
    spec.w_incomplete = 0;
    spec.w_multiwords = 1;
    Corpus corpus = Corpus::build(spec, words, phrases, source, {}, cs, 1);
    std::set<std::string> pool = texts_of(corpus.pool(Category::MultiWords));
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
      const TextSample& s = corpus.sample_text(rng);
      CHECK(s.category == Category::MultiWords);
      CHECK(pool.count(s.text) == 1);
    }
  }

  SUBCASE("all-zero weights are rejected") {
    spec.w_common = 0;
    spec.w_contextless = 0;
    spec.w_incomplete = 0;
    spec.w_multiwords = 0;
    Corpus corpus = Corpus::build(spec, words, phrases, source, {}, cs, 1);
    Rng rng(5);
    CHECK_THROWS_AS(corpus.sample_text(rng), InvalidArgument);
  }
}

TEST_CASE("corpus pools respect the length cap") {
  Charset cs = Charset::engine_default();
  CorpusSpec spec;
  spec.ctxless_per_len = 2;
  spec.ctxless_max = 4;
  spec.substr_per_len = 2;
  std::vector<std::string> words = {"ok", "averyveryverylongwordover25chars"};
  Corpus corpus = Corpus::build(spec, words, {}, "", {}, cs, 9);
  for (const auto& s : corpus.pool(Category::Common))
    CHECK(utf8::length(s.text) <= kMaxTextLen);
  // The oversized word is dropped entirely.
  for (const auto& s : corpus.pool(Category::Common)) CHECK(s.source_id != words[1]);
}

TEST_CASE("corpus_stats histograms and vocabulary") {
  auto r = corpus_stats(std::vector<std::string>{"a", "ab", "ab"});
  CHECK(r.length_hist == std::map<size_t, uint64_t>{{1, 1}, {2, 2}});
  CHECK(r.char_hist.at("a") == 3);
  CHECK(r.char_hist.at("b") == 2);

  auto v = corpus_stats(std::vector<std::string>{"a b", "b"});
  CHECK(v.vocabulary == std::set<std::string>{"a", "b"});

  // Conservation: sum of char histogram = total character count.
  std::vector<std::string> texts = {"one two", "three", "4 4 4"};
  auto c = corpus_stats(texts);
  uint64_t total = 0;
  for (const auto& [ch, n] : c.char_hist) total += n;
  uint64_t expect = 0;
  for (const auto& t : texts) expect += utf8::length(t);
  CHECK(total == expect);

  auto empty = corpus_stats(std::vector<std::string>{});
  CHECK(empty.length_hist.empty());
  CHECK(empty.vocabulary.empty());
}

TEST_CASE("stats report serializes to parseable json") {
  auto r = corpus_stats(std::vector<std::string>{"hi there", "hi"});
  auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["vocab_size"] == 2);
  CHECK(j["length_hist"]["2"] == 1);
  CHECK(j["length_hist"]["8"] == 1);
  CHECK(j["char_hist"]["h"] == 3);
}

TEST_CASE("vocab_overlap pairwise and identity") {
  OverlapCounts c = vocab_overlap({"x", "y"}, {"y", "z"});
  CHECK(c.ab == 1);
  CHECK(c.a_only == 1);
  CHECK(c.b_only == 1);

  std::set<std::string> s = {"p", "q", "r"};
  OverlapCounts id = vocab_overlap(s, s);
  CHECK(id.ab == 3);
  CHECK(id.a_only == 0);
  CHECK(id.b_only == 0);
}

TEST_CASE("vocab_overlap triple matches brute-force set arithmetic") {
  // Three pseudo-random 1K-word sets, compared region by region against
  // std::set operations.
  Rng rng(31337);
  auto make_set = [&] {
    std::set<std::string> s;
    while (s.size() < 1000) s.insert("w" + std::to_string(rng.uniform_index(2500)));
    return s;
  };
  auto a = make_set(), b = make_set(), c = make_set();
  TripleOverlapCounts t = vocab_overlap(a, b, c);

  size_t abc = 0, ab = 0, ac = 0, bc = 0, a_only = 0;
  for (const auto& w : a) {
    bool inb = b.count(w), inc = c.count(w);
    abc += inb && inc;
    ab += inb;
    ac += inc;
    a_only += !inb && !inc;
  }
  for (const auto& w : b) bc += c.count(w);
  CHECK(t.abc == abc);
  CHECK(t.ab() == ab);
  CHECK(t.ac() == ac);
  CHECK(t.bc() == bc);
  CHECK(t.a_only == a_only);
  // Inclusion-exclusion: |a u b u c| equals the sum of the seven regions.
  std::set<std::string> uni = a;
  uni.insert(b.begin(), b.end());
  uni.insert(c.begin(), c.end());
  CHECK(t.a_only + t.b_only + t.c_only + t.ab_only + t.ac_only + t.bc_only + t.abc ==
        uni.size());
}

TEST_CASE("load_lines strips CR and blank lines") {
  auto dir = testsup::scratch_dir("corpus_io");
  {
    std::ofstream out(dir + "/w.txt", std::ios::binary);
    out << "alpha\r\n\nbeta\ngamma";
  }
  auto lines = load_lines(dir + "/w.txt");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "alpha");
  CHECK(lines[1] == "beta");
  CHECK(lines[2] == "gamma");
  CHECK_THROWS_AS(load_lines(dir + "/nope.txt"), IoError);
}
