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

#ifndef UNIONST_CORPUS_HPP_
#define UNIONST_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "unionst/charset.hpp"
#include "unionst/config.hpp"
#include "unionst/rng.hpp"

namespace unionst {

// Text provenance families. Pseudo holds recognizer predictions ingested
// as generation text.
enum class Category { Common, Contextless, Incomplete, MultiWords, Pseudo };

enum class CaseVariant { Original, Lower, Upper, Capitalized };

enum class DeletionMode { Initial, Terminal, Internal };

const char* to_string(Category c);
const char* to_string(CaseVariant v);

// Maximum label length in codepoints, engine-wide.
inline constexpr size_t kMaxTextLen = 25;

struct TextSample {
  std::string text;  // UTF-8, 1..25 codepoints
  Category category = Category::Common;
  CaseVariant case_variant = CaseVariant::Original;
  std::string source_id;  // origin word or image id; empty if none
};

// ASCII-only case mapping; non-ASCII codepoints pass through unchanged so
// results never depend on locale.
std::string ascii_lower(const std::string& s);
std::string ascii_upper(const std::string& s);

// Original / lower / upper / capitalized variants of a word, deduplicated
// by string equality (first occurrence wins, in that variant order).
std::vector<TextSample> case_transform(const std::string& word);

// `count` random strings of exactly `len` characters drawn uniformly
// i.i.d. from the charset. len must be in [2, 25].
std::vector<TextSample> gen_contextless(int len, int count, const Charset& charset, Rng& rng);

// Deletes one character: the first (Initial), the last (Terminal), or a
// uniformly chosen strictly-interior one (Internal, length >= 3 required).
TextSample gen_incomplete(const std::string& word, DeletionMode mode, Rng& rng);

// `count` contiguous substrings of exactly `len` characters whose first and
// last characters are not whitespace. Each draw retries up to 16 times on a
// whitespace boundary, then is skipped, so fewer than `count` results are
// possible on whitespace-dense sources.
std::vector<TextSample> gen_multiword_substrings(const std::string& source_text, int len,
                                                 int count, Rng& rng);

// Sampling weights and pool quotas.
struct CorpusSpec {
  double w_common = 1.0;
  double w_contextless = 0.3;
  double w_incomplete = 0.2;
  double w_multiwords = 0.5;
  double w_pseudo = 0.0;
  int ctxless_min = 2;
  int ctxless_max = 25;
  int ctxless_per_len = 400;
  int substr_per_len = 200;

  static CorpusSpec from_config(const EngineConfig& cfg);
  double weight(Category c) const;
};

// Immutable per-category sample pools, built once up front. Sampling uses
// caller-supplied streams, so concurrent read-only sampling is safe.
class Corpus {
 public:
  // words: the Common word list (also the Incomplete source). phrases and
  // source_text feed MultiWords; pseudo feeds the Pseudo pool. Entries
  // longer than 25 codepoints are dropped.
  static Corpus build(const CorpusSpec& spec, const std::vector<std::string>& words,
                      const std::vector<std::string>& phrases, const std::string& source_text,
                      const std::vector<TextSample>& pseudo, const Charset& charset,
                      uint64_t build_seed);

  // Category chosen by spec weights restricted to non-empty pools, then a
  // uniform draw from that pool. Throws InvalidArgument when every
  // weighted pool is empty.
  const TextSample& sample_text(Rng& rng) const;

  const std::vector<TextSample>& pool(Category c) const {
    return pools_[static_cast<size_t>(c)];
  }
  const CorpusSpec& spec() const { return spec_; }
  size_t total_size() const;

 private:
  CorpusSpec spec_;
  std::array<std::vector<TextSample>, 5> pools_;
};

struct StatsReport {
  std::map<size_t, uint64_t> length_hist;     // codepoint length -> count
  std::map<std::string, uint64_t> char_hist;  // UTF-8 char -> count
  std::set<std::string> vocabulary;           // unique whitespace-split tokens

  // {"length_hist": {...}, "char_hist": {...}, "vocab_size": N}
  std::string to_json() const;
};

StatsReport corpus_stats(const std::vector<std::string>& texts);
StatsReport corpus_stats(const std::vector<TextSample>& samples);

struct OverlapCounts {
  size_t ab = 0;      // |a intersect b|
  size_t a_only = 0;  // |a minus b|
  size_t b_only = 0;  // |b minus a|
};

// The seven Venn regions of three sets.
struct TripleOverlapCounts {
  size_t a_only = 0, b_only = 0, c_only = 0;
  size_t ab_only = 0, ac_only = 0, bc_only = 0;
  size_t abc = 0;

  size_t ab() const { return ab_only + abc; }
  size_t ac() const { return ac_only + abc; }
  size_t bc() const { return bc_only + abc; }
};

OverlapCounts vocab_overlap(const std::set<std::string>& a, const std::set<std::string>& b);
TripleOverlapCounts vocab_overlap(const std::set<std::string>& a,
                                  const std::set<std::string>& b,
                                  const std::set<std::string>& c);

// Newline-delimited UTF-8 loader; strips CR, drops empty lines.
std::vector<std::string> load_lines(const std::string& path);
// Whole file as one string.
std::string load_text(const std::string& path);
// Folds every whitespace run (spaces, tabs, newlines) into one space and
// trims the ends, so substrings taken from the result stay single-line.
std::string collapse_whitespace(const std::string& text);

}  // namespace unionst

#endif  // UNIONST_CORPUS_HPP_
