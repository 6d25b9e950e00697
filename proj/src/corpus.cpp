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

#include "unionst/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "unionst/error.hpp"
#include "unionst/utf8.hpp"

namespace unionst {

namespace {

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r';
}

char32_t lower_cp(char32_t cp) { return cp >= U'A' && cp <= U'Z' ? cp + 32 : cp; }
char32_t upper_cp(char32_t cp) { return cp >= U'a' && cp <= U'z' ? cp - 32 : cp; }

}  // namespace

const char* to_string(Category c) {
  switch (c) {
    case Category::Common: return "common";
    case Category::Contextless: return "contextless";
    case Category::Incomplete: return "incomplete";
    case Category::MultiWords: return "multiwords";
    case Category::Pseudo: return "pseudo";
  }
  return "?";
}

const char* to_string(CaseVariant v) {
  switch (v) {
    case CaseVariant::Original: return "original";
    case CaseVariant::Lower: return "lower";
    case CaseVariant::Upper: return "upper";
    case CaseVariant::Capitalized: return "capitalized";
  }
  return "?";
}

std::string ascii_lower(const std::string& s) {
  std::u32string cps = utf8::decode(s);
  for (auto& cp : cps) cp = lower_cp(cp);
  return utf8::encode(cps);
}

std::string ascii_upper(const std::string& s) {
  std::u32string cps = utf8::decode(s);
  for (auto& cp : cps) cp = upper_cp(cp);
  return utf8::encode(cps);
}

std::vector<TextSample> case_transform(const std::string& word) {
  if (word.empty()) throw InvalidArgument("case_transform: empty word");
  std::u32string cps = utf8::decode(word);
  std::u32string cap = cps;
  for (auto& cp : cap) cp = lower_cp(cp);
  cap[0] = upper_cp(cap[0]);

  const std::pair<std::string, CaseVariant> variants[] = {
      {word, CaseVariant::Original},
      {ascii_lower(word), CaseVariant::Lower},
      {ascii_upper(word), CaseVariant::Upper},
      {utf8::encode(cap), CaseVariant::Capitalized},
  };
  std::vector<TextSample> out;
  for (const auto& [text, variant] : variants) {
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const TextSample& s) { return s.text == text; });
    if (!dup) out.push_back({text, Category::Common, variant, word});
  }
  return out;
}

std::vector<TextSample> gen_contextless(int len, int count, const Charset& charset, Rng& rng) {
  if (len < 2 || len > static_cast<int>(kMaxTextLen))
    throw InvalidArgument("gen_contextless: length must be in [2, 25]");
  if (count < 0) throw InvalidArgument("gen_contextless: negative count");
  std::vector<TextSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::u32string cps(len, U' ');
    for (auto& cp : cps) cp = charset.at(rng.uniform_index(charset.size()));
    out.push_back({utf8::encode(cps), Category::Contextless, CaseVariant::Original, ""});
  }
  return out;
}

TextSample gen_incomplete(const std::string& word, DeletionMode mode, Rng& rng) {
  std::u32string cps = utf8::decode(word);
  if (cps.size() < 2) throw InvalidArgument("gen_incomplete: word shorter than 2 characters");
  size_t pos;
  switch (mode) {
    case DeletionMode::Initial: pos = 0; break;
    case DeletionMode::Terminal: pos = cps.size() - 1; break;
    case DeletionMode::Internal:
      if (cps.size() < 3)
        throw InvalidArgument("gen_incomplete: Internal mode needs length >= 3");
      pos = 1 + rng.uniform_index(cps.size() - 2);
      break;
    default: throw InvalidArgument("gen_incomplete: bad mode");
  }
  cps.erase(pos, 1);
  return {utf8::encode(cps), Category::Incomplete, CaseVariant::Original, word};
}

std::vector<TextSample> gen_multiword_substrings(const std::string& source_text, int len,
                                                 int count, Rng& rng) {
  if (len < 1 || len > static_cast<int>(kMaxTextLen))
    throw InvalidArgument("gen_multiword_substrings: length must be in [1, 25]");
  std::u32string cps = utf8::decode(source_text);
  if (cps.size() < static_cast<size_t>(len))
    throw InvalidArgument("gen_multiword_substrings: source shorter than requested length");
  std::vector<TextSample> out;
  out.reserve(count);
  size_t starts = cps.size() - len + 1;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      size_t s = rng.uniform_index(starts);
      if (is_space_cp(cps[s]) || is_space_cp(cps[s + len - 1])) continue;
      out.push_back({utf8::encode(cps.substr(s, len)), Category::MultiWords,
                     CaseVariant::Original, ""});
      break;
    }
  }
  return out;
}

CorpusSpec CorpusSpec::from_config(const EngineConfig& cfg) {
  CorpusSpec s;
  s.w_common = cfg.f64("corpus.w_common");
  s.w_contextless = cfg.f64("corpus.w_contextless");
  s.w_incomplete = cfg.f64("corpus.w_incomplete");
  s.w_multiwords = cfg.f64("corpus.w_multiwords");
  s.w_pseudo = cfg.f64("corpus.w_pseudo");
  s.ctxless_min = static_cast<int>(cfg.i64("corpus.ctxless_min"));
  s.ctxless_max = static_cast<int>(cfg.i64("corpus.ctxless_max"));
  s.ctxless_per_len = static_cast<int>(cfg.i64("corpus.ctxless_per_len"));
  s.substr_per_len = static_cast<int>(cfg.i64("corpus.substr_per_len"));
  if (s.ctxless_min < 2 || s.ctxless_max > 25 || s.ctxless_min > s.ctxless_max)
    throw ConfigError("corpus.ctxless range must lie within [2, 25]");
  return s;
}

double CorpusSpec::weight(Category c) const {
  switch (c) {
    case Category::Common: return w_common;
    case Category::Contextless: return w_contextless;
    case Category::Incomplete: return w_incomplete;
    case Category::MultiWords: return w_multiwords;
    case Category::Pseudo: return w_pseudo;
  }
  return 0.0;
}

Corpus Corpus::build(const CorpusSpec& spec, const std::vector<std::string>& words,
                     const std::vector<std::string>& phrases, const std::string& source_text,
                     const std::vector<TextSample>& pseudo, const Charset& charset,
                     uint64_t build_seed) {
  Corpus corpus;
  corpus.spec_ = spec;
  Rng rng(mix_seed(build_seed, 0x636f7270));  // corpus pool stream

  auto& common = corpus.pools_[static_cast<size_t>(Category::Common)];
  for (const auto& w : words) {
    if (w.empty() || utf8::length(w) > kMaxTextLen) continue;
    for (auto& s : case_transform(w)) common.push_back(std::move(s));
  }

  auto& ctxless = corpus.pools_[static_cast<size_t>(Category::Contextless)];
  for (int len = spec.ctxless_min; len <= spec.ctxless_max; ++len) {
    auto batch = gen_contextless(len, spec.ctxless_per_len, charset, rng);
    ctxless.insert(ctxless.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));
  }

  // One sample per word per feasible deletion mode.
  auto& incomplete = corpus.pools_[static_cast<size_t>(Category::Incomplete)];
  for (const auto& w : words) {
    size_t n = utf8::length(w);
    if (n < 2 || n > kMaxTextLen) continue;
    incomplete.push_back(gen_incomplete(w, DeletionMode::Initial, rng));
    incomplete.push_back(gen_incomplete(w, DeletionMode::Terminal, rng));
    if (n >= 3) incomplete.push_back(gen_incomplete(w, DeletionMode::Internal, rng));
  }
  // Drop deletions that became empty (2-char words reduce to 1 char, fine;
  // nothing shorter can enter above).

  auto& multi = corpus.pools_[static_cast<size_t>(Category::MultiWords)];
  for (const auto& p : phrases) {
    if (p.empty() || utf8::length(p) > kMaxTextLen) continue;
    multi.push_back({p, Category::MultiWords, CaseVariant::Original, ""});
  }
  if (!source_text.empty()) {
    size_t source_len = utf8::length(source_text);
    for (int len = 1; len <= static_cast<int>(kMaxTextLen); ++len) {
      if (source_len < static_cast<size_t>(len)) break;
      auto batch = gen_multiword_substrings(source_text, len, spec.substr_per_len, rng);
      multi.insert(multi.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));
    }
  }

  auto& ps = corpus.pools_[static_cast<size_t>(Category::Pseudo)];
  for (const auto& s : pseudo) {
    if (s.text.empty() || utf8::length(s.text) > kMaxTextLen) continue;
    ps.push_back(s);
  }
  return corpus;
}

const TextSample& Corpus::sample_text(Rng& rng) const {
  constexpr Category kAll[] = {Category::Common, Category::Contextless, Category::Incomplete,
                               Category::MultiWords, Category::Pseudo};
  double total = 0.0;
  for (Category c : kAll) {
    if (!pool(c).empty()) total += std::max(0.0, spec_.weight(c));
  }
  if (total <= 0.0)
    throw InvalidArgument("sample_text: no non-empty category has positive weight");
  double draw = rng.uniform() * total;
  const std::vector<TextSample>* chosen = nullptr;
  for (Category c : kAll) {
    double w = std::max(0.0, spec_.weight(c));
    if (pool(c).empty() || w <= 0.0) continue;
    chosen = &pool(c);  // rounding fallback: last positive-weight pool
    if (draw < w) break;
    draw -= w;
  }
  return (*chosen)[rng.uniform_index(chosen->size())];
}

size_t Corpus::total_size() const {
  size_t n = 0;
  for (const auto& p : pools_) n += p.size();
  return n;
}

StatsReport corpus_stats(const std::vector<std::string>& texts) {
  StatsReport report;
  for (const auto& text : texts) {
    std::u32string cps = utf8::decode(text);
    ++report.length_hist[cps.size()];
    for (char32_t cp : cps) {
      std::string key;
      utf8::append(key, cp);
      ++report.char_hist[key];
    }
    std::string token;
    auto flush = [&] {
      if (!token.empty()) {
        report.vocabulary.insert(token);
        token.clear();
      }
    };
    for (char32_t cp : cps) {
      if (is_space_cp(cp)) {
        flush();
      } else {
        utf8::append(token, cp);
      }
    }
    flush();
  }
  return report;
}

StatsReport corpus_stats(const std::vector<TextSample>& samples) {
  std::vector<std::string> texts;
  texts.reserve(samples.size());
  for (const auto& s : samples) texts.push_back(s.text);
  return corpus_stats(texts);
}

std::string StatsReport::to_json() const {
  std::ostringstream out;
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      switch (c) {
        case '"': q += "\\\""; break;
        case '\\': q += "\\\\"; break;
        case '\n': q += "\\n"; break;
        case '\t': q += "\\t"; break;
        case '\r': q += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            q += buf;
          } else {
            q.push_back(c);
          }
      }
    }
    return q + "\"";
  };
  out << "{\"length_hist\": {";
  bool first = true;
  for (const auto& [len, n] : length_hist) {
    if (!first) out << ", ";
    first = false;
    out << "\"" << len << "\": " << n;
  }
  out << "}, \"char_hist\": {";
  first = true;
  for (const auto& [ch, n] : char_hist) {
    if (!first) out << ", ";
    first = false;
    out << quote(ch) << ": " << n;
  }
  out << "}, \"vocab_size\": " << vocabulary.size() << "}";
  return out.str();
}

OverlapCounts vocab_overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  OverlapCounts counts;
  for (const auto& w : a) {
    if (b.count(w)) {
      ++counts.ab;
    } else {
      ++counts.a_only;
    }
  }
  counts.b_only = b.size() - counts.ab;
  return counts;
}

TripleOverlapCounts vocab_overlap(const std::set<std::string>& a,
                                  const std::set<std::string>& b,
                                  const std::set<std::string>& c) {
  TripleOverlapCounts counts;
  std::set<std::string> all;
  all.insert(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  all.insert(c.begin(), c.end());
  for (const auto& w : all) {
    int mask = (a.count(w) ? 1 : 0) | (b.count(w) ? 2 : 0) | (c.count(w) ? 4 : 0);
    switch (mask) {
      case 1: ++counts.a_only; break;
      case 2: ++counts.b_only; break;
      case 3: ++counts.ab_only; break;
      case 4: ++counts.c_only; break;
      case 5: ++counts.ac_only; break;
      case 6: ++counts.bc_only; break;
      case 7: ++counts.abc; break;
      default: break;
    }
  }
  return counts;
}

std::vector<std::string> load_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string collapse_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_gap = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_gap = !out.empty();
      continue;
    }
    if (pending_gap) out.push_back(' ');
    pending_gap = false;
    out.push_back(ch);
  }
  return out;
}

}  // namespace unionst
