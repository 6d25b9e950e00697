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

#include "unionst/selfevolve.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "unionst/error.hpp"
#include "unionst/tsv.hpp"
#include "unionst/utf8.hpp"

namespace unionst {

namespace {

bool in_vocab(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9');
}

char32_t lower_ascii(char32_t c) {
  return (c >= U'A' && c <= U'Z') ? c + 32 : c;
}

void write_prediction_rows(const std::string& path,
                           const std::vector<PredictionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write selection file: " + path);
  for (const PredictionRecord& r : records)
    out << tsv::escape(r.image_id) << '\t' << tsv::escape(r.text) << '\t'
        << r.confidence << '\n';
  if (!out) throw IoError("selection file write failed: " + path);
}

constexpr char32_t kVocab[] = U"abcdefghijklmnopqrstuvwxyz0123456789";
constexpr size_t kVocabSize = 36;

}  // namespace

std::string normalize_label(const std::string& text) {
  std::u32string cps = utf8::decode(text);
  std::u32string kept;
  kept.reserve(cps.size());
  for (char32_t c : cps) {
    char32_t l = lower_ascii(c);
    if (in_vocab(l)) kept.push_back(l);
  }
  return utf8::encode(kept);
}

double word_accuracy(const std::vector<std::pair<std::string, std::string>>& gt,
                     const std::vector<std::pair<std::string, std::string>>& pred) {
  if (gt.size() != pred.size())
    throw InvalidArgument("word_accuracy: list sizes differ (" +
                          std::to_string(gt.size()) + " vs " +
                          std::to_string(pred.size()) + ")");
  if (gt.empty()) return 1.0;
  auto sorted_by_id = [](std::vector<std::pair<std::string, std::string>> v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  };
  auto g = sorted_by_id(gt);
  auto p = sorted_by_id(pred);
  size_t correct = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].first != p[i].first)
      throw InvalidArgument("word_accuracy: id mismatch at '" + g[i].first + "' vs '" +
                            p[i].first + "'");
    if (normalize_label(g[i].second) == normalize_label(p[i].second)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(g.size());
}

std::pair<std::vector<PredictionRecord>, std::vector<PredictionRecord>>
select_by_threshold(const std::vector<PredictionRecord>& records, double tau) {
  if (tau < 0 || tau > 1)
    throw InvalidArgument("select_by_threshold: tau outside [0, 1]");
  std::vector<PredictionRecord> selected, residue;
  for (const PredictionRecord& r : records)
    (r.confidence >= tau ? selected : residue).push_back(r);
  return {std::move(selected), std::move(residue)};
}

std::vector<PredictionRecord> select_top_k(const std::vector<PredictionRecord>& records,
                                           size_t k) {
  std::vector<PredictionRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.image_id < b.image_id;
  });
  if (k < sorted.size()) sorted.resize(k);
  return sorted;
}

void IsrState::save(const std::string& path) const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["round"] = round;
  j["tau"] = tau;
  j["universe_ids"] = universe_ids;
  j["selected_ids"] = selected_ids;
  j["residue_ids"] = residue_ids;
  j["sources"] = sources;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write state: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("state write failed: " + path);
}

IsrState IsrState::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read state: " + path);
  try {
    nlohmann::json j;
    in >> j;
    IsrState s;
    s.round = j.at("round").get<int>();
    s.tau = j.at("tau").get<double>();
    s.universe_ids = j.at("universe_ids").get<std::vector<std::string>>();
    s.selected_ids = j.at("selected_ids").get<std::vector<std::vector<std::string>>>();
    s.residue_ids = j.at("residue_ids").get<std::vector<std::string>>();
    s.sources = j.at("sources").get<std::vector<std::string>>();
    return s;
  } catch (const std::exception& e) {
    throw IoError("malformed state " + path + ": " + e.what());
  }
}

IsrState isr_round(const IsrState& state, const std::string& predictions_path,
                   const std::string& out_dir) {
  std::vector<PredictionRecord> records = read_predictions(predictions_path);

  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.image_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw UniverseError("duplicate image id in " + predictions_path);

  IsrState next = state;
  if (state.round == 0 && state.universe_ids.empty()) {
    next.universe_ids = ids;
  } else if (ids != state.universe_ids) {
    throw UniverseError("predictions in " + predictions_path +
                        " do not cover the round-1 universe (" +
                        std::to_string(ids.size()) + " ids vs " +
                        std::to_string(state.universe_ids.size()) + ")");
  }

  auto [selected, residue] = select_by_threshold(records, state.tau);
  next.round = state.round + 1;
  std::vector<std::string> selected_sorted;
  selected_sorted.reserve(selected.size());
  for (const auto& r : selected) selected_sorted.push_back(r.image_id);
  std::sort(selected_sorted.begin(), selected_sorted.end());
  next.selected_ids.push_back(std::move(selected_sorted));
  next.sources.push_back(predictions_path);

  // Re-selection happens from scratch each round; the annotation residue is
  // what no round has ever picked up.
  next.residue_ids = residue_for_annotation(next);

  std::vector<PredictionRecord> residue_records;
  for (const auto& r : records)
    if (std::binary_search(next.residue_ids.begin(), next.residue_ids.end(),
                           r.image_id))
      residue_records.push_back(r);

  std::string t = std::to_string(next.round);
  write_prediction_rows(out_dir + "/round_" + t + ".tsv", selected);
  write_prediction_rows(out_dir + "/residue_" + t + ".tsv", residue_records);
  return next;
}

std::vector<std::string> residue_for_annotation(const IsrState& state) {
  if (state.round < 1 || state.selected_ids.empty())
    throw PreconditionViolation("residue_for_annotation: no completed round");
  std::vector<std::string> ever;
  for (const auto& round_ids : state.selected_ids)
    ever.insert(ever.end(), round_ids.begin(), round_ids.end());
  std::sort(ever.begin(), ever.end());
  ever.erase(std::unique(ever.begin(), ever.end()), ever.end());

  std::vector<std::string> residue;
  std::set_difference(state.universe_ids.begin(), state.universe_ids.end(),
                      ever.begin(), ever.end(), std::back_inserter(residue));
  return residue;
}

std::vector<PredictionRecord> mock_oracle_recognize(
    const std::vector<std::pair<std::string, std::string>>& labeled, double error_rate,
    double rho, Rng& rng) {
  if (error_rate < 0 || error_rate > 1)
    throw InvalidArgument("mock oracle: error_rate outside [0, 1]");
  if (rho < 0 || rho > 1) throw InvalidArgument("mock oracle: rho outside [0, 1]");

  std::vector<PredictionRecord> out;
  out.reserve(labeled.size());
  for (const auto& [id, gt] : labeled) {
    bool corrupt = rng.bernoulli(error_rate);
    std::string text = gt;
    if (corrupt && !gt.empty()) {
      // One substitution guaranteed to survive normalization: the new
      // character is in-vocabulary and differs from the original's
      // lowercase form.
      std::u32string cps = utf8::decode(gt);
      size_t pos = rng.uniform_index(cps.size());
      char32_t orig = lower_ascii(cps[pos]);
      char32_t repl;
      do {
        repl = kVocab[rng.uniform_index(kVocabSize)];
      } while (repl == orig);
      cps[pos] = repl;
      text = utf8::encode(cps);
    }
    bool correct = text == gt;
    double u = rng.uniform(0.0, 1.0);
    double conf = (1.0 - rho) * u + rho * (correct ? 0.95 : 0.3);
    out.push_back({id, text, std::clamp(conf, 0.0, 1.0)});
  }
  return out;
}

}  // namespace unionst
