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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "unionst/error.hpp"
#include "unionst/selfevolve.hpp"

using namespace unionst;

namespace {

PredictionRecord rec(const std::string& id, const std::string& text, double conf) {
  return {id, text, conf};
}

std::set<std::string> ids_of(const std::vector<PredictionRecord>& records) {
  std::set<std::string> s;
  for (const auto& r : records) s.insert(r.image_id);
  return s;
}

void write_preds(const std::string& path, const std::vector<PredictionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& r : records)
    out << r.image_id << '\t' << r.text << '\t' << r.confidence << '\n';
  REQUIRE(out.good());
}

}  // namespace

TEST_CASE("normalize_label lowercases and strips non-vocabulary characters") {
  CHECK(normalize_label("Hello!") == "hello");
  CHECK(normalize_label("A B-1") == "ab1");
  CHECK(normalize_label("") == "");
  CHECK(normalize_label("STOP") == "stop");
  CHECK(normalize_label("caf\xc3\xa9") == "caf");   // é is outside the 36 symbols
  CHECK(normalize_label("  42nd St.  ") == "42ndst");
  CHECK(normalize_label("!@#$%") == "");
}

TEST_CASE("word_accuracy compares normalized labels aligned by id") {
  using Pairs = std::vector<std::pair<std::string, std::string>>;
  Pairs gt = {{"a", "Stop!"}, {"b", "go"}, {"c", "Main-St"}, {"d", "42"}};
  Pairs same = gt;
  CHECK(word_accuracy(gt, same) == 1.0);

  Pairs pred = {{"a", "stop"}, {"b", "go"}, {"c", "mainst"}, {"d", "43"}};
  CHECK(word_accuracy(gt, pred) == doctest::Approx(0.75));

  // Alignment is by id, not position.
  Pairs shuffled = {{"d", "42"}, {"a", "stop"}, {"c", "MAINST"}, {"b", "go"}};
  CHECK(word_accuracy(gt, shuffled) == 1.0);

  Pairs short_list = {{"a", "stop"}};
  CHECK_THROWS_AS(word_accuracy(gt, short_list), InvalidArgument);
  Pairs wrong_ids = {{"a", "stop"}, {"b", "go"}, {"c", "mainst"}, {"z", "42"}};
  CHECK_THROWS_AS(word_accuracy(gt, wrong_ids), InvalidArgument);
  CHECK(word_accuracy({}, {}) == 1.0);
}

TEST_CASE("select_by_threshold splits inclusively and preserves order") {
  std::vector<PredictionRecord> records = {rec("a", "x", 0.95), rec("b", "y", 0.9),
                                           rec("c", "z", 0.85)};
  auto [sel, res] = select_by_threshold(records, 0.9);
  REQUIRE(sel.size() == 2);
  CHECK(sel[0].image_id == "a");
  CHECK(sel[1].image_id == "b");  // 0.9 >= 0.9: boundary included
  REQUIRE(res.size() == 1);
  CHECK(res[0].image_id == "c");

  auto [all, none] = select_by_threshold(records, 0.0);
  CHECK(all.size() == 3);
  CHECK(none.empty());
  auto [nothing, everything] = select_by_threshold(records, 1.0);
  CHECK(nothing.empty());
  CHECK(everything.size() == 3);

  CHECK_THROWS_AS(select_by_threshold(records, -0.1), InvalidArgument);
  CHECK_THROWS_AS(select_by_threshold(records, 1.1), InvalidArgument);
}

TEST_CASE("threshold selection partitions and is monotone in tau") {
  Rng rng(8);
  std::vector<PredictionRecord> records;
  for (int i = 0; i < 1000; ++i)
    records.push_back(rec("id" + std::to_string(i), "t", rng.uniform(0.0, 1.0)));
  double t1 = 0.4, t2 = 0.7;
  auto [s1, r1] = select_by_threshold(records, t1);
  auto [s2, r2] = select_by_threshold(records, t2);
  CHECK(s1.size() + r1.size() == records.size());
  std::set<std::string> set1 = ids_of(s1), set2 = ids_of(s2);
  CHECK(std::includes(set1.begin(), set1.end(), set2.begin(), set2.end()));
  std::set<std::string> res1 = ids_of(r1);
  for (const auto& id : set1) CHECK(res1.count(id) == 0);
}

TEST_CASE("select_top_k ranks by confidence with lexicographic ties") {
  std::vector<PredictionRecord> records = {rec("b", "x", 0.9), rec("a", "y", 0.9),
                                           rec("c", "z", 0.8)};
  auto top2 = select_top_k(records, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].image_id == "a");  // tie at 0.9 broken by id
  CHECK(top2[1].image_id == "b");

  CHECK(select_top_k(records, 0).empty());
  CHECK(select_top_k(records, 10).size() == 3);

  // Nesting: top-k1 is a prefix of top-k2 for k1 <= k2.
  Rng rng(15);
  std::vector<PredictionRecord> many;
  for (int i = 0; i < 500; ++i)
    many.push_back(rec("id" + std::to_string(i), "t",
                       std::round(rng.uniform(0.0, 1.0) * 20) / 20));  // force ties
  auto t50 = select_top_k(many, 50);
  auto t200 = select_top_k(many, 200);
  std::set<std::string> s50 = ids_of(t50), s200 = ids_of(t200);
  CHECK(std::includes(s200.begin(), s200.end(), s50.begin(), s50.end()));
}

TEST_CASE("isr rounds reselect from scratch and track the residue") {
  std::string dir = testsup::scratch_dir("isr");
  // Universe of 10; round-1 confidences select 6, round-2 lifts two more.
  std::vector<PredictionRecord> round1, round2;
  for (int i = 0; i < 10; ++i) {
    std::string id = "u" + std::to_string(i);
    double c1 = i < 6 ? 0.95 : 0.5;
    double c2 = i < 8 ? 0.95 : 0.5;
    round1.push_back(rec(id, "w" + std::to_string(i), c1));
    round2.push_back(rec(id, "w" + std::to_string(i), c2));
  }
  write_preds(dir + "/p1.tsv", round1);
  write_preds(dir + "/p2.tsv", round2);

  IsrState s0;
  s0.tau = 0.9;
  IsrState s1 = isr_round(s0, dir + "/p1.tsv", dir);
  CHECK(s1.round == 1);
  CHECK(s1.universe_ids.size() == 10);
  REQUIRE(s1.selected_ids.size() == 1);
  CHECK(s1.selected_ids[0].size() == 6);
  CHECK(s1.residue_ids.size() == 4);

  IsrState s2 = isr_round(s1, dir + "/p2.tsv", dir);
  CHECK(s2.round == 2);
  REQUIRE(s2.selected_ids.size() == 2);
  CHECK(s2.selected_ids[1].size() == 8);  // grows as confidence rises
  CHECK(s2.selected_ids[1].size() >= s2.selected_ids[0].size());
  CHECK(s2.residue_ids.size() == 2);  // never selected in either round

  // Selection files parse back with matching counts.
  auto sel_rows = read_predictions(dir + "/round_2.tsv");
  CHECK(sel_rows.size() == 8);
  auto res_rows = read_predictions(dir + "/residue_2.tsv");
  CHECK(res_rows.size() == 2);

  // Idempotence: replaying the same file selects the same set.
  IsrState s3 = isr_round(s2, dir + "/p2.tsv", dir);
  CHECK(s3.selected_ids[2] == s2.selected_ids[1]);
  CHECK(s3.residue_ids == s2.residue_ids);

  // State survives a save/load cycle.
  s2.save(dir + "/state.json");
  IsrState loaded = IsrState::load(dir + "/state.json");
  CHECK(loaded.round == s2.round);
  CHECK(loaded.tau == s2.tau);
  CHECK(loaded.universe_ids == s2.universe_ids);
  CHECK(loaded.selected_ids == s2.selected_ids);
  CHECK(loaded.residue_ids == s2.residue_ids);
  CHECK(loaded.sources == s2.sources);
}

TEST_CASE("isr rounds reject universe drift") {
  std::string dir = testsup::scratch_dir("isr_drift");
  std::vector<PredictionRecord> round1 = {rec("a", "x", 0.95), rec("b", "y", 0.5)};
  write_preds(dir + "/p1.tsv", round1);
  IsrState s1 = isr_round(IsrState{}, dir + "/p1.tsv", dir);

  write_preds(dir + "/missing.tsv", {rec("a", "x", 0.95)});
  CHECK_THROWS_AS(isr_round(s1, dir + "/missing.tsv", dir), UniverseError);
  write_preds(dir + "/extra.tsv",
              {rec("a", "x", 0.95), rec("b", "y", 0.5), rec("c", "z", 0.9)});
  CHECK_THROWS_AS(isr_round(s1, dir + "/extra.tsv", dir), UniverseError);
  write_preds(dir + "/renamed.tsv", {rec("a", "x", 0.95), rec("z", "y", 0.5)});
  CHECK_THROWS_AS(isr_round(s1, dir + "/renamed.tsv", dir), UniverseError);
  write_preds(dir + "/dup.tsv", {rec("a", "x", 0.95), rec("a", "y", 0.5)});
  CHECK_THROWS_AS(isr_round(s1, dir + "/dup.tsv", dir), UniverseError);
}

TEST_CASE("residue covers exactly the never-selected ids") {
  std::string dir = testsup::scratch_dir("isr_residue");
  std::vector<PredictionRecord> preds;
  for (int i = 0; i < 10; ++i)
    preds.push_back(rec("u" + std::to_string(i), "w", i == 0 ? 0.5 : 0.95));
  write_preds(dir + "/p.tsv", preds);
  IsrState s1 = isr_round(IsrState{}, dir + "/p.tsv", dir);
  auto residue = residue_for_annotation(s1);
  REQUIRE(residue.size() == 1);
  CHECK(residue[0] == "u0");

  // tau = 0 selects everything: empty residue.
  IsrState z;
  z.tau = 0.0;
  IsrState z1 = isr_round(z, dir + "/p.tsv", dir);
  CHECK(residue_for_annotation(z1).empty());

  CHECK_THROWS_AS(residue_for_annotation(IsrState{}), PreconditionViolation);
}

TEST_CASE("mock oracle hits the requested accuracy extremes") {
  std::vector<std::pair<std::string, std::string>> labeled;
  for (int i = 0; i < 200; ++i)
    labeled.push_back({"s" + std::to_string(i), "word" + std::to_string(i)});

  Rng r0(3);
  auto perfect = mock_oracle_recognize(labeled, 0.0, 0.8, r0);
  std::vector<std::pair<std::string, std::string>> as_pred;
  for (const auto& p : perfect) as_pred.push_back({p.image_id, p.text});
  CHECK(word_accuracy(labeled, as_pred) == 1.0);

  Rng r1(3);
  auto broken = mock_oracle_recognize(labeled, 1.0, 0.8, r1);
  as_pred.clear();
  for (const auto& p : broken) as_pred.push_back({p.image_id, p.text});
  CHECK(word_accuracy(labeled, as_pred) == 0.0);

  Rng ra(9), rb(9);
  auto a = mock_oracle_recognize(labeled, 0.3, 0.5, ra);
  auto b = mock_oracle_recognize(labeled, 0.3, 0.5, rb);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].text == b[i].text);
    CHECK(a[i].confidence == b[i].confidence);
  }

  Rng rng(1);
  CHECK_THROWS_AS(mock_oracle_recognize(labeled, -0.1, 0.5, rng), InvalidArgument);
  CHECK_THROWS_AS(mock_oracle_recognize(labeled, 0.5, 1.5, rng), InvalidArgument);
}

TEST_CASE("confidence selection concentrates correct pseudo-labels") {
  // 10K samples, 30% corrupted, strong confidence/correctness coupling.
  std::vector<std::pair<std::string, std::string>> labeled;
  for (int i = 0; i < 10000; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%05d", i);
    labeled.push_back({std::string("s") + buf, "text" + std::to_string(i % 97)});
  }
  Rng rng(42);
  auto preds = mock_oracle_recognize(labeled, 0.3, 0.9, rng);

  std::map<std::string, std::string> gt;
  for (const auto& [id, text] : labeled) gt[id] = text;
  auto precision = [&](const std::vector<PredictionRecord>& subset) {
    if (subset.empty()) return 1.0;
    size_t ok = 0;
    for (const auto& r : subset)
      if (normalize_label(r.text) == normalize_label(gt.at(r.image_id))) ++ok;
    return static_cast<double>(ok) / subset.size();
  };

  auto [sel, res] = select_by_threshold(preds, 0.9);
  double p_sel = precision(sel), p_res = precision(res), p_all = precision(preds);
  CHECK(p_sel > p_res);
  CHECK(p_sel >= p_all);
  CHECK(p_sel > 0.99);  // rho 0.9 separates the confidence ranges cleanly

  // Larger k sweeps: correct count never falls, precision never rises.
  size_t prev_correct = 0;
  double prev_precision = 1.0;
  for (size_t k : {1000u, 4000u, 7000u, 10000u}) {
    auto top = select_top_k(preds, k);
    size_t correct = 0;
    for (const auto& r : top)
      if (normalize_label(r.text) == normalize_label(gt.at(r.image_id))) ++correct;
    double prec = static_cast<double>(correct) / top.size();
    CHECK(correct >= prev_correct);
    CHECK(prec <= prev_precision + 1e-12);
    prev_correct = correct;
    prev_precision = prec;
  }
}
