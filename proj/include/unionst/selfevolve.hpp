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

#ifndef UNIONST_SELFEVOLVE_HPP_
#define UNIONST_SELFEVOLVE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "unionst/dataset_io.hpp"
#include "unionst/rng.hpp"

namespace unionst {

// Evaluation alphabet: lowercase letters plus digits, 36 symbols. Labels
// are lowercased and stripped of everything else before comparison.
std::string normalize_label(const std::string& text);

// Fraction of id-aligned pairs whose normalized labels match. Both lists
// are matched by id (order-insensitive); diverging id sets throw
// InvalidArgument. Empty inputs count as vacuously perfect.
double word_accuracy(const std::vector<std::pair<std::string, std::string>>& gt,
                     const std::vector<std::pair<std::string, std::string>>& pred);

// Splits records into (selected, residue) by confidence >= tau, both in
// input order. tau outside [0, 1] throws InvalidArgument.
std::pair<std::vector<PredictionRecord>, std::vector<PredictionRecord>>
select_by_threshold(const std::vector<PredictionRecord>& records, double tau = 0.9);

// The k highest-confidence records, ties broken by image_id ascending;
// returned sorted by (confidence desc, image_id asc).
std::vector<PredictionRecord> select_top_k(const std::vector<PredictionRecord>& records,
                                           size_t k);

// Bookkeeping for iterative self-training rounds. The recognizer itself is
// external: each round ingests its prediction file and emits selection
// files for the next fine-tune.
struct IsrState {
  int round = 0;   // completed rounds
  double tau = 0.9;
  std::vector<std::string> universe_ids;                 // sorted, fixed at round 1
  std::vector<std::vector<std::string>> selected_ids;    // per round, sorted
  std::vector<std::string> residue_ids;                  // universe minus all selected
  std::vector<std::string> sources;                      // prediction file per round

  void save(const std::string& path) const;
  static IsrState load(const std::string& path);
};

// Runs one selection round: reads predictions, re-selects from scratch over
// the full universe at state.tau, emits `round_<t>.tsv` (selected, with
// pseudo-labels) and `residue_<t>.tsv` under out_dir, and returns the
// advanced state. The première round fixes the universe; later rounds must
// cover exactly the same ids or UniverseError is thrown.
IsrState isr_round(const IsrState& state, const std::string& predictions_path,
                   const std::string& out_dir);

// Ids never selected in any completed round, sorted. Requires at least one
// round (PreconditionViolation otherwise).
std::vector<std::string> residue_for_annotation(const IsrState& state);

// Test double for the external recognizer: corrupts each ground-truth
// label with probability error_rate (one in-vocabulary character
// substitution that survives normalization) and reports confidence
// clamp01((1-rho)*u + rho*(correct ? 0.95 : 0.3)). rho in [0, 1] controls
// how strongly confidence correlates with correctness.
std::vector<PredictionRecord> mock_oracle_recognize(
    const std::vector<std::pair<std::string, std::string>>& labeled, double error_rate,
    double rho, Rng& rng);

}  // namespace unionst

#endif  // UNIONST_SELFEVOLVE_HPP_
