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

#ifndef UNIONST_ENGINE_HPP_
#define UNIONST_ENGINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "unionst/charset.hpp"
#include "unionst/compose.hpp"
#include "unionst/config.hpp"
#include "unionst/corpus.hpp"
#include "unionst/dataset_io.hpp"
#include "unionst/effects.hpp"
#include "unionst/fontcat.hpp"
#include "unionst/image.hpp"

namespace unionst {

// Everything the per-sample pipeline reads. Built once up front, then
// shared read-only across workers.
struct EngineResources {
  Charset charset = Charset::engine_default();
  Corpus corpus;
  FontCatalog fonts;
  BackgroundSet backgrounds;
  std::vector<Rgb> bg_means;  // whole-image mean, parallel to backgrounds.all()
  ColorMap colors;
};

// Loads fonts (`fonts.catalog` TSV if set, else indexes `fonts.dir`),
// backgrounds, the color table, and the corpus source files, then builds
// the corpus pools. Missing or unusable resources throw ConfigError.
EngineResources load_resources(const EngineConfig& cfg);

// Per-stage wall time accumulated by one worker, in seconds.
struct StageBreakdown {
  double corpus_s = 0;
  double font_s = 0;
  double layout_s = 0;
  double effects_s = 0;
  double compose_s = 0;
  double augment_s = 0;
  double io_s = 0;

  StageBreakdown& operator+=(const StageBreakdown& other);
};

struct SampleResult {
  ImageRgb image;
  TextSample label;
  SampleMeta meta;
};

// Generates sample `index` end to end. All randomness comes from a private
// stream seeded with mix_seed(global_seed, index), so the result depends
// only on (cfg, resources, global_seed, index) — never on worker count or
// scheduling. The in-stream draw order is frozen: text, font, layout
// params, background, style, style-stream fork, mid-ground count, per-mid
// (text, font, params, color, style), placement, foreground color,
// degradations. The foreground color is drawn last against the mean of the
// background patch the text lands on; the styled geometry is then replayed
// from the forked style stream, which leaves the footprint byte-identical.
// The drawn text size shrinks deterministically (no extra draws) when the
// chosen background could not host the crop at full size.
//
// A rejected attempt (background too small, illegible result, no eligible
// font) redraws from the same stream, at most 8 times; after that a
// deterministic fallback style is used (straight black text on a plain
// white canvas, no effects, no degradations). Throws GenerationError
// naming the index when even the fallback cannot produce a sample.
SampleResult generate_sample(const EngineConfig& cfg, const EngineResources& res,
                             uint64_t global_seed, uint64_t index,
                             StageBreakdown* stages = nullptr);

struct GenerateReport {
  DatasetManifest manifest;
  uint64_t samples = 0;
  uint64_t rejected = 0;   // rejected attempts across all samples
  uint64_t fallbacks = 0;  // samples that exhausted retries
  double accepted_fraction = 1.0;
  int workers = 1;
  double wall_seconds = 0;
  double samples_per_second = 0;
  StageBreakdown stages;  // summed across workers

  std::string to_json() const;
};

// Resolves the worker count: cfg `workers` if positive, else the hardware
// concurrency (at least 1).
int effective_workers(const EngineConfig& cfg);

// Generates cfg `count` samples under `out_dir` with a worker pool and the
// index-ordered dataset writer. Dataset bytes are a pure function of
// (config, seed).
GenerateReport generate_dataset(const EngineConfig& cfg, const std::string& out_dir);

// Timed generation run into a scratch directory (removed afterwards).
// n overrides cfg `count`; fewer than 100 samples throw InvalidArgument
// since the rate would be dominated by startup noise.
GenerateReport bench_run(const EngineConfig& cfg, uint64_t n);

}  // namespace unionst

#endif  // UNIONST_ENGINE_HPP_
