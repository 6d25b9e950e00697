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

#include "unionst/engine.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>
#include <utility>
#include <cstdio>

#include "json.hpp"
#include "unionst/augment.hpp"
#include "unionst/error.hpp"
#include "unionst/layout.hpp"
#include "unionst/rng.hpp"
#include "unionst/utf8.hpp"

namespace unionst {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxRedraws = 8;

using Clock = std::chrono::steady_clock;

// Accumulates the time since the previous mark into one breakdown slot.
class StageTimer {
 public:
  explicit StageTimer(StageBreakdown* out) : out_(out) {
    if (out_) last_ = Clock::now();
  }
  void mark(double StageBreakdown::* slot) {
    if (!out_) return;
    Clock::time_point now = Clock::now();
    out_->*slot += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  StageBreakdown* out_;
  Clock::time_point last_;
};

std::vector<double> advances_for(const Font& font, const std::u32string& cps,
                                 double size) {
  std::vector<double> adv;
  adv.reserve(cps.size());
  for (char32_t cp : cps) adv.push_back(font.advance(cp, size));
  return adv;
}

struct Extent {
  double w = 0, h = 0;
};

// Pre-render footprint estimate of a text at the drawn layout parameters:
// the advances fix the arc width; the curve sagitta, vertical stacking and
// the rotated bounding box follow from the parameters. Style growth and
// crop margins are headroom factors at the call sites.
Extent estimate_extent(const PlacementParams& p, const std::vector<double>& adv) {
  double jm = 0.5 * (p.jitter_lo + p.jitter_hi);
  double w = 0;
  for (double a : adv) w += a;
  w *= jm;
  double h = 1.6 * p.base_size * jm;
  if (!p.straight) h += 0.25 * w * w / (2.0 * p.curve_radius);
  if (p.vertical) std::swap(w, h);
  double c = std::abs(std::cos(p.rotation));
  double s = std::abs(std::sin(p.rotation));
  return {c * w + s * h, s * w + c * h};
}

// Shrinks the drawn size (and the advances, which scale linearly) until
// the estimated footprint fits a max_w x max_h canvas after the given
// headroom factors. Returns false when the text would drop below
// `min_size` px — the caller should reject instead of rendering mush.
// The curve sagitta shrinks quadratically with the scale, so one
// conservative pass is enough.
bool clamp_to_canvas(PlacementParams* params, std::vector<double>* adv, double max_w,
                     double max_h, double min_size) {
  Extent ext = estimate_extent(*params, *adv);
  double fit = std::min(max_w / (ext.w + 1.0), max_h / (ext.h + 1.0));
  if (fit >= 1.0) return true;
  params->base_size *= fit;
  if (params->base_size < min_size) return false;
  for (double& a : *adv) a *= fit;
  return true;
}

// Output normalization shared by the regular and fallback paths: the
// vertical-crop rotation rule, then a proportional resize to the target
// height (`out.height`; 0 keeps the native size).
ImageRgb finish_geometry(const EngineConfig& cfg, ImageRgb image) {
  if (cfg.boolean("rotate.vertical")) image = rotate_if_vertical(image);
  int out_h = static_cast<int>(cfg.i64("out.height"));
  if (out_h > 0 && image.height != out_h) {
    int out_w = std::max<int>(
        1, static_cast<int>(std::lround(static_cast<double>(image.width) * out_h /
                                        image.height)));
    image = resize_bilinear(image, out_w, out_h);
  }
  return image;
}

// One full pipeline attempt. Returns false on a rejection that should be
// redrawn (no eligible font, empty rendering, background too small,
// illegible result); hard errors propagate.
bool attempt_sample(const EngineConfig& cfg, const EngineResources& res, Rng& rng,
                    StageTimer& timer, SampleResult* out) {
  timer.mark(&StageBreakdown::corpus_s);  // reset the stage clock
  const TextSample& ts = res.corpus.sample_text(rng);
  std::u32string cps = utf8::decode(ts.text);
  timer.mark(&StageBreakdown::corpus_s);

  const FontRecord* rec;
  try {
    rec = &res.fonts.select_font(cps, rng);
  } catch (const NoFontError&) {
    timer.mark(&StageBreakdown::font_s);
    fprintf(stderr, "REJECT font text=[%s]\n", ts.text.c_str());
    return false;
  }
  const Font& font = res.fonts.font(rec->id);
  timer.mark(&StageBreakdown::font_s);

  PlacementParams params = sample_params(cfg, rng);
  timer.mark(&StageBreakdown::layout_s);

  const Background& bg = res.backgrounds.pick(rng);
  size_t bg_idx = static_cast<size_t>(&bg - res.backgrounds.all().data());
  timer.mark(&StageBreakdown::compose_s);

  // Fit the drawn size to this background up front: the crop pads each
  // axis by up to 30% margin and style effects can grow the box by ~20%
  // plus a few pixels.
  std::vector<double> advances = advances_for(font, cps, params.base_size);
  if (!clamp_to_canvas(&params, &advances, bg.image.width / 1.56 - 12.0,
                       bg.image.height / 1.56 - 12.0, 8.0)) {
    timer.mark(&StageBreakdown::layout_s);
    fprintf(stderr, "REJECT clamp len=%zu bg=%dx%d\n", cps.size(), bg.image.width, bg.image.height);
    return false;
  }
  TextLayout layout = place(params, cps, advances, rng);
  timer.mark(&StageBreakdown::layout_s);

  // The foreground color is picked only after placement, against the patch
  // of background the text actually lands on (the legibility ring hugs the
  // glyphs, so the whole-background mean is a poor stand-in on gradients).
  // Style parameters are drawn now, and the styled geometry runs on a
  // forked stream so the recolor pass can replay it with an identical
  // footprint: none of the effects move ink based on the glyph color.
  StyleSpec style = sample_style(cfg, params.base_size, Rgb{0, 0, 0}, rng);
  uint64_t style_seed = rng.next_u64();
  Layer fg;
  try {
    Rng style_rng(style_seed);
    fg = apply_style(render_text(font, cps, layout, Rgb{0, 0, 0}), style, style_rng);
  } catch (const NoGlyphError&) {
    timer.mark(&StageBreakdown::effects_s);
    return false;
  }
  if (fg.empty() || tight_alpha_box(fg).empty()) {
    timer.mark(&StageBreakdown::effects_s);
    return false;  // nothing was inked (e.g. whitespace-only text)
  }

  // Mid-ground clutter: each instance draws its own text, font, layout and
  // style from the same stream. An instance that cannot render is skipped
  // without rejecting the sample.
  int mid_count =
      static_cast<int>(rng.uniform_index(static_cast<size_t>(cfg.i64("midground.max")) + 1));
  std::vector<Layer> mids;
  for (int m = 0; m < mid_count; ++m) {
    const TextSample& mts = res.corpus.sample_text(rng);
    std::u32string mcps = utf8::decode(mts.text);
    const FontRecord* mrec;
    try {
      mrec = &res.fonts.select_font(mcps, rng);
    } catch (const NoFontError&) {
      continue;
    }
    const Font& mfont = res.fonts.font(mrec->id);
    PlacementParams mparams = sample_params(cfg, rng);
    // Clutter gets rescaled against the foreground height during placement
    // anyway, so cap its raster to keep rendering cheap.
    std::vector<double> madv = advances_for(mfont, mcps, mparams.base_size);
    if (!clamp_to_canvas(&mparams, &madv, 512.0, 512.0, 6.0)) continue;
    TextLayout mlayout = place(mparams, mcps, madv, rng);
    Rgb mcolor = pick_color(res.colors, res.bg_means[bg_idx], rng);
    StyleSpec mstyle = sample_style(cfg, mparams.base_size, mcolor, rng);
    Layer mid;
    try {
      mid = apply_style(render_text(mfont, mcps, mlayout, mcolor), mstyle, rng);
    } catch (const NoGlyphError&) {
      continue;
    }
    if (!mid.empty() && !tight_alpha_box(mid).empty()) mids.push_back(std::move(mid));
  }
  timer.mark(&StageBreakdown::effects_s);

  CompositionPlan plan;
  try {
    plan = compute_placements(fg, mids, bg, cfg, rng);
  } catch (const SkipBackground& e) {
    timer.mark(&StageBreakdown::compose_s);
    fprintf(stderr, "REJECT skipbg %s\n", e.what());
    return false;
  }
  timer.mark(&StageBreakdown::compose_s);

  // Now the landing patch is known: draw the color against its mean and
  // replay the styled geometry with it. The footprint is unchanged, so the
  // placement stays valid and the recolored raster slots into the plan.
  Box local = tight_alpha_box(plan.fg);
  Box patch{plan.crop.x0 + plan.fg.x0 + local.x0 - 4,
            plan.crop.y0 + plan.fg.y0 + local.y0 - 4,
            plan.crop.x0 + plan.fg.x0 + local.x1 + 4,
            plan.crop.y0 + plan.fg.y0 + local.y1 + 4};
  Rgb fg_color = pick_color(res.colors, mean_rgb(bg.image, patch), rng);
  style.fg_color = fg_color;
  if (style.border) {
    uint8_t px[3] = {fg_color.r, fg_color.g, fg_color.b};
    style.border->color = luminance(px) > 127 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
  }
  {
    Rng style_rng(style_seed);
    Layer recolored =
        apply_style(render_text(font, cps, layout, fg_color), style, style_rng);
    recolored.x0 = plan.fg.x0;
    recolored.y0 = plan.fg.y0;
    plan.fg = std::move(recolored);
  }
  timer.mark(&StageBreakdown::effects_s);

  ImageRgb image = compose_sample(bg.image, plan);

  LegibilityParams lp;
  lp.contrast_min = cfg.f64("filter.contrast_min");
  if (!legibility_filter(image, plan.fg, lp)) {
    timer.mark(&StageBreakdown::compose_s);
    fprintf(stderr, "REJECT legibility bgidx=%zu fg=(%d,%d,%d) size=%.1f len=%zu\n", bg_idx, fg_color.r, fg_color.g, fg_color.b, params.base_size, cps.size());
    return false;
  }
  timer.mark(&StageBreakdown::compose_s);

  image = finish_geometry(cfg, std::move(image));
  if (cfg.boolean("dtaug.enable")) {
    AugPolicy policy = AugPolicy::from_config(cfg);
    image = dtaug_apply(image, policy, rng);
  }
  timer.mark(&StageBreakdown::augment_s);

  out->image = std::move(image);
  out->label = ts;
  out->meta.font_id = rec->id;
  out->meta.category = to_string(ts.category);
  out->meta.size = params.base_size;
  out->meta.orient = params.rotation;
  out->meta.curved = !params.straight;
  out->meta.vertical = params.vertical;
  out->meta.mids = static_cast<int>(mids.size());
  return true;
}

// Deterministic last resort after the redraw budget: plain straight black
// text on a white canvas, no effects, no degradations. Black on white
// passes any sane legibility configuration.
SampleResult fallback_sample(const EngineConfig& cfg, const EngineResources& res,
                             Rng& rng, uint64_t index) {
  const FontRecord* rec = nullptr;
  TextSample ts;
  std::u32string cps;
  for (int t = 0; t < 32 && !rec; ++t) {
    ts = res.corpus.sample_text(rng);
    cps = utf8::decode(ts.text);
    try {
      rec = &res.fonts.select_font(cps, rng);
    } catch (const NoFontError&) {
      rec = nullptr;
    }
  }
  if (!rec)
    throw GenerationError("sample " + std::to_string(index) +
                          ": no font covers any corpus draw, even for the fallback");

  PlacementParams params;
  params.straight = true;
  params.base_size = 32;
  params.jitter_lo = params.jitter_hi = 1.0;
  const Font& font = res.fonts.font(rec->id);
  TextLayout layout = place(params, cps, advances_for(font, cps, params.base_size), rng);
  Layer fg = render_text(font, cps, layout, Rgb{0, 0, 0});
  Box ink = tight_alpha_box(fg);
  if (fg.empty() || ink.empty())
    throw GenerationError("sample " + std::to_string(index) +
                          ": fallback text rendered no ink");

  constexpr int kMargin = 8;
  Layer placed = fg;
  placed.x0 = kMargin - ink.x0;
  placed.y0 = kMargin - ink.y0;
  ImageRgb image(ink.width() + 2 * kMargin, ink.height() + 2 * kMargin,
                 Rgb{255, 255, 255});
  blend_onto(image, placed);

  LegibilityParams lp;
  lp.contrast_min = cfg.f64("filter.contrast_min");
  if (!legibility_filter(image, placed, lp))
    throw GenerationError("sample " + std::to_string(index) +
                          ": even the black-on-white fallback fails the legibility "
                          "filter; check filter.contrast_min");

  SampleResult out;
  out.image = finish_geometry(cfg, std::move(image));
  out.label = ts;
  out.meta.font_id = rec->id;
  out.meta.category = to_string(ts.category);
  out.meta.size = params.base_size;
  out.meta.orient = 0;
  out.meta.curved = false;
  out.meta.vertical = false;
  out.meta.mids = 0;
  return out;
}

double dsec(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

StageBreakdown& StageBreakdown::operator+=(const StageBreakdown& other) {
  corpus_s += other.corpus_s;
  font_s += other.font_s;
  layout_s += other.layout_s;
  effects_s += other.effects_s;
  compose_s += other.compose_s;
  augment_s += other.augment_s;
  io_s += other.io_s;
  return *this;
}

EngineResources load_resources(const EngineConfig& cfg) {
  EngineResources res;

  const std::string& catalog = cfg.str("fonts.catalog");
  const std::string& fonts_dir = cfg.str("fonts.dir");
  try {
    if (!catalog.empty()) {
      res.fonts = FontCatalog::load_tsv(catalog);
    } else if (!fonts_dir.empty()) {
      res.fonts = FontCatalog::index_fonts(fonts_dir, nullptr, cfg.f64("fontfilter.eps"),
                                           static_cast<int>(cfg.i64("fontfilter.max_coinciding")));
    } else {
      throw ConfigError("no fonts: set fonts.catalog or fonts.dir");
    }
  } catch (const IoError& e) {
    throw ConfigError(std::string("fonts: ") + e.what());
  }
  if (res.fonts.empty()) throw ConfigError("font catalog has no usable fonts");

  const std::string& bg_dir = cfg.str("backgrounds.dir");
  if (bg_dir.empty()) throw ConfigError("backgrounds.dir is not set");
  try {
    res.backgrounds = BackgroundSet::load_dir(bg_dir);
  } catch (const IoError& e) {
    throw ConfigError(std::string("backgrounds: ") + e.what());
  }
  res.bg_means.reserve(res.backgrounds.size());
  for (const Background& bg : res.backgrounds.all())
    res.bg_means.push_back(
        mean_rgb(bg.image, Box{0, 0, bg.image.width, bg.image.height}));

  const std::string& cm_path = cfg.str("colormap.path");
  if (cm_path.empty()) throw ConfigError("colormap.path is not set");
  try {
    res.colors = ColorMap::load(cm_path);
  } catch (const IoError& e) {
    throw ConfigError(std::string("color table: ") + e.what());
  }
  if (res.colors.empty()) throw ConfigError("color table has no entries: " + cm_path);

  CorpusSpec spec = CorpusSpec::from_config(cfg);
  std::vector<std::string> words, phrases;
  std::string source_text;
  std::vector<TextSample> pseudo;
  try {
    if (!cfg.str("corpus.words").empty()) words = load_lines(cfg.str("corpus.words"));
    if (!cfg.str("corpus.phrases").empty())
      phrases = load_lines(cfg.str("corpus.phrases"));
    if (!cfg.str("corpus.source").empty())
      // Fold line breaks away so extracted multi-word substrings never
      // carry a newline (no font maps one).
      source_text = collapse_whitespace(load_text(cfg.str("corpus.source")));
    if (!cfg.str("corpus.pseudo").empty())
      pseudo = predictions_to_corpus(read_predictions(cfg.str("corpus.pseudo")));
  } catch (const IoError& e) {
    throw ConfigError(std::string("corpus: ") + e.what());
  }
  res.corpus = Corpus::build(spec, words, phrases, source_text, pseudo, res.charset,
                             cfg.u64("seed"));

  bool usable = false;
  for (Category c : {Category::Common, Category::Contextless, Category::Incomplete,
                     Category::MultiWords, Category::Pseudo})
    if (spec.weight(c) > 0 && !res.corpus.pool(c).empty()) usable = true;
  if (!usable)
    throw ConfigError("no corpus category has both a positive weight and entries");

  return res;
}

SampleResult generate_sample(const EngineConfig& cfg, const EngineResources& res,
                             uint64_t global_seed, uint64_t index,
                             StageBreakdown* stages) {
  uint64_t sample_seed = mix_seed(global_seed, index);
  Rng rng(sample_seed);
  StageTimer timer(stages);

  SampleResult out;
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    if (attempt_sample(cfg, res, rng, timer, &out)) {
      out.meta.seed = sample_seed;
      out.meta.retries = attempt;
      return out;
    }
  }
  out = fallback_sample(cfg, res, rng, index);
  out.meta.seed = sample_seed;
  out.meta.retries = kMaxRedraws + 1;
  return out;
}

int effective_workers(const EngineConfig& cfg) {
  int64_t w = cfg.i64("workers");
  if (w > 0) return static_cast<int>(std::min<int64_t>(w, 256));
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

GenerateReport generate_dataset(const EngineConfig& cfg, const std::string& out_dir) {
  Clock::time_point t_start = Clock::now();
  const uint64_t count = cfg.u64("count");
  const uint64_t seed = cfg.u64("seed");
  const int workers = count == 0
                          ? 1
                          : static_cast<int>(std::min<uint64_t>(effective_workers(cfg), count));

  EngineResources res = load_resources(cfg);
  DatasetWriter writer(out_dir, cfg.boolean("out.packed"));

  std::atomic<uint64_t> next{0};
  std::atomic<uint64_t> rejected{0};
  std::atomic<uint64_t> fallbacks{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::vector<StageBreakdown> per_worker(static_cast<size_t>(workers));

  auto work = [&](int w) {
    try {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        SampleResult s = generate_sample(cfg, res, seed, i, &per_worker[w]);
        rejected += static_cast<uint64_t>(s.meta.retries > kMaxRedraws ? kMaxRedraws + 1
                                                                       : s.meta.retries);
        if (s.meta.retries > kMaxRedraws) ++fallbacks;
        Clock::time_point t0 = Clock::now();
        writer.write_sample(i, s.image, s.label, s.meta);
        per_worker[w].io_s += dsec(t0);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!first_error) first_error = std::current_exception();
      stop.store(true);
    }
  };

  if (count > 0) {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  GenerateReport report;
  report.samples = count;
  report.rejected = rejected.load();
  report.fallbacks = fallbacks.load();
  report.accepted_fraction =
      count == 0 ? 1.0
                 : static_cast<double>(count) /
                       static_cast<double>(count + report.rejected);
  report.workers = workers;
  report.manifest =
      writer.close(seed, cfg.hash(), res.charset.hash(), report.accepted_fraction);
  for (const StageBreakdown& sb : per_worker) report.stages += sb;
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - t_start).count();
  report.samples_per_second =
      report.wall_seconds > 0 ? count / report.wall_seconds : 0.0;
  return report;
}

GenerateReport bench_run(const EngineConfig& cfg, uint64_t n) {
  if (n < 100)
    throw InvalidArgument("bench needs at least 100 samples for a stable rate, got " +
                          std::to_string(n));
  EngineConfig c = cfg;
  c.set("count", std::to_string(n));
  fs::path dir = fs::temp_directory_path() /
                 ("unionst_bench_" + std::to_string(::getpid()) + "_" +
                  std::to_string(Clock::now().time_since_epoch().count()));
  GenerateReport report;
  try {
    report = generate_dataset(c, dir.string());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    throw;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return report;
}

std::string GenerateReport::to_json() const {
  nlohmann::json j;
  j["samples"] = samples;
  j["workers"] = workers;
  j["wall_seconds"] = wall_seconds;
  j["samples_per_second"] = samples_per_second;
  j["per_worker_samples_per_second"] =
      workers > 0 ? samples_per_second / workers : 0.0;
  j["rejected_attempts"] = rejected;
  j["fallbacks"] = fallbacks;
  j["accepted_fraction"] = accepted_fraction;
  j["stages_seconds"] = {
      {"corpus", stages.corpus_s},   {"font", stages.font_s},
      {"layout", stages.layout_s},   {"effects", stages.effects_s},
      {"compose", stages.compose_s}, {"augment", stages.augment_s},
      {"io", stages.io_s}};
  j["dataset_count"] = manifest.count;
  return j.dump(2);
}

}  // namespace unionst
