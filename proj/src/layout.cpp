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

#include "unionst/layout.hpp"

#include <algorithm>
#include <cmath>

#include "unionst/error.hpp"

namespace unionst {

double effective_curvature(const PlacementParams& params) {
  if (params.straight) return 0.0;
  if (params.curve_radius <= 0) throw InvalidArgument("curve radius must be positive");
  double a = 1.0 / (2.0 * params.curve_radius);
  return params.curve_down ? -a : a;
}

double parabola_arclen(double a, double x) {
  if (a == 0.0) return x;
  double u = 2.0 * a * x;
  return 0.5 * (x * std::sqrt(1.0 + u * u) + std::asinh(u) / (2.0 * a));
}

double parabola_arclen_inv(double a, double target) {
  if (a == 0.0) return target;
  // Newton iteration; L'(x) = sqrt(1 + 4 a^2 x^2) >= 1 keeps it stable.
  double x = target;
  for (int i = 0; i < 32; ++i) {
    double err = parabola_arclen(a, x) - target;
    if (std::abs(err) < 1e-10) break;
    x -= err / std::sqrt(1.0 + 4.0 * a * a * x * x);
  }
  return x;
}

std::vector<double> char_abscissas(const std::vector<double>& advances, double a) {
  for (double adv : advances)
    if (adv <= 0.0) throw InvalidArgument("char_abscissas: advances must be positive");
  double total = 0.0;
  for (double adv : advances) total += adv;
  std::vector<double> xs;
  xs.reserve(advances.size());
  double pen = 0.0;
  for (double adv : advances) {
    double center = pen + 0.5 * adv - 0.5 * total;
    // Curvature magnitude only: arc length along y = a x^2 is even in a.
    xs.push_back(parabola_arclen_inv(std::abs(a), center));
    pen += adv;
  }
  return xs;
}

TextLayout place(const PlacementParams& params, const std::u32string& text,
                 const std::vector<double>& advances, Rng& rng) {
  size_t n = text.size();
  if (n == 0) throw InvalidArgument("place: empty text");
  if (advances.size() != n) throw InvalidArgument("place: advances/text length mismatch");

  // Draw order (reproducibility contract): per-char jitter, then script
  // run length and shift direction.
  std::vector<double> jitter(n);
  for (auto& j : jitter) j = rng.uniform(params.jitter_lo, params.jitter_hi);

  size_t script_start = n;  // [script_start, n) is the sub/superscript run
  double script_shift = 0.0;
  if (params.script_mode == ScriptMode::SubSuper && n >= 2) {
    size_t max_run = (n + 1) / 2;
    size_t run = 1 + rng.uniform_index(max_run);
    script_start = n - run;
    script_shift = rng.bernoulli(0.5) ? 0.3 * params.base_size : -0.3 * params.base_size;
  }

  double a = effective_curvature(params);
  std::vector<double> eff_adv(n);
  std::vector<double> sizes(n);
  for (size_t i = 0; i < n; ++i) {
    double scale = jitter[i] * (i >= script_start ? 0.6 : 1.0);
    sizes[i] = params.base_size * scale;
    eff_adv[i] = advances[i] * scale;
  }
  std::vector<double> xs = char_abscissas(eff_adv, a);

  double cphi = std::cos(params.rotation), sphi = std::sin(params.rotation);
  TextLayout layout;
  layout.placements.resize(n);
  bool first = true;
  for (size_t i = 0; i < n; ++i) {
    double x = xs[i];
    double y = a * x * x + params.baseline_offset + (i >= script_start ? script_shift : 0.0);
    CharPlacement& pl = layout.placements[i];
    pl.x = cphi * x - sphi * y;
    pl.y = sphi * x + cphi * y;
    pl.o = std::atan(2.0 * a * x) + params.rotation;
    pl.s = sizes[i];
    if (params.vertical) {
      std::swap(pl.x, pl.y);
      pl.o += 1.5707963267948966;
    }
    // Bounding box over the rotated s_i x s_i glyph box corners.
    double co = std::cos(pl.o), so = std::sin(pl.o);
    double h = 0.5 * pl.s;
    for (int cx = -1; cx <= 1; cx += 2) {
      for (int cy = -1; cy <= 1; cy += 2) {
        double px = pl.x + co * (cx * h) - so * (cy * h);
        double py = pl.y + so * (cx * h) + co * (cy * h);
        if (first) {
          layout.bounds = {px, py, px, py};
          first = false;
        } else {
          layout.bounds.x0 = std::min(layout.bounds.x0, px);
          layout.bounds.y0 = std::min(layout.bounds.y0, py);
          layout.bounds.x1 = std::max(layout.bounds.x1, px);
          layout.bounds.y1 = std::max(layout.bounds.y1, py);
        }
      }
    }
  }
  return layout;
}

PlacementParams sample_params(const EngineConfig& cfg, Rng& rng) {
  PlacementParams p;
  // Fixed draw order: curved?, R, bend direction, oriented?, phi,
  // vertical?, base size, jitter, script?
  p.straight = !rng.bernoulli(cfg.f64("curve.prob"));
  if (!p.straight) {
    p.curve_radius = rng.uniform(cfg.f64("curve.radius_min"), cfg.f64("curve.radius_max"));
    p.curve_down = rng.bernoulli(0.5);
  }
  if (rng.bernoulli(cfg.f64("orient.prob")))
    p.rotation = rng.uniform(0.0, 6.283185307179586);
  p.vertical = rng.bernoulli(cfg.f64("vertical.prob"));
  p.base_size = rng.uniform(cfg.f64("text.size_lo"), cfg.f64("text.size_hi"));
  p.jitter_lo = cfg.f64("size.jitter_lo");
  p.jitter_hi = cfg.f64("size.jitter_hi");
  if (p.jitter_lo < 0 || p.jitter_lo > p.jitter_hi)
    throw ConfigError("size.jitter range invalid");
  p.script_mode = rng.bernoulli(cfg.f64("script.prob")) ? ScriptMode::SubSuper
                                                        : ScriptMode::None;
  return p;
}

}  // namespace unionst
