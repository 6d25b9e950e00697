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

#ifndef UNIONST_LAYOUT_HPP_
#define UNIONST_LAYOUT_HPP_

#include <string>
#include <vector>

#include "unionst/config.hpp"
#include "unionst/rng.hpp"

namespace unionst {

enum class ScriptMode { None, SubSuper };

// Curve and style parameters for one text placement. Coordinates are
// mathematical (y up); the compositor flips to image space.
struct PlacementParams {
  bool straight = true;        // true: zero curvature, ignore curve_radius
  double curve_radius = 100;   // px; effective curvature a = 1/(2R)
  bool curve_down = false;     // negate the curvature (bend the other way)
  double baseline_offset = 0;  // b: vertical shift of the curve, px
  double rotation = 0;         // phi, radians in [0, 2pi)
  bool vertical = false;       // swap axes, rotate glyphs 90 degrees
  double base_size = 32;       // s: base character size, px
  double jitter_lo = 1.0;      // per-character size multiplier range
  double jitter_hi = 1.0;
  ScriptMode script_mode = ScriptMode::None;
};

// Per-character placement: center position on the (rotated) curve, glyph
// orientation, and rendered size.
struct CharPlacement {
  double x = 0, y = 0;  // p_i
  double o = 0;         // orientation, radians
  double s = 0;         // size, px
};

struct BoxF {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct TextLayout {
  std::vector<CharPlacement> placements;
  BoxF bounds;  // contains every s_i-sized glyph box rotated by o_i at p_i
};

// Signed curvature of y = a x^2: 1/(2R) for curved text (negated when
// curve_down), 0 for straight. R in [20, 200] px gives gentle to strong
// bends at text scale.
double effective_curvature(const PlacementParams& params);

// Character center abscissas with pen-model spacing measured in arc length
// along y = a x^2: L(x_i) = sum(adv_j, j<i) + adv_i/2 - total/2, so the
// text is centered and consecutive gaps are curvature-invariant.
std::vector<double> char_abscissas(const std::vector<double>& advances, double a);

// Arc length of y = a x^2 from 0 to x (signed), and its inverse.
double parabola_arclen(double a, double x);
double parabola_arclen_inv(double a, double target);

// Places each character of `text`: p_i = R(phi) * (x_i, a x_i^2 + b),
// o_i = arctan(2 a x_i) + phi, s_i = s * jitter_i. SubSuper shifts a random
// suffix run's baseline by +-0.3 s and scales it by 0.6. Vertical mode
// swaps the axes of every p_i and adds pi/2 to o_i.
// `advances` are per-character advance widths at the base size.
TextLayout place(const PlacementParams& params, const std::u32string& text,
                 const std::vector<double>& advances, Rng& rng);

// Draws params from the config policy: curve.prob / curve.radius_min/max,
// orient.prob, vertical.prob, size.jitter_lo/hi, script.prob,
// text.size_lo/hi. The draw order is fixed and part of the
// reproducibility contract.
PlacementParams sample_params(const EngineConfig& cfg, Rng& rng);

}  // namespace unionst

#endif  // UNIONST_LAYOUT_HPP_
