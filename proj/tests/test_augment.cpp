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

#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "unionst/augment.hpp"
#include "unionst/error.hpp"
#include "unionst/png_io.hpp"

using namespace unionst;

namespace {

double psnr(const ImageRgb& a, const ImageRgb& b) {
  REQUIRE(a.pixels.size() == b.pixels.size());
  double mse = 0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.pixels.size());
  REQUIRE(mse > 0);  // callers compare lossy outputs
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// Mean absolute 4-neighbour Laplacian over the green channel interior.
double laplacian_energy(const ImageRgb& img) {
  double acc = 0;
  int n = 0;
  for (int y = 1; y + 1 < img.height; ++y)
    for (int x = 1; x + 1 < img.width; ++x) {
      double c = img.at(x, y)[1];
      double lap = 4 * c - img.at(x - 1, y)[1] - img.at(x + 1, y)[1] -
                   img.at(x, y - 1)[1] - img.at(x, y + 1)[1];
      acc += std::abs(lap);
      ++n;
    }
  return acc / n;
}

ImageRgb checkerboard(int w, int h) {
  ImageRgb img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      uint8_t v = (x + y) % 2 ? 255 : 0;
      uint8_t* p = img.at(x, y);
      p[0] = p[1] = p[2] = v;
    }
  return img;
}

ImageRgb natural_patch() {
  ImageRgb bg = read_png(testsup::data_path("backgrounds/tex_paper.png"));
  return crop(bg, Box{100, 100, 164, 164});
}

}  // namespace

TEST_CASE("resample at scale 1 is a bit-exact identity") {
  ImageRgb img = natural_patch();
  ImageRgb same = resample_degrade(img, 1.0);
  CHECK(same.pixels == img.pixels);
  CHECK_THROWS_AS(resample_degrade(img, 0.0), InvalidArgument);
  CHECK_THROWS_AS(resample_degrade(img, 1.2), InvalidArgument);
}

TEST_CASE("resample intermediate dimensions round but never collapse") {
  CHECK(resample_dims(320, 64, 0.1) == std::pair<int, int>{32, 6});
  CHECK(resample_dims(320, 64, 1.0) == std::pair<int, int>{320, 64});
  CHECK(resample_dims(4, 4, 0.1) == std::pair<int, int>{1, 1});
  ImageRgb tiny(4, 4, {50, 60, 70});
  ImageRgb out = resample_degrade(tiny, 0.1);
  CHECK(out.width == 4);
  CHECK(out.height == 4);
}

TEST_CASE("resample strictly removes high-frequency energy") {
  ImageRgb board = checkerboard(32, 32);
  ImageRgb soft = resample_degrade(board, 0.5);
  CHECK(soft.width == board.width);
  CHECK(soft.height == board.height);
  CHECK(laplacian_energy(soft) < laplacian_energy(board));

  // A 1-px checkerboard at exactly 2:1 averages to flat gray, so deeper
  // scales can only stay at (or reach) the floor.
  ImageRgb softer = resample_degrade(board, 0.25);
  CHECK(laplacian_energy(softer) <= laplacian_energy(soft));

  // On a natural patch the decrease is strictly monotone in scale.
  ImageRgb patch = natural_patch();
  double e1 = laplacian_energy(patch);
  double e05 = laplacian_energy(resample_degrade(patch, 0.5));
  double e02 = laplacian_energy(resample_degrade(patch, 0.2));
  CHECK(e05 < e1);
  CHECK(e02 < e05);
}

TEST_CASE("compression round trip degrades gracefully with quality") {
  ImageRgb patch = natural_patch();
  ImageRgb q95 = compression_degrade(patch, 95);
  ImageRgb q10 = compression_degrade(patch, 10);
  CHECK(q95.width == patch.width);
  double p95 = psnr(patch, q95);
  double p10 = psnr(patch, q10);
  CHECK(p95 >= 35.0);
  CHECK(p10 < p95);

  CHECK_THROWS_AS(compression_degrade(patch, 4), InvalidArgument);
  CHECK_THROWS_AS(compression_degrade(patch, 96), InvalidArgument);
}

TEST_CASE("compression leaves mid-gray flats untouched and is deterministic") {
  ImageRgb flat(40, 24, {128, 128, 128});
  ImageRgb out = compression_degrade(flat, 50);
  CHECK(out.pixels == flat.pixels);  // every block transform coefficient is 0

  ImageRgb patch = natural_patch();
  CHECK(compression_degrade(patch, 30).pixels == compression_degrade(patch, 30).pixels);
}

TEST_CASE("gaussian noise has the requested moments") {
  ImageRgb flat(64, 64, {128, 128, 128});
  Rng rng(21);
  ImageRgb noisy = add_gaussian_noise(flat, 4.0, rng);
  double mean = 0;
  for (uint8_t v : noisy.pixels) mean += v;
  mean /= static_cast<double>(noisy.pixels.size());
  double var = 0;
  for (uint8_t v : noisy.pixels) var += (v - mean) * (v - mean);
  var /= static_cast<double>(noisy.pixels.size() - 1);
  CHECK(std::abs(mean - 128.0) < 0.2);
  // Byte rounding adds ~1/12 to the variance.
  CHECK(std::sqrt(var) == doctest::Approx(4.0).epsilon(0.05));

  Rng r1(5), r2(5);
  CHECK(add_gaussian_noise(flat, 4.0, r1).pixels ==
        add_gaussian_noise(flat, 4.0, r2).pixels);
  CHECK(add_gaussian_noise(flat, 0.0, rng).pixels == flat.pixels);
  CHECK_THROWS_AS(add_gaussian_noise(flat, -1.0, rng), InvalidArgument);
}

TEST_CASE("vertical images rotate 90 degrees counterclockwise") {
  ImageRgb wide(100, 40, {7, 7, 7});
  CHECK(rotate_if_vertical(wide).width == 100);
  CHECK(rotate_if_vertical(wide).pixels == wide.pixels);

  ImageRgb tall(40, 100, {7, 7, 7});
  tall.at(5, 7)[0] = 255;  // marker
  ImageRgb rot = rotate_if_vertical(tall);
  CHECK(rot.width == 100);
  CHECK(rot.height == 40);
  // Input (x, y) lands at (y, W-1-x) with W the input width.
  CHECK(rot.at(7, 40 - 1 - 5)[0] == 255);

  ImageRgb boundary(40, 60, {7, 7, 7});  // H/W = 1.5 exactly: stays put
  CHECK(rotate_if_vertical(boundary).width == 40);
  CHECK(rotate_if_vertical(boundary).height == 60);
}

TEST_CASE("dtaug applies compression with the configured probability") {
  AugPolicy policy;
  policy.compress_prob = 0.2;
  policy.noise_sigma = 0;  // keep the loop cheap
  ImageRgb img(16, 16, {90, 120, 150});
  int applied = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Rng rng(mix_seed(99, static_cast<uint64_t>(i)));
    AppliedAug log;
    dtaug_apply(img, policy, rng, &log);
    if (log.compressed) {
      ++applied;
      CHECK(log.quality >= policy.quality_lo);
      CHECK(log.quality <= policy.quality_hi);
    }
    CHECK(log.scale >= policy.resample_lo);
    CHECK(log.scale <= policy.resample_hi);
  }
  // Binomial(10000, 0.2): 2000 +- 3 * sqrt(10000 * 0.2 * 0.8) = +-120.
  CHECK(std::abs(applied - 2000) <= 120);
}

TEST_CASE("dtaug is deterministic and validates its policy") {
  ImageRgb patch = natural_patch();
  AugPolicy policy;
  Rng r1(31), r2(31);
  CHECK(dtaug_apply(patch, policy, r1).pixels == dtaug_apply(patch, policy, r2).pixels);

  AugPolicy bad = policy;
  bad.resample_lo = 0;
  Rng rng(1);
  CHECK_THROWS_AS(dtaug_apply(patch, bad, rng), InvalidArgument);
  bad = policy;
  bad.compress_prob = 1.5;
  CHECK_THROWS_AS(dtaug_apply(patch, bad, rng), InvalidArgument);
  bad = policy;
  bad.quality_lo = 2;
  CHECK_THROWS_AS(dtaug_apply(patch, bad, rng), InvalidArgument);
  bad = policy;
  bad.noise_sigma = -4;
  CHECK_THROWS_AS(dtaug_apply(patch, bad, rng), InvalidArgument);

  EngineConfig cfg = EngineConfig::defaults();
  AugPolicy from_cfg = AugPolicy::from_config(cfg);
  CHECK(from_cfg.resample_lo == doctest::Approx(0.1));
  CHECK(from_cfg.quality_hi == 95);
  cfg.set_kv("dtaug.resample_lo=0");
  CHECK_THROWS_AS(AugPolicy::from_config(cfg), InvalidArgument);
}
