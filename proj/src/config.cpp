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

#include "unionst/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "unionst/charset.hpp"
#include "unionst/error.hpp"

namespace unionst {

EngineConfig EngineConfig::defaults() {
  EngineConfig cfg;
  auto& v = cfg.values_;

  v["seed"] = "42";
  v["count"] = "1000";
  v["workers"] = "0";  // 0 = hardware concurrency
  v["out.height"] = "64";
  v["out.packed"] = "false";

  // Resource paths. Empty string means "use the bundled data/ fallback"
  // resolved by the CLI relative to the executable or UNIONST_DATA.
  v["fonts.dir"] = "";
  v["fonts.catalog"] = "";
  // Case-filter: a letter pair "coincides" when the size-normalized mean
  // alpha difference is below eps; a font fails when more than
  // max_coinciding of the 26 pairs coincide.
  v["fontfilter.eps"] = "0.02";
  v["fontfilter.max_coinciding"] = "20";
  v["backgrounds.dir"] = "";
  v["colormap.path"] = "";

  // Corpus pools and sampling weights.
  v["corpus.words"] = "";
  v["corpus.phrases"] = "";
  v["corpus.source"] = "";
  v["corpus.pseudo"] = "";  // predictions file; enables the Pseudo category
  v["corpus.w_common"] = "1.0";
  v["corpus.w_contextless"] = "0.3";
  v["corpus.w_incomplete"] = "0.2";
  v["corpus.w_multiwords"] = "0.5";
  v["corpus.w_pseudo"] = "0.0";
  v["corpus.ctxless_min"] = "2";
  v["corpus.ctxless_max"] = "25";
  v["corpus.ctxless_per_len"] = "400";
  v["corpus.substr_per_len"] = "200";

  // Text rendering size (em pixels) before any output resize.
  v["text.size_lo"] = "28";
  v["text.size_hi"] = "48";

  // Layout policy.
  v["curve.prob"] = "0.35";
  v["curve.radius_min"] = "20";
  v["curve.radius_max"] = "200";
  v["orient.prob"] = "0.25";
  v["vertical.prob"] = "0.05";
  v["size.jitter_lo"] = "0.7";
  v["size.jitter_hi"] = "1.3";
  v["script.prob"] = "0.1";

  // Text effects.
  v["effect.border_prob"] = "0.2";
  v["effect.shadow_prob"] = "0.2";
  v["effect.emboss_prob"] = "0.1";
  v["effect.elastic_prob"] = "0.3";
  v["effect.perspective_prob"] = "0.5";
  v["effect.per_char"] = "false";

  // Mid-ground clutter and composition.
  v["midground.max"] = "3";
  v["midground.ratio_lo"] = "0.3";
  v["midground.ratio_hi"] = "2.0";
  v["crop.margin_lo"] = "0.02";
  v["crop.margin_hi"] = "0.15";
  v["filter.contrast_min"] = "24";

  // Offline degradations.
  v["dtaug.enable"] = "false";
  v["dtaug.resample_lo"] = "0.1";
  v["dtaug.resample_hi"] = "1.0";
  v["dtaug.compress_prob"] = "0.2";
  v["dtaug.quality_lo"] = "10";
  v["dtaug.quality_hi"] = "95";
  v["dtaug.noise_sigma"] = "4";
  v["rotate.vertical"] = "true";

  return cfg;
}

EngineConfig EngineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  EngineConfig cfg = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void EngineConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  it->second = value;
}

void EngineConfig::set_kv(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key=value, got: " + assignment);
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

const std::string& EngineConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  return it->second;
}

double EngineConfig::f64(const std::string& key) const {
  const std::string& s = str(key);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not a number: " + s);
  return v;
}

int64_t EngineConfig::i64(const std::string& key) const {
  const std::string& s = str(key);
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not an integer: " + s);
  return v;
}

uint64_t EngineConfig::u64(const std::string& key) const {
  const std::string& s = str(key);
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + " is not an integer: " + s);
  return v;
}

bool EngineConfig::boolean(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + s);
}

std::string EngineConfig::canonical_dump() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << "=" << v << "\n";
  return out.str();
}

uint64_t EngineConfig::hash() const { return fnv1a64(canonical_dump()); }

}  // namespace unionst
