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

#ifndef UNIONST_CONFIG_HPP_
#define UNIONST_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

namespace unionst {

// Flat key=value engine configuration. Every key has a documented default
// (see defaults() in config.cpp); setting or loading an unknown key is a
// ConfigError so sweep typos fail fast instead of silently no-opping.
class EngineConfig {
 public:
  // The full default table.
  static EngineConfig defaults();

  // defaults() overlaid with `key = value` lines from a UTF-8 file.
  // '#' starts a comment; blank lines are ignored.
  static EngineConfig load_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  // Parses a single "key=value" override (the CLI --set flag).
  void set_kv(const std::string& assignment);

  const std::string& str(const std::string& key) const;
  double f64(const std::string& key) const;
  int64_t i64(const std::string& key) const;
  uint64_t u64(const std::string& key) const;
  bool boolean(const std::string& key) const;

  // Sorted "key=value\n" dump; hashed into dataset manifests so any
  // config change is visible downstream.
  std::string canonical_dump() const;
  uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  EngineConfig() = default;
  std::map<std::string, std::string> values_;
};

}  // namespace unionst

#endif  // UNIONST_CONFIG_HPP_
