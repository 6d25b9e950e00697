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

#ifndef UNIONST_CHARSET_HPP_
#define UNIONST_CHARSET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unionst/error.hpp"

namespace unionst {

// The engine alphabet: an ordered list of unique codepoints. The order is
// stable and the index doubles as the class id.
class Charset {
 public:
  // Default 94-entry set: digits 0-9, A-Z, a-z, then the 32 printable
  // ASCII punctuation characters in code order.
  static Charset engine_default() {
    std::u32string cps;
    for (char32_t c = U'0'; c <= U'9'; ++c) cps.push_back(c);
    for (char32_t c = U'A'; c <= U'Z'; ++c) cps.push_back(c);
    for (char32_t c = U'a'; c <= U'z'; ++c) cps.push_back(c);
    for (char32_t c = U'!'; c <= U'/'; ++c) cps.push_back(c);
    for (char32_t c = U':'; c <= U'@'; ++c) cps.push_back(c);
    for (char32_t c = U'['; c <= U'`'; ++c) cps.push_back(c);
    for (char32_t c = U'{'; c <= U'~'; ++c) cps.push_back(c);
    return Charset(cps);
  }

  explicit Charset(std::u32string codepoints) : codepoints_(std::move(codepoints)) {
    for (size_t i = 0; i < codepoints_.size(); ++i) {
      for (size_t j = i + 1; j < codepoints_.size(); ++j) {
        if (codepoints_[i] == codepoints_[j])
          throw InvalidArgument("charset entries must be unique");
      }
    }
  }

  size_t size() const { return codepoints_.size(); }
  char32_t at(size_t i) const { return codepoints_[i]; }
  const std::u32string& codepoints() const { return codepoints_; }

  bool contains(char32_t cp) const {
    return codepoints_.find(cp) != std::u32string::npos;
  }

  std::optional<size_t> index_of(char32_t cp) const {
    auto pos = codepoints_.find(cp);
    if (pos == std::u32string::npos) return std::nullopt;
    return pos;
  }

  // FNV-1a over the UTF-8 encoding; recorded in dataset manifests.
  uint64_t hash() const;

  std::string to_utf8() const;

 private:
  std::u32string codepoints_;
};

// FNV-1a 64, the repo-wide stable hash for manifests and content checks.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace unionst

#endif  // UNIONST_CHARSET_HPP_
