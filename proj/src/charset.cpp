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

#include "unionst/charset.hpp"

#include "unionst/utf8.hpp"

namespace unionst {

uint64_t Charset::hash() const { return fnv1a64(to_utf8()); }

std::string Charset::to_utf8() const {
  std::string out;
  for (char32_t cp : codepoints_) utf8::append(out, cp);
  return out;
}

}  // namespace unionst
