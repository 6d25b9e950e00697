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

#ifndef UNIONST_PNG_IO_HPP_
#define UNIONST_PNG_IO_HPP_

#include <string>
#include <vector>

#include "unionst/image.hpp"

namespace unionst {

// Lossless storage. Degradations are baked into pixels upstream; the
// storage format never adds loss of its own.
std::vector<uint8_t> encode_png(const ImageRgb& image);
void write_png(const std::string& path, const ImageRgb& image);

ImageRgb decode_png(const std::vector<uint8_t>& bytes);
ImageRgb read_png(const std::string& path);

}  // namespace unionst

#endif  // UNIONST_PNG_IO_HPP_
