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

#ifndef UNIONST_ERROR_HPP_
#define UNIONST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace unionst {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// process exit codes (config 2, io 3, generation 4).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The drawn background cannot host the requested crop; the caller should
// redraw with a different background or layout.
class SkipBackground : public GenerationError {
 public:
  explicit SkipBackground(const std::string& msg) : GenerationError(msg) {}
};

// No font in the catalog supports the requested text.
class NoFontError : public std::runtime_error {
 public:
  explicit NoFontError(const std::string& msg) : std::runtime_error(msg) {}
};

// A font was asked to render a codepoint it does not map.
class NoGlyphError : public std::runtime_error {
 public:
  explicit NoGlyphError(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated operation precondition does not hold for the given inputs.
class PreconditionViolation : public std::logic_error {
 public:
  explicit PreconditionViolation(const std::string& msg) : std::logic_error(msg) {}
};

// Prediction ids of a refinement round differ from the round-0 universe.
class UniverseError : public std::runtime_error {
 public:
  explicit UniverseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace unionst

#endif  // UNIONST_ERROR_HPP_
