// Copyright 2026 The rmsa-bp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rmsa {

// A structurally valid input that breaks a domain invariant (self-loop,
// unknown node, duplicate id, ...).
class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input text. `line` is 1-based; 0 when the location is a field
// path rather than a text position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, std::string field,
             const std::string& message)
      : std::runtime_error(format(source, line, field, message)),
        source_(std::move(source)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& field,
                            const std::string& message) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": field '" + field + "'";
    out += ": " + message;
    return out;
  }

  std::string source_;
  std::size_t line_;
  std::string field_;
};

// Raised when an enumeration guard or an oracle limit would have to cut the
// search short. Exactness forbids returning a partial answer instead.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// MILP backend failures, surfaced verbatim.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver output that does not satisfy the model it claims to solve.
class InconsistentSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmsa
