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

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmsa/model.hpp"

namespace rmsa {

enum class BackendStatus {
  optimal,
  infeasible,
  time_limit_with_incumbent,
  time_limit_no_incumbent,
};

inline const char* to_string(BackendStatus s) {
  switch (s) {
    case BackendStatus::optimal: return "optimal";
    case BackendStatus::infeasible: return "infeasible";
    case BackendStatus::time_limit_with_incumbent:
      return "time_limit_with_incumbent";
    case BackendStatus::time_limit_no_incumbent:
      return "time_limit_no_incumbent";
  }
  return "?";
}

struct BackendLimits {
  double time_limit_seconds = 600.0;
  int threads = 32;
  std::optional<int> seed;
};

struct BackendResult {
  BackendStatus status = BackendStatus::infeasible;
  // Objective of the returned point; NaN without one.
  double value = std::numeric_limits<double>::quiet_NaN();
  // Best proven bound; NaN when the backend does not report one.
  double bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;
  std::string detail;

  bool has_point() const { return !values.empty(); }
};

// A MILP solver able to optimize one objective stage of an IlpModel.
//
// Contract: `optimal` is returned only for proven optimality; anything less
// is reported as a time-limit status. Backends that cannot express a
// constraint type throw BackendError rather than dropping it.
class MilpBackend {
 public:
  virtual ~MilpBackend() = default;

  virtual std::string_view name() const = 0;
  virtual bool supports_indicators() const = 0;

  virtual BackendResult solve(const IlpModel& model, int stage_rank,
                              const BackendLimits& limits) = 0;
};

}  // namespace rmsa
