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

// Backend lookup by name. "highs" is available when compiled with
// RMSA_HAVE_HIGHS (link rmsa::highs); "external" always is.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rmsa/backend.hpp"
#include "rmsa/error.hpp"
#include "rmsa/external_backend.hpp"
#include "rmsa/solve.hpp"

#if defined(RMSA_HAVE_HIGHS)
#include "rmsa/highs_backend.hpp"
#endif

namespace rmsa {

inline std::vector<std::string> available_backends() {
  std::vector<std::string> names;
#if defined(RMSA_HAVE_HIGHS)
  names.emplace_back("highs");
#endif
  names.emplace_back("external");
  return names;
}

inline std::unique_ptr<MilpBackend> make_backend(const SolverConfig& config) {
#if defined(RMSA_HAVE_HIGHS)
  if (config.backend == "highs") return std::make_unique<HighsBackend>();
#endif
  if (config.backend == "external") {
    ExternalSolverOptions options;
    if (!config.external_command.empty()) {
      options.command = config.external_command;
    }
    return std::make_unique<ExternalSolverBackend>(std::move(options));
  }
  throw BackendError("unknown or unavailable backend '" + config.backend + "'");
}

}  // namespace rmsa
