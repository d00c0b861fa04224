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

// File-based backend: export LP, run an external solver executable, read
// back its solution file.
//
// The command is a template with the placeholders
//   {model} {solution} {time_limit} {threads} {seed}
// expanded to shell-quoted values. The solution file must use the HiGHS
// "raw" solution format (`highs --solution_file`), i.e.
//
//   Model status
//   Optimal
//
//   # Primal solution values
//   Feasible
//   Objective 3
//   # Columns 4
//   x_d0_s0 1
//   ...

#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rmsa/backend.hpp"
#include "rmsa/error.hpp"
#include "rmsa/model.hpp"
#include "rmsa/model_io.hpp"

namespace rmsa {

inline constexpr std::string_view kDefaultExternalCommand =
    "highs --model_file {model} --solution_file {solution} "
    "--time_limit {time_limit}";

struct ExternalSolverOptions {
  std::string command = std::string(kDefaultExternalCommand);
  std::filesystem::path work_dir = std::filesystem::temp_directory_path();
  bool keep_files = false;
  // Set when the solver reads CPLEX-LP indicator rows.
  bool lp_indicators = false;
};

// Parses a HiGHS raw solution file. Column values are matched by name.
inline BackendResult parse_highs_solution(std::istream& in,
                                          const IlpModel& model) {
  std::unordered_map<std::string, VarId> by_name;
  for (VarId v = 0; v < model.variables().size(); ++v) {
    by_name.emplace(model.variable(v).name, v);
  }
  BackendResult result;
  std::string line;
  std::string model_status;
  bool feasible = false;
  std::vector<double> values(model.variables().size(), 0.0);
  std::vector<bool> seen(model.variables().size(), false);

  while (std::getline(in, line)) {
    if (line == "Model status") {
      std::getline(in, model_status);
    } else if (line == "# Primal solution values") {
      std::string state;
      std::getline(in, state);
      feasible = state == "Feasible";
      if (!feasible) continue;
      std::getline(in, line);
      std::istringstream obj(line);
      std::string word;
      obj >> word >> result.value;
      if (word != "Objective") {
        throw BackendError("solution file: expected 'Objective', got '" +
                           line + "'");
      }
      std::getline(in, line);
      std::istringstream head(line);
      std::string hash, columns;
      std::size_t count = 0;
      head >> hash >> columns >> count;
      if (columns != "Columns") {
        throw BackendError("solution file: expected '# Columns', got '" +
                           line + "'");
      }
      for (std::size_t i = 0; i < count && std::getline(in, line); ++i) {
        std::istringstream row(line);
        std::string name;
        double value = 0.0;
        if (!(row >> name >> value)) {
          throw BackendError("solution file: bad column line '" + line + "'");
        }
        auto it = by_name.find(name);
        if (it == by_name.end()) {
          throw BackendError("solution file: unknown column '" + name + "'");
        }
        values[it->second] = value;
        seen[it->second] = true;
      }
    }
  }
  result.detail = model_status;
  if (model_status.empty()) {
    throw BackendError("solution file has no model status");
  }
  if (feasible) {
    for (VarId v = 0; v < seen.size(); ++v) {
      if (!seen[v]) {
        throw BackendError("solution file misses column " +
                           model.variable(v).name);
      }
    }
    result.values = std::move(values);
  }
  if (model_status == "Optimal") {
    if (!feasible && !model.variables().empty()) {
      throw BackendError("solver reported optimal without a primal solution");
    }
    result.status = BackendStatus::optimal;
    if (model.variables().empty()) result.value = 0.0;
    result.bound = result.value;
  } else if (model_status == "Infeasible") {
    result.status = BackendStatus::infeasible;
    result.values.clear();
  } else if (model_status == "Time limit reached" ||
             model_status == "Iteration limit reached" ||
             model_status == "Solution limit reached" ||
             model_status == "Interrupted by user") {
    result.status = feasible ? BackendStatus::time_limit_with_incumbent
                             : BackendStatus::time_limit_no_incumbent;
  } else {
    throw BackendError("solver finished with status '" + model_status + "'");
  }
  return result;
}

class ExternalSolverBackend final : public MilpBackend {
 public:
  explicit ExternalSolverBackend(ExternalSolverOptions options = {})
      : options_(std::move(options)) {}

  std::string_view name() const override { return "external"; }
  bool supports_indicators() const override { return options_.lp_indicators; }

  BackendResult solve(const IlpModel& model, int stage_rank,
                      const BackendLimits& limits) override {
    if (!model.indicators().empty() && !options_.lp_indicators) {
      throw BackendError(
          "external solver is not configured for indicator rows");
    }
    const std::string stem = unique_stem();
    const auto lp = options_.work_dir / (stem + ".lp");
    const auto sol = options_.work_dir / (stem + ".sol");
    const auto log = options_.work_dir / (stem + ".log");
    std::filesystem::create_directories(options_.work_dir);
    export_model(model, lp, ModelFormat::lp, stage_rank);

    std::string cmd = expand(options_.command, lp, sol, limits);
    cmd += " > " + quote(log.string()) + " 2>&1";
    const int rc = std::system(cmd.c_str());

    std::ifstream in(sol);
    if (!in) {
      const std::string tail = read_tail(log);
      cleanup({lp, sol, log});
      throw BackendError("external solver produced no solution file (exit " +
                         std::to_string(rc) + "): " + tail);
    }
    BackendResult result;
    try {
      result = parse_highs_solution(in, model);
    } catch (...) {
      in.close();
      cleanup({lp, sol, log});
      throw;
    }
    in.close();
    cleanup({lp, sol, log});
    return result;
  }

  static std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
      if (c == '\'') {
        out += "'\\''";
      } else {
        out += c;
      }
    }
    return out + "'";
  }

 private:
  std::string expand(const std::string& tmpl, const std::filesystem::path& lp,
                     const std::filesystem::path& sol,
                     const BackendLimits& limits) const {
    const std::unordered_map<std::string, std::string> values = {
        {"model", quote(lp.string())},
        {"solution", quote(sol.string())},
        {"time_limit", std::to_string(limits.time_limit_seconds)},
        {"threads", std::to_string(limits.threads)},
        {"seed", std::to_string(limits.seed.value_or(0))},
    };
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
      if (tmpl[i] == '{') {
        const auto close = tmpl.find('}', i);
        if (close != std::string::npos) {
          auto it = values.find(tmpl.substr(i + 1, close - i - 1));
          if (it != values.end()) {
            out += it->second;
            i = close;
            continue;
          }
        }
      }
      out += tmpl[i];
    }
    return out;
  }

  static std::string unique_stem() {
    static std::atomic<unsigned long> counter{0};
    static const unsigned long salt = std::random_device{}();
    return "rmsa_" + std::to_string(salt) + "_" + std::to_string(++counter);
  }

  static std::string read_tail(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (text.size() > 400) text = text.substr(text.size() - 400);
    return text;
  }

  void cleanup(std::initializer_list<std::filesystem::path> files) const {
    if (options_.keep_files) return;
    std::error_code ec;
    for (const auto& f : files) std::filesystem::remove(f, ec);
  }

  ExternalSolverOptions options_;
};

}  // namespace rmsa
