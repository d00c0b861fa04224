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

// Lexicographic solve driver and assignment extraction.
//
// Stages are solved in rank order. After a stage is proven optimal its
// expression is pinned to the optimum by an equality row before the next
// stage runs; all stage objectives are integral, so the pin is exact. A
// stage that stops on the time limit ends the run and later stages are
// reported as skipped.

#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmsa/backend.hpp"
#include "rmsa/error.hpp"
#include "rmsa/model.hpp"
#include "rmsa/preprocess.hpp"

namespace rmsa {

enum class SolveMode { indicator, big_m };

inline const char* to_string(SolveMode m) {
  return m == SolveMode::indicator ? "indicator" : "bigm";
}

struct SolverConfig {
  std::string backend = "highs";
  int threads = 32;
  double stage_time_limit_seconds = 600.0;
  SolveMode mode = SolveMode::indicator;
  std::optional<int> seed;
  // Command template for the "external" backend; see external_backend.hpp.
  std::string external_command;

  void validate() const {
    if (threads < 1) throw std::invalid_argument("thread cap must be >= 1");
    if (!(stage_time_limit_seconds > 0.0)) {
      throw std::invalid_argument("stage time limit must be positive");
    }
  }

  BackendLimits limits() const {
    return BackendLimits{stage_time_limit_seconds, threads, seed};
  }
};

enum class StageStatus {
  optimal,
  timeout_with_incumbent,
  timeout_no_incumbent,
  skipped,
};

inline const char* to_string(StageStatus s) {
  switch (s) {
    case StageStatus::optimal: return "optimal";
    case StageStatus::timeout_with_incumbent: return "timeout_with_incumbent";
    case StageStatus::timeout_no_incumbent: return "timeout_no_incumbent";
    case StageStatus::skipped: return "skipped";
  }
  return "?";
}

struct StageReport {
  int rank = 1;
  StageStatus status = StageStatus::skipped;
  std::optional<std::int64_t> value;
  std::optional<double> bound;
  double wall_seconds = 0.0;
};

// (admitted demands, total regenerators, total frequency slots)
struct ObjectiveVector {
  std::int64_t admitted = 0;
  std::int64_t regenerators = 0;
  std::int64_t slots = 0;

  friend bool operator==(const ObjectiveVector&,
                         const ObjectiveVector&) = default;
};

// Strictly better under (max admitted, min regenerators, min slots).
inline bool lex_better(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.admitted != b.admitted) return a.admitted > b.admitted;
  if (a.regenerators != b.regenerators) return a.regenerators < b.regenerators;
  return a.slots < b.slots;
}

inline bool lex_no_worse(const ObjectiveVector& a, const ObjectiveVector& b) {
  return !lex_better(b, a);
}

inline std::string to_string(const ObjectiveVector& v) {
  return "(" + std::to_string(v.admitted) + ", " +
         std::to_string(v.regenerators) + ", " + std::to_string(v.slots) + ")";
}

struct AdmittedRoute {
  std::size_t solution_index = 0;  // position in Solutions(d)
  RoutingSolution solution;
  std::map<LinkIndex, int> start_slot;  // z_d^e, keys = links used
};

struct Assignment {
  // One entry per demand; nullopt means blocked.
  std::vector<std::optional<AdmittedRoute>> routes;

  std::size_t demand_count() const { return routes.size(); }
  std::size_t admitted_count() const {
    std::size_t n = 0;
    for (const auto& r : routes) n += r.has_value();
    return n;
  }
};

inline Assignment all_blocked(std::size_t demand_count) {
  Assignment a;
  a.routes.resize(demand_count);
  return a;
}

inline ObjectiveVector objective_of(const Assignment& a) {
  ObjectiveVector v;
  for (const auto& r : a.routes) {
    if (!r) continue;
    ++v.admitted;
    v.regenerators += r->solution.reg_count;
    v.slots += r->solution.total_fs;
  }
  return v;
}

struct SolveReport {
  std::array<StageReport, 3> stages{};
  ObjectiveVector objective;
  Assignment assignment;

  bool all_optimal() const {
    for (const StageReport& s : stages) {
      if (s.status != StageStatus::optimal) return false;
    }
    return true;
  }
  double wall_seconds() const {
    return stages[0].wall_seconds + stages[1].wall_seconds +
           stages[2].wall_seconds;
  }
};

// Maps a model point to per-demand outcomes. Throws InconsistentSolution when
// the point is not an integral feasible point of `model`.
inline Assignment extract_assignment(const IlpModel& model,
                                     const SolutionCatalog& solutions,
                                     std::span<const double> values) {
  if (auto why = model.violation(values)) {
    throw InconsistentSolution("solver point rejected: " + *why);
  }
  Assignment out = all_blocked(model.demand_count());
  for (DemandIndex d = 0; d < model.demand_count(); ++d) {
    const auto& sols = solutions.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      const auto x = model.choice_var(d, s);
      if (!x || std::lround(values[*x]) != 1) continue;
      if (out.routes[d]) {
        throw InconsistentSolution("demand " + std::to_string(d) +
                                   " selects more than one solution");
      }
      AdmittedRoute route;
      route.solution_index = s;
      route.solution = sols[s];
      for (const LinkNeed& need : sols[s].link_need) {
        const auto z = model.start_slot_var(d, need.link);
        if (!z) {
          throw InconsistentSolution("no start-slot variable for a used link");
        }
        route.start_slot[need.link] = static_cast<int>(std::lround(values[*z]));
      }
      out.routes[d] = std::move(route);
    }
  }
  return out;
}

// The model point corresponding to `assignment`: choice and start-slot
// variables copied, order switches set so that R3-R5 hold whenever the
// occupied intervals are disjoint.
inline std::vector<double> encode_assignment(const IlpModel& model,
                                             const Assignment& assignment) {
  std::vector<double> values(model.variables().size(), 0.0);
  auto z_of = [&](DemandIndex d, LinkIndex e) -> std::int64_t {
    const auto& r = assignment.routes.at(d);
    if (!r) return 0;
    auto it = r->start_slot.find(e);
    return it == r->start_slot.end() ? 0 : it->second;
  };
  auto need_of = [&](DemandIndex d, LinkIndex e) -> std::int64_t {
    const auto& r = assignment.routes.at(d);
    return r ? r->solution.need_on(e) : 0;
  };
  for (VarId v = 0; v < model.variables().size(); ++v) {
    const Variable& var = model.variable(v);
    switch (var.kind) {
      case VarKind::choice: {
        const auto& r = assignment.routes.at(var.demand);
        values[v] = r && r->solution_index == var.solution ? 1.0 : 0.0;
        break;
      }
      case VarKind::start_slot:
        values[v] = static_cast<double>(z_of(var.demand, var.link));
        break;
      case VarKind::order: {
        // o(a,b) = 0 iff a's block ends before b's starts.
        const DemandIndex a = var.demand, b = var.other;
        const bool a_first = z_of(a, var.link) + need_of(a, var.link) <=
                             z_of(b, var.link);
        const bool b_first = z_of(b, var.link) + need_of(b, var.link) <=
                             z_of(a, var.link);
        // When both hold (one side unused) prefer the orientation for the
        // pair's lower-indexed demand so exactly one switch is set.
        const bool a_before_b = a_first && (!b_first || a < b);
        values[v] = a_before_b ? 0.0 : 1.0;
        break;
      }
    }
  }
  return values;
}

// Copy of `model` with stage k's expression pinned to fixed[k - 1] for every
// given prior stage.
inline IlpModel with_stage_fixes(const IlpModel& model,
                                 std::span<const std::int64_t> fixed) {
  IlpModel out = model;
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    const ObjectiveStage& stage = model.stage(static_cast<int>(k) + 1);
    if (stage.expression.empty()) continue;
    out.add(LinearConstraint{stage.expression, Sense::equal, fixed[k],
                             Family::stage_fix,
                             "FIX_stage" + std::to_string(stage.rank)});
  }
  return out;
}

// The model as handed to the backend under the configured mode.
inline IlpModel prepare_for_mode(const IlpModel& model,
                                 const SolverConfig& config,
                                 const MilpBackend& backend) {
  if (config.mode == SolveMode::big_m) return linearize(model);
  if (!model.indicators().empty() && !backend.supports_indicators()) {
    throw BackendError("backend '" + std::string(backend.name()) +
                       "' does not support indicator constraints; use bigM "
                       "mode");
  }
  return model;
}

struct StageOutcome {
  StageReport report;
  std::vector<double> values;
};

// Solves stage `rank` of `model` (already prepared for the mode) with the
// earlier stages pinned to `fixed_prior`.
inline StageOutcome solve_stage(const IlpModel& model, MilpBackend& backend,
                                const SolverConfig& config, int rank,
                                std::span<const std::int64_t> fixed_prior) {
  const IlpModel working = with_stage_fixes(model, fixed_prior);
  const auto t0 = std::chrono::steady_clock::now();
  BackendResult r = backend.solve(working, rank, config.limits());
  const auto t1 = std::chrono::steady_clock::now();

  StageOutcome out;
  out.report.rank = rank;
  out.report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  auto integral = [&](double x) {
    const double rounded = std::round(x);
    if (std::abs(x - rounded) > 1e-5) {
      throw InconsistentSolution("stage " + std::to_string(rank) +
                                 " objective " + std::to_string(x) +
                                 " is not integral");
    }
    return static_cast<std::int64_t>(rounded);
  };
  switch (r.status) {
    case BackendStatus::optimal:
      out.report.status = StageStatus::optimal;
      if (r.has_point()) {
        out.report.value = integral(working.stage_value(rank, r.values));
      } else if (working.variables().empty()) {
        out.report.value = 0;
      } else {
        throw BackendError("backend reported optimal without a solution");
      }
      out.report.bound = static_cast<double>(*out.report.value);
      break;
    case BackendStatus::time_limit_with_incumbent:
      out.report.status = StageStatus::timeout_with_incumbent;
      out.report.value = integral(working.stage_value(rank, r.values));
      if (!std::isnan(r.bound)) out.report.bound = r.bound;
      break;
    case BackendStatus::time_limit_no_incumbent:
      out.report.status = StageStatus::timeout_no_incumbent;
      if (!std::isnan(r.bound)) out.report.bound = r.bound;
      break;
    case BackendStatus::infeasible:
      // The all-zero point satisfies every built model and its stage pins.
      throw BackendError("backend '" + std::string(backend.name()) +
                         "' reported stage " + std::to_string(rank) +
                         " infeasible (" + r.detail + ")");
  }
  out.values = std::move(r.values);
  return out;
}

inline SolveReport lexicographic_solve(const IlpModel& model,
                                       const SolutionCatalog& solutions,
                                       const SolverConfig& config,
                                       MilpBackend& backend) {
  config.validate();
  const IlpModel prepared = prepare_for_mode(model, config, backend);

  SolveReport report;
  for (int k = 0; k < 3; ++k) report.stages[k].rank = k + 1;
  std::vector<std::int64_t> fixed;
  std::vector<double> best;
  for (int rank = 1; rank <= 3; ++rank) {
    StageOutcome outcome = solve_stage(prepared, backend, config, rank, fixed);
    report.stages[rank - 1] = outcome.report;
    if (!outcome.values.empty()) best = std::move(outcome.values);
    if (outcome.report.status != StageStatus::optimal) break;
    fixed.push_back(*outcome.report.value);
  }

  report.assignment = best.empty() && !model.variables().empty()
                          ? all_blocked(model.demand_count())
                          : extract_assignment(model, solutions, best);
  report.objective = objective_of(report.assignment);

  // The extracted assignment must reproduce every proven stage optimum.
  const std::int64_t achieved[3] = {report.objective.admitted,
                                    report.objective.regenerators,
                                    report.objective.slots};
  for (int k = 0; k < 3; ++k) {
    const StageReport& s = report.stages[k];
    if (s.status == StageStatus::optimal && *s.value != achieved[k]) {
      throw InconsistentSolution(
          "stage " + std::to_string(k + 1) + " optimum " +
          std::to_string(*s.value) + " differs from the extracted assignment");
    }
  }
  return report;
}

}  // namespace rmsa
