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

// In-process HiGHS backend. Requires linking against libhighs (target
// rmsa::highs).
//
// HiGHS has no indicator rows. Indicators are passed as the pair of
// inequalities implied by the variable bounds of their body,
//   L (1 - g) <= expr - rhs <= U (1 - g),
// with U and L the bound-derived extremes of expr - rhs. This is the
// tightest valid big-M and is independent of the M = LC + 1 used by
// linearize().

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <Highs.h>

#include "rmsa/backend.hpp"
#include "rmsa/error.hpp"
#include "rmsa/model.hpp"

namespace rmsa {

class HighsBackend final : public MilpBackend {
 public:
  std::string_view name() const override { return "highs"; }
  bool supports_indicators() const override { return true; }

  BackendResult solve(const IlpModel& model, int stage_rank,
                      const BackendLimits& limits) override {
    const std::size_t n = model.variables().size();
    if (n == 0) return solve_empty(model);

    HighsLp lp;
    lp.num_col_ = static_cast<HighsInt>(n);
    lp.col_cost_.assign(n, 0.0);
    lp.col_lower_.resize(n);
    lp.col_upper_.resize(n);
    lp.integrality_.assign(n, HighsVarType::kInteger);
    for (VarId v = 0; v < n; ++v) {
      lp.col_lower_[v] = static_cast<double>(model.variable(v).lower);
      lp.col_upper_[v] = static_cast<double>(model.variable(v).upper);
    }
    const ObjectiveStage& stage = model.stage(stage_rank);
    for (const Term& t : stage.expression) {
      lp.col_cost_[t.var] += static_cast<double>(t.coefficient);
    }
    lp.sense_ = stage.sense == ObjectiveSense::maximize ? ObjSense::kMaximize
                                                        : ObjSense::kMinimize;

    Rows rows;
    for (const LinearConstraint& c : model.linear()) rows.add(c);
    for (const IndicatorConstraint& ind : model.indicators()) {
      add_indicator(rows, model, ind);
    }
    lp.num_row_ = static_cast<HighsInt>(rows.lower.size());
    lp.row_lower_ = std::move(rows.lower);
    lp.row_upper_ = std::move(rows.upper);
    lp.a_matrix_.format_ = MatrixFormat::kRowwise;
    lp.a_matrix_.num_col_ = lp.num_col_;
    lp.a_matrix_.num_row_ = lp.num_row_;
    lp.a_matrix_.start_ = std::move(rows.start);
    lp.a_matrix_.index_ = std::move(rows.index);
    lp.a_matrix_.value_ = std::move(rows.value);

    const HighsInt threads = effective_threads(limits.threads);
    Highs highs;
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("time_limit", limits.time_limit_seconds);
    highs.setOptionValue("threads", threads);
    if (limits.seed) {
      highs.setOptionValue("random_seed", static_cast<HighsInt>(*limits.seed));
    }
    // Objectives are integral: any gap below 1 proves optimality, and a zero
    // relative gap keeps HiGHS from stopping early on large objectives.
    highs.setOptionValue("mip_rel_gap", 0.0);
    highs.setOptionValue("mip_abs_gap", 1e-6);

    if (highs.passModel(std::move(lp)) == HighsStatus::kError) {
      throw BackendError("highs: passModel rejected the model");
    }
    if (highs.run() == HighsStatus::kError) {
      throw BackendError("highs: run failed with model status " +
                         highs.modelStatusToString(highs.getModelStatus()));
    }

    const HighsModelStatus status = highs.getModelStatus();
    const HighsInfo& info = highs.getInfo();
    const bool has_point =
        info.primal_solution_status == kSolutionStatusFeasible;
    BackendResult result;
    result.detail = highs.modelStatusToString(status);
    if (has_point) {
      result.values = highs.getSolution().col_value;
      result.value = info.objective_function_value;
    }
    result.bound = info.mip_dual_bound;

    switch (status) {
      case HighsModelStatus::kOptimal:
        result.status = BackendStatus::optimal;
        result.bound = result.value;
        break;
      case HighsModelStatus::kInfeasible:
        result.status = BackendStatus::infeasible;
        result.values.clear();
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
        result.status = has_point ? BackendStatus::time_limit_with_incumbent
                                  : BackendStatus::time_limit_no_incumbent;
        break;
      default:
        throw BackendError("highs: unexpected model status '" + result.detail +
                           "'");
    }
    return result;
  }

 private:
  // HiGHS sizes one worker pool per process; it must be rebuilt before a run
  // that asks for a different thread count.
  static HighsInt effective_threads(int requested) {
    static std::mutex mu;
    static HighsInt current = 0;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const HighsInt want = static_cast<HighsInt>(
        std::clamp<unsigned>(static_cast<unsigned>(std::max(requested, 1)), 1u,
                             hw));
    std::lock_guard<std::mutex> lock(mu);
    if (current != 0 && current != want) Highs::resetGlobalScheduler(true);
    current = want;
    return want;
  }

  struct Rows {
    std::vector<double> lower, upper, value;
    std::vector<HighsInt> start{0}, index;

    void add(const std::vector<Term>& terms, double lo, double hi) {
      std::map<VarId, std::int64_t> merged;
      for (const Term& t : terms) merged[t.var] += t.coefficient;
      for (const auto& [var, coef] : merged) {
        if (coef == 0) continue;
        index.push_back(static_cast<HighsInt>(var));
        value.push_back(static_cast<double>(coef));
      }
      start.push_back(static_cast<HighsInt>(index.size()));
      lower.push_back(lo);
      upper.push_back(hi);
    }

    void add(const LinearConstraint& c) {
      const double rhs = static_cast<double>(c.rhs);
      switch (c.sense) {
        case Sense::less_equal: add(c.terms, -kHighsInf, rhs); break;
        case Sense::greater_equal: add(c.terms, rhs, kHighsInf); break;
        case Sense::equal: add(c.terms, rhs, rhs); break;
      }
    }
  };

  static void add_indicator(Rows& rows, const IlpModel& model,
                            const IndicatorConstraint& ind) {
    // Extremes of expr - rhs over the variable box.
    std::int64_t hi = -ind.body.rhs;
    std::int64_t lo = -ind.body.rhs;
    for (const Term& t : ind.body.terms) {
      const Variable& v = model.variable(t.var);
      const std::int64_t a = t.coefficient * v.lower;
      const std::int64_t b = t.coefficient * v.upper;
      hi += std::max(a, b);
      lo += std::min(a, b);
    }
    // guard_value 1: slack multiplies (1 - g); guard_value 0: multiplies g.
    const bool active_on_one = ind.guard_value == 1;
    auto row = [&](int sign, std::int64_t slack) {
      if (slack <= 0) return;  // already implied by the bounds
      std::vector<Term> terms;
      for (const Term& t : ind.body.terms) {
        terms.push_back({sign * t.coefficient, t.var});
      }
      // sign * (expr - rhs) <= slack * (1 - g)  or  <= slack * g
      terms.push_back({active_on_one ? slack : -slack, ind.guard});
      const std::int64_t rhs = sign * ind.body.rhs + (active_on_one ? slack : 0);
      rows.add(terms, -kHighsInf, static_cast<double>(rhs));
    };
    if (ind.body.sense != Sense::greater_equal) row(+1, hi);
    if (ind.body.sense != Sense::less_equal) row(-1, -lo);
  }

  static BackendResult solve_empty(const IlpModel& model) {
    for (const LinearConstraint& c : model.linear()) {
      if (!holds(c, {}, 1e-9)) {
        BackendResult r;
        r.status = BackendStatus::infeasible;
        r.detail = "constant row " + c.name + " is violated";
        return r;
      }
    }
    BackendResult r;
    r.status = BackendStatus::optimal;
    r.value = 0.0;
    r.bound = 0.0;
    r.detail = "empty model";
    return r;
  }
};

}  // namespace rmsa
