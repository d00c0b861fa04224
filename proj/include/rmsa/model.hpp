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

// The solution-based ILP.
//
// Variables
//   x_d{D}_s{S}       binary, demand D uses routing solution S
//   z_d{D}_e{E}       integer in [0, LC], first slot of D on link E (0: unused)
//   o_d{D}_d{D'}_e{E} binary, ordering switch for the pair (D, D') on link E
//
// With U(d,e) = sum_s X(d,e,s) x_d^s and N(d,e) = sum_s need(d,e,s) x_d^s:
//   R1    sum_s x_d^s <= 1
//   R2    x_d^s = 1  =>  z_d^e - z_d^{first link of p} = 0, for e in p != first
//   ZLB   z_d^e >= U(d,e)
//   ZUB   z_d^e <= LC * U(d,e)
//   ZFIT  z_d^e + N(d,e) - U(d,e) <= LC
//   R3    o(d,d',e) + o(d',d,e) <= 1
//   R4    z_d^e + N(d,e) <= z_d'^e + M o(d,d',e)
//   R5    z_d'^e + N(d',e) <= z_d^e + M o(d',d,e)          with M = LC + 1
//
// Objectives are three ranked stages (max admitted, min regenerators, min
// slots), never a weighted sum.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rmsa/instance.hpp"
#include "rmsa/preprocess.hpp"
#include "rmsa/segments.hpp"

namespace rmsa {

using VarId = std::size_t;

enum class VarKind { choice, start_slot, order };

struct Variable {
  VarKind kind = VarKind::choice;
  DemandIndex demand = 0;
  std::size_t solution = 0;  // choice only
  LinkIndex link = 0;        // start_slot and order
  DemandIndex other = 0;     // order only: the second demand of the pair
  std::int64_t lower = 0;
  std::int64_t upper = 1;
  std::string name;

  bool is_binary() const { return lower == 0 && upper == 1; }
};

enum class Sense { less_equal, equal, greater_equal };

enum class Family { r1, r2, r3, r4, r5, zlb, zub, zfit, stage_fix };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::r1: return "R1";
    case Family::r2: return "R2";
    case Family::r3: return "R3";
    case Family::r4: return "R4";
    case Family::r5: return "R5";
    case Family::zlb: return "ZLB";
    case Family::zub: return "ZUB";
    case Family::zfit: return "ZFIT";
    case Family::stage_fix: return "FIX";
  }
  return "?";
}

struct Term {
  std::int64_t coefficient = 0;
  VarId var = 0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  std::int64_t rhs = 0;
  Family family = Family::r1;
  std::string name;
};

// guard == guard_value  =>  body holds
struct IndicatorConstraint {
  VarId guard = 0;
  int guard_value = 1;
  LinearConstraint body;
};

enum class ObjectiveSense { maximize, minimize };

struct ObjectiveStage {
  int rank = 1;
  ObjectiveSense sense = ObjectiveSense::maximize;
  std::vector<Term> expression;
  std::string label;
};

inline double evaluate(std::span<const Term> terms,
                       std::span<const double> values) {
  double sum = 0.0;
  for (const Term& t : terms) {
    sum += static_cast<double>(t.coefficient) * values[t.var];
  }
  return sum;
}

inline bool holds(const LinearConstraint& c, std::span<const double> values,
                  double tol) {
  const double lhs = evaluate(c.terms, values);
  const double rhs = static_cast<double>(c.rhs);
  switch (c.sense) {
    case Sense::less_equal: return lhs <= rhs + tol;
    case Sense::greater_equal: return lhs >= rhs - tol;
    case Sense::equal: return std::abs(lhs - rhs) <= tol;
  }
  return false;
}

class IlpModel {
 public:
  IlpModel() = default;
  IlpModel(std::size_t demand_count, std::size_t link_count, int slot_capacity)
      : demand_count_(demand_count),
        link_count_(link_count),
        slot_capacity_(slot_capacity) {
    stages_[0] = {1, ObjectiveSense::maximize, {}, "admitted"};
    stages_[1] = {2, ObjectiveSense::minimize, {}, "regenerators"};
    stages_[2] = {3, ObjectiveSense::minimize, {}, "slots"};
  }

  std::size_t demand_count() const noexcept { return demand_count_; }
  std::size_t link_count() const noexcept { return link_count_; }
  int slot_capacity() const noexcept { return slot_capacity_; }
  std::int64_t big_m() const noexcept { return slot_capacity_ + 1; }

  const std::vector<Variable>& variables() const noexcept { return vars_; }
  const Variable& variable(VarId v) const { return vars_.at(v); }
  const std::vector<LinearConstraint>& linear() const noexcept {
    return linear_;
  }
  const std::vector<IndicatorConstraint>& indicators() const noexcept {
    return indicators_;
  }
  const std::array<ObjectiveStage, 3>& stages() const noexcept {
    return stages_;
  }
  const ObjectiveStage& stage(int rank) const { return stages_.at(rank - 1); }
  ObjectiveStage& stage(int rank) { return stages_.at(rank - 1); }

  VarId add_variable(Variable v) {
    const VarId id = vars_.size();
    switch (v.kind) {
      case VarKind::choice: choice_[{v.demand, v.solution}] = id; break;
      case VarKind::start_slot: start_[{v.demand, v.link}] = id; break;
      case VarKind::order: order_[{v.demand, v.other, v.link}] = id; break;
    }
    vars_.push_back(std::move(v));
    return id;
  }
  void add(LinearConstraint c) { linear_.push_back(std::move(c)); }
  void add(IndicatorConstraint c) { indicators_.push_back(std::move(c)); }
  void clear_indicators() { indicators_.clear(); }

  std::optional<VarId> choice_var(DemandIndex d, std::size_t s) const {
    return lookup(choice_, std::pair{d, s});
  }
  std::optional<VarId> start_slot_var(DemandIndex d, LinkIndex e) const {
    return lookup(start_, std::pair{d, e});
  }
  std::optional<VarId> order_var(DemandIndex d, DemandIndex d2,
                                 LinkIndex e) const {
    return lookup(order_, std::tuple{d, d2, e});
  }

  std::size_t count(VarKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(vars_.begin(), vars_.end(),
                      [kind](const Variable& v) { return v.kind == kind; }));
  }
  std::size_t count(Family family) const {
    return static_cast<std::size_t>(std::count_if(
        linear_.begin(), linear_.end(),
        [family](const LinearConstraint& c) { return c.family == family; }));
  }

  // Empty when `values` is an integral point satisfying bounds, linear rows
  // and indicators; otherwise names the first violated item.
  std::optional<std::string> violation(std::span<const double> values,
                                       double tol = 1e-6) const {
    if (values.size() != vars_.size()) return "wrong number of values";
    for (VarId v = 0; v < vars_.size(); ++v) {
      const double x = values[v];
      if (std::abs(x - std::round(x)) > tol) {
        return "non-integral value for " + vars_[v].name;
      }
      if (x < static_cast<double>(vars_[v].lower) - tol ||
          x > static_cast<double>(vars_[v].upper) + tol) {
        return "bound violated by " + vars_[v].name;
      }
    }
    for (const LinearConstraint& c : linear_) {
      if (!holds(c, values, tol)) return "constraint " + c.name + " violated";
    }
    for (const IndicatorConstraint& c : indicators_) {
      if (std::lround(values[c.guard]) == c.guard_value &&
          !holds(c.body, values, tol)) {
        return "indicator " + c.body.name + " violated";
      }
    }
    return std::nullopt;
  }

  double stage_value(int rank, std::span<const double> values) const {
    return evaluate(stage(rank).expression, values);
  }

 private:
  template <typename Map, typename Key>
  static std::optional<VarId> lookup(const Map& m, const Key& k) {
    auto it = m.find(k);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  std::size_t demand_count_ = 0;
  std::size_t link_count_ = 0;
  int slot_capacity_ = 1;
  std::vector<Variable> vars_;
  std::vector<LinearConstraint> linear_;
  std::vector<IndicatorConstraint> indicators_;
  std::array<ObjectiveStage, 3> stages_;
  std::map<std::pair<DemandIndex, std::size_t>, VarId> choice_;
  std::map<std::pair<DemandIndex, LinkIndex>, VarId> start_;
  std::map<std::tuple<DemandIndex, DemandIndex, LinkIndex>, VarId> order_;
};

struct ModelOptions {
  // Create start-slot and order variables only where some routing solution
  // can place the demand(s) on the link.
  bool prune = true;
};

inline IlpModel build_model(const ProblemInstance& instance,
                            const SegmentCatalog& segments,
                            const SolutionCatalog& solutions,
                            const ModelOptions& options = {}) {
  const std::size_t nd = instance.demands().size();
  const std::size_t ne = instance.topology().link_count();
  const std::int64_t lc = instance.slot_capacity();
  IlpModel model(nd, ne, static_cast<int>(lc));
  const std::int64_t big_m = model.big_m();
  const auto ds = [](std::size_t d) { return std::to_string(d); };

  std::vector<std::vector<VarId>> x(nd);
  for (DemandIndex d = 0; d < nd; ++d) {
    const auto& sols = solutions.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      Variable v;
      v.kind = VarKind::choice;
      v.demand = d;
      v.solution = s;
      v.name = "x_d" + ds(d) + "_s" + ds(s);
      x[d].push_back(model.add_variable(std::move(v)));
    }
  }

  // R1 and the objective stages.
  for (DemandIndex d = 0; d < nd; ++d) {
    const auto& sols = solutions.solutions(d);
    if (sols.empty()) continue;
    LinearConstraint r1{{}, Sense::less_equal, 1, Family::r1, "R1_d" + ds(d)};
    for (std::size_t s = 0; s < sols.size(); ++s) {
      r1.terms.push_back({1, x[d][s]});
      model.stage(1).expression.push_back({1, x[d][s]});
      if (sols[s].reg_count != 0) {
        model.stage(2).expression.push_back({sols[s].reg_count, x[d][s]});
      }
      model.stage(3).expression.push_back({sols[s].total_fs, x[d][s]});
    }
    model.add(std::move(r1));
  }

  // can_use[d][e]: some solution of d uses e.
  std::vector<std::vector<bool>> can_use(nd, std::vector<bool>(ne, false));
  for (DemandIndex d = 0; d < nd; ++d) {
    for (const RoutingSolution& s : solutions.solutions(d)) {
      for (const LinkNeed& n : s.link_need) can_use[d][n.link] = true;
    }
  }
  auto wanted = [&](DemandIndex d, LinkIndex e) {
    return !options.prune || can_use[d][e];
  };

  // U(d,e) and N(d,e) as term lists with a common scale factor.
  auto usage_terms = [&](DemandIndex d, LinkIndex e, std::int64_t scale) {
    std::vector<Term> terms;
    const auto& sols = solutions.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      if (sols[s].uses_link(e)) terms.push_back({scale, x[d][s]});
    }
    return terms;
  };
  auto need_terms = [&](DemandIndex d, LinkIndex e, std::int64_t scale,
                        bool minus_usage) {
    std::vector<Term> terms;
    const auto& sols = solutions.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      const std::int64_t need = sols[s].need_on(e);
      const std::int64_t coef = need - (minus_usage && need > 0 ? 1 : 0);
      if (coef != 0) terms.push_back({scale * coef, x[d][s]});
    }
    return terms;
  };
  auto append = [](std::vector<Term>& to, const std::vector<Term>& from) {
    to.insert(to.end(), from.begin(), from.end());
  };

  std::vector<std::vector<std::optional<VarId>>> z(
      nd, std::vector<std::optional<VarId>>(ne));
  for (DemandIndex d = 0; d < nd; ++d) {
    for (LinkIndex e = 0; e < ne; ++e) {
      if (!wanted(d, e)) continue;
      Variable v;
      v.kind = VarKind::start_slot;
      v.demand = d;
      v.link = e;
      v.lower = 0;
      v.upper = lc;
      v.name = "z_d" + ds(d) + "_e" + ds(e);
      const VarId zv = model.add_variable(std::move(v));
      z[d][e] = zv;
      const std::string suffix = "_d" + ds(d) + "_e" + ds(e);

      LinearConstraint zlb{{{1, zv}}, Sense::greater_equal, 0, Family::zlb,
                           "ZLB" + suffix};
      append(zlb.terms, usage_terms(d, e, -1));
      model.add(std::move(zlb));

      LinearConstraint zub{{{1, zv}}, Sense::less_equal, 0, Family::zub,
                           "ZUB" + suffix};
      append(zub.terms, usage_terms(d, e, -lc));
      model.add(std::move(zub));

      LinearConstraint zfit{{{1, zv}}, Sense::less_equal, lc, Family::zfit,
                            "ZFIT" + suffix};
      append(zfit.terms, need_terms(d, e, 1, true));
      model.add(std::move(zfit));
    }
  }

  // R2 continuity indicators.
  for (DemandIndex d = 0; d < nd; ++d) {
    const auto& sols = solutions.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      for (SegmentId pid : sols[s].chain) {
        const Segment& p = segments[pid];
        const LinkIndex first = p.first_link();
        for (std::size_t k = 1; k < p.links.size(); ++k) {
          const LinkIndex e = p.links[k].link;
          IndicatorConstraint ind;
          ind.guard = x[d][s];
          ind.guard_value = 1;
          ind.body = {{{1, *z[d][e]}, {-1, *z[d][first]}},
                      Sense::equal,
                      0,
                      Family::r2,
                      "R2_d" + ds(d) + "_s" + ds(s) + "_p" + ds(pid) + "_e" +
                          ds(e)};
          model.add(std::move(ind));
        }
      }
    }
  }

  // R3-R5 per unordered pair and link.
  for (LinkIndex e = 0; e < ne; ++e) {
    for (DemandIndex d = 0; d < nd; ++d) {
      if (!z[d][e]) continue;
      for (DemandIndex d2 = d + 1; d2 < nd; ++d2) {
        if (!z[d2][e]) continue;
        if (options.prune && !(can_use[d][e] && can_use[d2][e])) continue;
        auto order = [&](DemandIndex a, DemandIndex b) {
          Variable v;
          v.kind = VarKind::order;
          v.demand = a;
          v.other = b;
          v.link = e;
          v.name = "o_d" + ds(a) + "_d" + ds(b) + "_e" + ds(e);
          return model.add_variable(std::move(v));
        };
        const VarId o12 = order(d, d2);
        const VarId o21 = order(d2, d);
        const std::string suffix = "_d" + ds(d) + "_d" + ds(d2) + "_e" + ds(e);
        model.add(LinearConstraint{{{1, o12}, {1, o21}},
                                   Sense::less_equal,
                                   1,
                                   Family::r3,
                                   "R3" + suffix});
        auto separation = [&](DemandIndex a, DemandIndex b, VarId o,
                              Family family) {
          LinearConstraint c{{{1, *z[a][e]}, {-1, *z[b][e]}, {-big_m, o}},
                             Sense::less_equal,
                             0,
                             family,
                             std::string(to_string(family)) + suffix};
          append(c.terms, need_terms(a, e, 1, false));
          return c;
        };
        model.add(separation(d, d2, o12, Family::r4));
        model.add(separation(d2, d, o21, Family::r5));
      }
    }
  }
  return model;
}

// Replaces every indicator by big-M inequalities with M = LC + 1. For an
// equality body this yields two rows:
//   expr - rhs <= M (1 - g)   and   rhs - expr <= M (1 - g)
// (with g and 1 - g swapped for guard value 0).
inline IlpModel linearize(const IlpModel& model) {
  IlpModel out = model;
  out.clear_indicators();
  const std::int64_t m = model.big_m();
  for (const IndicatorConstraint& ind : model.indicators()) {
    // Moving M (1 - g) or M g to the left-hand side.
    const std::int64_t guard_coef = ind.guard_value == 1 ? m : -m;
    const std::int64_t rhs_shift = ind.guard_value == 1 ? m : 0;
    auto row = [&](int sign, const std::string& tag) {
      LinearConstraint c;
      for (const Term& t : ind.body.terms) {
        c.terms.push_back({sign * t.coefficient, t.var});
      }
      c.terms.push_back({guard_coef, ind.guard});
      c.sense = Sense::less_equal;
      c.rhs = sign * ind.body.rhs + rhs_shift;
      c.family = ind.body.family;
      c.name = ind.body.name + tag;
      return c;
    };
    if (ind.body.sense != Sense::greater_equal) out.add(row(+1, "_ub"));
    if (ind.body.sense != Sense::less_equal) out.add(row(-1, "_lb"));
  }
  return out;
}

}  // namespace rmsa
