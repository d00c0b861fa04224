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

// Brute-force lexicographic optimum for toy instances.
//
// Enumerates every combination of (blocked | one routing solution) per
// demand; for combinations that would improve on the best vector found so
// far, searches slot placements exhaustively (one start slot per segment,
// ascending) with per-link bitmasks. No ILP machinery is involved.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmsa/error.hpp"
#include "rmsa/instance.hpp"
#include "rmsa/preprocess.hpp"
#include "rmsa/segments.hpp"
#include "rmsa/solve.hpp"

namespace rmsa {

struct OracleLimits {
  std::size_t max_total_solutions = 2000;
  int max_slot_capacity = 64;  // one 64-bit mask per link
  std::size_t max_demands = 8;
  std::uint64_t max_search_nodes = 200'000'000;
};

struct OracleResult {
  ObjectiveVector objective;
  Assignment assignment;
  std::uint64_t search_nodes = 0;
};

namespace oracle_detail {

struct Item {
  DemandIndex demand;
  SegmentId segment;
  int slots;
};

class Search {
 public:
  Search(const ProblemInstance& instance, const SegmentCatalog& segments,
         const SolutionCatalog& solutions, const OracleLimits& limits)
      : instance_(instance),
        segments_(segments),
        solutions_(solutions),
        limits_(limits),
        lc_(instance.slot_capacity()),
        nd_(instance.demands().size()),
        choice_(nd_, kBlocked),
        load_(instance.topology().link_count(), 0) {}

  OracleResult run() {
    best_assignment_ = all_blocked(nd_);
    best_ = ObjectiveVector{};
    choose(0, ObjectiveVector{});
    return OracleResult{best_, best_assignment_, nodes_};
  }

 private:
  static constexpr std::size_t kBlocked = static_cast<std::size_t>(-1);

  void tick() {
    if (++nodes_ > limits_.max_search_nodes) {
      throw LimitExceeded("oracle search-node budget of " +
                          std::to_string(limits_.max_search_nodes) +
                          " exhausted");
    }
  }

  // Recurse over demands; `so_far` is the vector of the choices made.
  void choose(DemandIndex d, ObjectiveVector so_far) {
    tick();
    // Optimistic completion: all remaining demands admitted for free.
    ObjectiveVector optimistic = so_far;
    optimistic.admitted += static_cast<std::int64_t>(nd_ - d);
    if (!lex_better(optimistic, best_) && found_any_) return;
    if (d == nd_) {
      if (found_any_ && !lex_better(so_far, best_)) return;
      if (pack()) {
        best_ = so_far;
        found_any_ = true;
      }
      return;
    }
    const auto& sols = solutions_.solutions(d);
    for (std::size_t s = 0; s < sols.size(); ++s) {
      const RoutingSolution& sol = sols[s];
      bool fits = true;
      for (const LinkNeed& n : sol.link_need) {
        fits = fits && load_[n.link] + n.slots <= lc_;
      }
      if (!fits) continue;
      for (const LinkNeed& n : sol.link_need) load_[n.link] += n.slots;
      choice_[d] = s;
      ObjectiveVector next = so_far;
      ++next.admitted;
      next.regenerators += sol.reg_count;
      next.slots += sol.total_fs;
      choose(d + 1, next);
      for (const LinkNeed& n : sol.link_need) load_[n.link] -= n.slots;
    }
    choice_[d] = kBlocked;
    choose(d + 1, so_far);
  }

  // Exhaustive slot placement for the current choice vector. On success the
  // placement becomes the best assignment.
  bool pack() {
    std::vector<Item> items;
    for (DemandIndex d = 0; d < nd_; ++d) {
      if (choice_[d] == kBlocked) continue;
      for (SegmentId p : solutions_.solutions(d)[choice_[d]].chain) {
        items.push_back(Item{d, p, fs_count(segments_[p], instance_.demand(d))});
      }
    }
    std::vector<std::uint64_t> used(instance_.topology().link_count(), 0);
    std::vector<int> start(items.size(), 0);
    if (!place(items, 0, used, start)) return false;

    Assignment a = all_blocked(nd_);
    for (DemandIndex d = 0; d < nd_; ++d) {
      if (choice_[d] == kBlocked) continue;
      AdmittedRoute r;
      r.solution_index = choice_[d];
      r.solution = solutions_.solutions(d)[choice_[d]];
      a.routes[d] = std::move(r);
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (const LinkTraversal& t : segments_[items[i].segment].links) {
        a.routes[items[i].demand]->start_slot[t.link] = start[i];
      }
    }
    best_assignment_ = std::move(a);
    return true;
  }

  bool place(const std::vector<Item>& items, std::size_t i,
             std::vector<std::uint64_t>& used, std::vector<int>& start) {
    if (i == items.size()) return true;
    const Item& item = items[i];
    const Segment& p = segments_[item.segment];
    const std::uint64_t block =
        item.slots >= 64 ? ~0ULL : ((1ULL << item.slots) - 1);
    for (int z = 1; z + item.slots - 1 <= lc_; ++z) {
      tick();
      const std::uint64_t mask = block << (z - 1);
      bool free = true;
      for (const LinkTraversal& t : p.links) free = free && !(used[t.link] & mask);
      if (!free) continue;
      for (const LinkTraversal& t : p.links) used[t.link] |= mask;
      start[i] = z;
      if (place(items, i + 1, used, start)) return true;
      for (const LinkTraversal& t : p.links) used[t.link] &= ~mask;
    }
    return false;
  }

  const ProblemInstance& instance_;
  const SegmentCatalog& segments_;
  const SolutionCatalog& solutions_;
  const OracleLimits& limits_;
  const int lc_;
  const std::size_t nd_;
  std::vector<std::size_t> choice_;
  std::vector<int> load_;
  ObjectiveVector best_;
  Assignment best_assignment_;
  bool found_any_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace oracle_detail

inline OracleResult brute_force_solve(const ProblemInstance& instance,
                                      const SegmentCatalog& segments,
                                      const SolutionCatalog& solutions,
                                      const OracleLimits& limits = {}) {
  if (instance.demands().size() > limits.max_demands) {
    throw LimitExceeded("oracle: " + std::to_string(instance.demands().size()) +
                        " demands exceed the limit of " +
                        std::to_string(limits.max_demands));
  }
  if (instance.slot_capacity() > limits.max_slot_capacity ||
      instance.slot_capacity() > 64) {
    throw LimitExceeded("oracle: slot capacity " +
                        std::to_string(instance.slot_capacity()) +
                        " exceeds the limit");
  }
  if (solutions.total() > limits.max_total_solutions) {
    throw LimitExceeded("oracle: " + std::to_string(solutions.total()) +
                        " routing solutions exceed the limit of " +
                        std::to_string(limits.max_total_solutions));
  }
  return oracle_detail::Search(instance, segments, solutions, limits).run();
}

inline OracleResult brute_force_solve(const ProblemInstance& instance,
                                      const OracleLimits& limits = {}) {
  const SegmentCatalog segments = enumerate_segments(instance);
  const SolutionCatalog solutions = enumerate_solutions(instance, segments);
  return brute_force_solve(instance, segments, solutions, limits);
}

}  // namespace rmsa
