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

// Per-demand routing-solution enumeration.
//
// A routing solution is a chain of segments from a demand's origin to its
// destination with at most r_max regenerators (chain length - 1). Chains
// never revisit a node except at segment junctions and never traverse a link
// twice, and no link may need more slots than the link capacity. These rules
// enforce flow conservation, the regenerator cap and the single-demand
// capacity bound up front, so the ILP only has to pick one chain per demand
// and place spectrum.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rmsa/instance.hpp"
#include "rmsa/segments.hpp"

namespace rmsa {

struct LinkNeed {
  LinkIndex link = 0;
  int slots = 0;

  friend bool operator==(const LinkNeed&, const LinkNeed&) = default;
};

struct RoutingSolution {
  DemandIndex demand = 0;
  std::vector<SegmentId> chain;
  std::vector<NodeIndex> regenerators;  // junction nodes, in chain order
  int reg_count = 0;                    // R_d^s
  int total_fs = 0;                     // F_d^s
  std::vector<LinkNeed> link_need;      // sorted by link; only used links

  // X_d^{e,s}
  bool uses_link(LinkIndex e) const { return need_on(e) > 0; }

  int need_on(LinkIndex e) const {
    auto it = std::lower_bound(
        link_need.begin(), link_need.end(), e,
        [](const LinkNeed& n, LinkIndex l) { return n.link < l; });
    return it != link_need.end() && it->link == e ? it->slots : 0;
  }

  friend bool operator==(const RoutingSolution&,
                         const RoutingSolution&) = default;
};

// Builds the derived constants of a chain. Does not check any invariant.
inline RoutingSolution make_routing_solution(DemandIndex d,
                                             std::vector<SegmentId> chain,
                                             const SegmentCatalog& segments,
                                             const Demand& demand) {
  RoutingSolution s;
  s.demand = d;
  s.chain = std::move(chain);
  s.reg_count = static_cast<int>(s.chain.size()) - 1;
  for (std::size_t i = 0; i + 1 < s.chain.size(); ++i) {
    s.regenerators.push_back(segments[s.chain[i]].target());
  }
  for (SegmentId p : s.chain) {
    const int f = fs_count(segments[p], demand);
    for (const LinkTraversal& t : segments[p].links) {
      s.link_need.push_back(LinkNeed{t.link, f});
      s.total_fs += f;
    }
  }
  std::sort(s.link_need.begin(), s.link_need.end(),
            [](const LinkNeed& x, const LinkNeed& y) { return x.link < y.link; });
  return s;
}

// Standalone invariant checker. Returns one message per violated invariant.
inline std::vector<std::string> check_routing_solution(
    const ProblemInstance& instance, const SegmentCatalog& segments,
    const RoutingSolution& s) {
  std::vector<std::string> problems;
  if (s.demand >= instance.demands().size()) {
    problems.push_back("unknown demand");
    return problems;
  }
  const Demand& d = instance.demand(s.demand);
  if (s.chain.empty()) {
    problems.push_back("empty chain");
    return problems;
  }
  for (SegmentId p : s.chain) {
    if (p >= segments.size()) {
      problems.push_back("unknown segment " + std::to_string(p));
      return problems;
    }
  }
  if (segments[s.chain.front()].source() != d.origin) {
    problems.push_back("chain does not start at the origin");
  }
  if (segments[s.chain.back()].target() != d.destination) {
    problems.push_back("chain does not end at the destination");
  }
  for (std::size_t i = 0; i + 1 < s.chain.size(); ++i) {
    if (segments[s.chain[i]].target() != segments[s.chain[i + 1]].source()) {
      problems.push_back("segments " + std::to_string(i) + " and " +
                         std::to_string(i + 1) + " do not meet");
    }
  }
  if (s.reg_count != static_cast<int>(s.chain.size()) - 1) {
    problems.push_back("reg_count differs from chain length - 1");
  }
  if (s.reg_count > instance.r_max()) {
    problems.push_back("more regenerators than r_max");
  }
  std::vector<NodeIndex> expected_regs;
  for (std::size_t i = 0; i + 1 < s.chain.size(); ++i) {
    expected_regs.push_back(segments[s.chain[i]].target());
  }
  if (expected_regs != s.regenerators) {
    problems.push_back("regenerator list does not match the junctions");
  }

  std::vector<int> node_visits(instance.topology().node_count(), 0);
  std::vector<int> link_visits(instance.topology().link_count(), 0);
  std::vector<int> need(instance.topology().link_count(), 0);
  for (std::size_t i = 0; i < s.chain.size(); ++i) {
    const Segment& p = segments[s.chain[i]];
    // The head of every segment after the first is a junction already counted.
    for (std::size_t k = (i == 0 ? 0 : 1); k < p.nodes.size(); ++k) {
      ++node_visits[p.nodes[k]];
    }
    const int f = fs_count(p, d);
    for (const LinkTraversal& t : p.links) {
      ++link_visits[t.link];
      need[t.link] += f;
    }
  }
  if (std::any_of(node_visits.begin(), node_visits.end(),
                  [](int v) { return v > 1; })) {
    problems.push_back("chain revisits a node");
  }
  if (std::any_of(link_visits.begin(), link_visits.end(),
                  [](int v) { return v > 1; })) {
    problems.push_back("chain traverses a link twice");
  }
  int total = 0;
  std::vector<LinkNeed> expected_need;
  for (LinkIndex e = 0; e < need.size(); ++e) {
    if (need[e] > instance.slot_capacity()) {
      problems.push_back("link " + instance.topology().link_name(e) +
                         " needs more slots than its capacity");
    }
    if (need[e] > 0) expected_need.push_back(LinkNeed{e, need[e]});
    total += need[e];
  }
  if (expected_need != s.link_need) {
    problems.push_back("link_need does not match the chain");
  }
  if (total != s.total_fs) {
    problems.push_back("total_fs differs from the sum of link needs");
  }
  return problems;
}

class SolutionCatalog {
 public:
  SolutionCatalog() = default;
  explicit SolutionCatalog(std::vector<std::vector<RoutingSolution>> per_demand)
      : per_demand_(std::move(per_demand)) {}

  std::size_t demand_count() const noexcept { return per_demand_.size(); }

  // Solutions(d), the demand's full solution set.
  const std::vector<RoutingSolution>& solutions(DemandIndex d) const {
    return per_demand_.at(d);
  }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& v : per_demand_) n += v.size();
    return n;
  }

  friend bool operator==(const SolutionCatalog&,
                         const SolutionCatalog&) = default;

 private:
  std::vector<std::vector<RoutingSolution>> per_demand_;
};

struct EnumerationOptions {
  // Warn (never drop) when the total number of solutions exceeds this.
  std::size_t warn_budget = 1'000'000;
  std::function<void(const std::string&)> warn = [](const std::string& msg) {
    std::clog << "warning: " << msg << "\n";
  };
};

// Solutions(d) for every demand, ordered by depth-first discovery over the
// segment catalog order.
inline SolutionCatalog enumerate_solutions(const ProblemInstance& instance,
                                           const SegmentCatalog& segments,
                                           const EnumerationOptions& options = {}) {
  const NetworkTopology& g = instance.topology();
  const int lc = instance.slot_capacity();
  const std::size_t max_segments =
      static_cast<std::size_t>(instance.r_max()) + 1;
  std::vector<std::vector<RoutingSolution>> all;
  all.reserve(instance.demands().size());

  std::vector<bool> node_used(g.node_count(), false);
  std::vector<bool> link_used(g.link_count(), false);
  std::vector<SegmentId> chain;

  for (DemandIndex d = 0; d < instance.demands().size(); ++d) {
    const Demand& demand = instance.demand(d);
    std::vector<RoutingSolution> found;

    auto extend = [&](auto&& self, NodeIndex at) -> void {
      for (SegmentId pid : segments.starting_at(at)) {
        const Segment& p = segments[pid];
        if (fs_count(p, demand) > lc) continue;
        bool clash = false;
        for (std::size_t k = 1; k < p.nodes.size() && !clash; ++k) {
          clash = node_used[p.nodes[k]];
        }
        for (std::size_t k = 0; k < p.links.size() && !clash; ++k) {
          clash = link_used[p.links[k].link];
        }
        if (clash) continue;
        chain.push_back(pid);
        if (p.target() == demand.destination) {
          found.push_back(
              make_routing_solution(d, chain, segments, demand));
        } else if (chain.size() < max_segments) {
          for (std::size_t k = 1; k < p.nodes.size(); ++k) {
            node_used[p.nodes[k]] = true;
          }
          for (const LinkTraversal& t : p.links) link_used[t.link] = true;
          self(self, p.target());
          for (std::size_t k = 1; k < p.nodes.size(); ++k) {
            node_used[p.nodes[k]] = false;
          }
          for (const LinkTraversal& t : p.links) link_used[t.link] = false;
        }
        chain.pop_back();
      }
    };

    node_used[demand.origin] = true;
    extend(extend, demand.origin);
    node_used[demand.origin] = false;
    all.push_back(std::move(found));
  }

  SolutionCatalog catalog(std::move(all));
  if (catalog.total() > options.warn_budget && options.warn) {
    options.warn("solution catalog holds " + std::to_string(catalog.total()) +
                 " routing solutions (budget " +
                 std::to_string(options.warn_budget) + ")");
  }
  return catalog;
}

// |Solutions(d)| keyed by demand id.
inline std::map<std::string, std::size_t> count_solutions(
    const SolutionCatalog& catalog, const ProblemInstance& instance) {
  std::map<std::string, std::size_t> counts;
  for (DemandIndex d = 0; d < catalog.demand_count(); ++d) {
    counts[instance.demand(d).id] = catalog.solutions(d).size();
  }
  return counts;
}

inline void write_solution_catalog(std::ostream& os,
                                   const SolutionCatalog& catalog,
                                   const SegmentCatalog& segments,
                                   const ProblemInstance& instance) {
  const NetworkTopology& g = instance.topology();
  nlohmann::json doc = nlohmann::json::array();
  for (DemandIndex d = 0; d < catalog.demand_count(); ++d) {
    nlohmann::json chains = nlohmann::json::array();
    for (const RoutingSolution& s : catalog.solutions(d)) {
      nlohmann::json segs = nlohmann::json::array();
      for (SegmentId pid : s.chain) {
        nlohmann::json nodes = nlohmann::json::array();
        for (NodeIndex n : segments[pid].nodes) nodes.push_back(g.node_label(n));
        segs.push_back({{"segment", pid},
                        {"nodes", nodes},
                        {"modulation", segments[pid].modulation.name}});
      }
      chains.push_back({{"segments", segs},
                        {"regenerators", s.reg_count},
                        {"total_fs", s.total_fs}});
    }
    doc.push_back({{"demand", instance.demand(d).id}, {"solutions", chains}});
  }
  os << doc.dump(2) << "\n";
}

}  // namespace rmsa
