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

// Assignment validation and metrics.
//
// The validator works from the path-level rules only (segment chains, flow
// deficits, slot intervals) and does not look at the ILP or its constraint
// rows. Slot quantities are recomputed from the segments and the demand
// bandwidth rather than read from the precomputed routing solution.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmsa/instance.hpp"
#include "rmsa/segments.hpp"
#include "rmsa/solve.hpp"

namespace rmsa {

enum class ViolationFamily {
  admission,
  flow,
  regcap,
  capacity,
  slot_bounds,
  continuity,
  contiguity,
};

inline const char* to_string(ViolationFamily f) {
  switch (f) {
    case ViolationFamily::admission: return "admission";
    case ViolationFamily::flow: return "flow";
    case ViolationFamily::regcap: return "regcap";
    case ViolationFamily::capacity: return "capacity";
    case ViolationFamily::slot_bounds: return "slot_bounds";
    case ViolationFamily::continuity: return "continuity";
    case ViolationFamily::contiguity: return "contiguity";
  }
  return "?";
}

struct Violation {
  ViolationFamily family;
  std::vector<std::string> demands;
  std::string location;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  // Slots occupied per link, summed over admitted demands.
  std::vector<std::int64_t> occupied_slots;
  int slot_capacity = 1;

  bool passed() const { return violations.empty(); }

  std::size_t count(ViolationFamily f) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(),
                      [f](const Violation& v) { return v.family == f; }));
  }

  double usage(LinkIndex e) const {
    return static_cast<double>(occupied_slots.at(e)) /
           static_cast<double>(slot_capacity);
  }
};

inline ValidationReport validate_assignment(const ProblemInstance& instance,
                                            const SegmentCatalog& segments,
                                            const Assignment& assignment) {
  const NetworkTopology& g = instance.topology();
  const int lc = instance.slot_capacity();
  ValidationReport report;
  report.slot_capacity = lc;
  report.occupied_slots.assign(g.link_count(), 0);
  auto flag = [&](ViolationFamily f, std::vector<std::string> demands,
                  std::string location, std::string detail) {
    report.violations.push_back(
        {f, std::move(demands), std::move(location), std::move(detail)});
  };

  if (assignment.routes.size() != instance.demands().size()) {
    flag(ViolationFamily::admission, {}, "",
         "assignment covers " + std::to_string(assignment.routes.size()) +
             " demands, instance has " +
             std::to_string(instance.demands().size()));
    return report;
  }

  // Per link: (first slot, slot count, demand) of every occupant.
  struct Block {
    int first;
    int count;
    DemandIndex demand;
  };
  std::vector<std::vector<Block>> blocks(g.link_count());

  for (DemandIndex d = 0; d < assignment.routes.size(); ++d) {
    const auto& route = assignment.routes[d];
    if (!route) continue;
    const Demand& demand = instance.demand(d);
    const std::string& id = demand.id;
    const std::vector<SegmentId>& chain = route->solution.chain;

    if (chain.empty()) {
      flag(ViolationFamily::admission, {id}, "", "admitted without a route");
      continue;
    }
    bool known = true;
    for (SegmentId p : chain) known = known && p < segments.size();
    if (!known) {
      flag(ViolationFamily::admission, {id}, "", "route names an unknown segment");
      continue;
    }

    // Flow deficit per node: outgoing segments minus incoming segments.
    std::vector<int> deficit(g.node_count(), 0);
    for (SegmentId p : chain) {
      ++deficit[segments[p].source()];
      --deficit[segments[p].target()];
    }
    for (NodeIndex n = 0; n < g.node_count(); ++n) {
      const int want = n == demand.origin        ? 1
                       : n == demand.destination ? -1
                                                 : 0;
      if (deficit[n] != want) {
        flag(ViolationFamily::flow, {id}, "node " + g.node_label(n),
             "flow deficit " + std::to_string(deficit[n]) + ", expected " +
                 std::to_string(want));
      }
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (segments[chain[i]].target() != segments[chain[i + 1]].source()) {
        flag(ViolationFamily::flow, {id}, "segment " + std::to_string(i),
             "consecutive segments do not meet");
      }
    }

    const int regenerators = static_cast<int>(chain.size()) - 1;
    if (regenerators > instance.r_max()) {
      flag(ViolationFamily::regcap, {id}, "",
           std::to_string(regenerators) + " regenerators exceed r_max " +
               std::to_string(instance.r_max()));
    }

    // Slots per link from the segments themselves.
    std::map<LinkIndex, int> slots_on;
    for (SegmentId pid : chain) {
      const Segment& p = segments[pid];
      const int f = fs_count(p, demand);
      for (const LinkTraversal& t : p.links) {
        if (slots_on.count(t.link)) {
          flag(ViolationFamily::flow, {id}, "link " + g.link_name(t.link),
               "route traverses the link more than once");
        }
        slots_on[t.link] += f;
      }
    }

    // slot_bounds: z present exactly on used links, block inside 1..LC.
    for (const auto& [e, z] : route->start_slot) {
      if (!slots_on.count(e)) {
        flag(ViolationFamily::slot_bounds, {id}, "link " + g.link_name(e),
             "start slot assigned on a link the route does not use");
      }
    }
    for (const auto& [e, f] : slots_on) {
      auto it = route->start_slot.find(e);
      if (it == route->start_slot.end()) {
        flag(ViolationFamily::slot_bounds, {id}, "link " + g.link_name(e),
             "no start slot on a used link");
        continue;
      }
      const int z = it->second;
      if (z < 1 || z > lc - f + 1) {
        flag(ViolationFamily::slot_bounds, {id}, "link " + g.link_name(e),
             "start slot " + std::to_string(z) + " with " + std::to_string(f) +
                 " slots leaves 1.." + std::to_string(lc));
      }
      blocks[e].push_back(Block{z, f, d});
      report.occupied_slots[e] += f;
    }

    // continuity: one start slot per segment.
    for (SegmentId pid : chain) {
      const Segment& p = segments[pid];
      auto z_at = [&](LinkIndex e) {
        auto it = route->start_slot.find(e);
        return it == route->start_slot.end() ? -1 : it->second;
      };
      const int head = z_at(p.first_link());
      for (std::size_t k = 1; k < p.links.size(); ++k) {
        if (z_at(p.links[k].link) != head) {
          flag(ViolationFamily::continuity, {id},
               "link " + g.link_name(p.links[k].link),
               "start slot differs from the segment's first link");
        }
      }
    }
  }

  for (LinkIndex e = 0; e < g.link_count(); ++e) {
    if (report.occupied_slots[e] > lc) {
      flag(ViolationFamily::capacity, {}, "link " + g.link_name(e),
           std::to_string(report.occupied_slots[e]) + " slots used of " +
               std::to_string(lc));
    }
    const auto& on = blocks[e];
    for (std::size_t i = 0; i < on.size(); ++i) {
      for (std::size_t j = i + 1; j < on.size(); ++j) {
        const Block& a = on[i];
        const Block& b = on[j];
        const bool disjoint =
            a.first + a.count <= b.first || b.first + b.count <= a.first;
        if (!disjoint) {
          flag(ViolationFamily::contiguity,
               {instance.demand(a.demand).id, instance.demand(b.demand).id},
               "link " + g.link_name(e), "slot blocks overlap");
        }
      }
    }
  }
  return report;
}

// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(x);
}

struct Metrics {
  std::int64_t blocked = 0;             // BD
  std::int64_t total_regenerators = 0;  // TR
  std::int64_t total_fs = 0;            // TFS, a network total
  std::vector<double> per_link_usage;   // used slots / LC
};

inline Metrics compute_metrics(const ProblemInstance& instance,
                               const Assignment& assignment) {
  Metrics m;
  const auto lc = static_cast<double>(instance.slot_capacity());
  std::vector<std::int64_t> used(instance.topology().link_count(), 0);
  for (const auto& route : assignment.routes) {
    if (!route) {
      ++m.blocked;
      continue;
    }
    m.total_regenerators += static_cast<std::int64_t>(route->solution.chain.size()) - 1;
    for (const LinkNeed& need : route->solution.link_need) {
      m.total_fs += need.slots;
      used.at(need.link) += need.slots;
    }
  }
  m.per_link_usage.reserve(used.size());
  for (std::int64_t u : used) {
    m.per_link_usage.push_back(static_cast<double>(u) / lc);
  }
  return m;
}

// CSV: link,a,b,usage with usage = used slots / LC, one row per link.
inline void write_heatmap_csv(std::ostream& os, const ProblemInstance& instance,
                              const Metrics& metrics) {
  const NetworkTopology& g = instance.topology();
  os << "link,a,b,usage\n";
  for (LinkIndex e = 0; e < g.link_count(); ++e) {
    os << e << "," << g.node_label(g.link(e).a) << ","
       << g.node_label(g.link(e).b) << ","
       << format_double(metrics.per_link_usage[e])
       << "\n";
  }
}

inline nlohmann::json validation_to_json(const ValidationReport& report) {
  nlohmann::json v = nlohmann::json::array();
  for (const Violation& x : report.violations) {
    v.push_back({{"family", to_string(x.family)},
                 {"demands", x.demands},
                 {"location", x.location},
                 {"detail", x.detail}});
  }
  return {{"passed", report.passed()}, {"violations", v}};
}

}  // namespace rmsa
