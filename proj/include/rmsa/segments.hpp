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

// Segment enumeration. A segment is a directed simple path carried without
// regeneration, so it uses one modulation and one aligned slot block on all
// of its links.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmsa/error.hpp"
#include "rmsa/instance.hpp"

namespace rmsa {

using SegmentId = std::size_t;

// Reach comparisons tolerate decimal round-off in summed link lengths.
inline constexpr double kLengthTolerance = 1e-9;

struct LinkTraversal {
  LinkIndex link = 0;
  bool forward = true;  // true when traversed from Link::a to Link::b

  friend bool operator==(const LinkTraversal&, const LinkTraversal&) = default;
};

struct Segment {
  SegmentId id = 0;
  std::vector<NodeIndex> nodes;
  std::vector<LinkTraversal> links;
  double length_km = 0.0;
  Modulation modulation;
  std::size_t modulation_index = 0;

  NodeIndex source() const { return nodes.front(); }
  NodeIndex target() const { return nodes.back(); }
  LinkIndex first_link() const { return links.front().link; }
  std::size_t hop_count() const { return links.size(); }

  bool uses(LinkIndex e) const {
    return std::any_of(links.begin(), links.end(),
                       [e](const LinkTraversal& t) { return t.link == e; });
  }
};

// Number of frequency slots demand `d` occupies on every link of `p`. Ratios
// are rounded up; fractional slots cannot be allocated.
inline int fs_count(const Segment& p, const Demand& d) {
  const double ratio = d.bandwidth_gbps / p.modulation.slot_rate_gbps;
  const double slots = std::ceil(ratio - 1e-9);
  return std::max(1, static_cast<int>(slots));
}

class SegmentCatalog {
 public:
  SegmentCatalog() = default;
  SegmentCatalog(std::vector<Segment> segments, std::size_t node_count,
                 std::size_t link_count)
      : segments_(std::move(segments)),
        link_count_(link_count),
        by_origin_(node_count) {
    incidence_.assign(segments_.size() * link_count_, false);
    for (const Segment& p : segments_) {
      by_origin_.at(p.source()).push_back(p.id);
      for (const LinkTraversal& t : p.links) {
        incidence_[p.id * link_count_ + t.link] = true;
      }
    }
  }

  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }
  const Segment& operator[](SegmentId p) const { return segments_.at(p); }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  auto begin() const { return segments_.begin(); }
  auto end() const { return segments_.end(); }

  // Y_p^e
  bool incidence(SegmentId p, LinkIndex e) const {
    return incidence_.at(p * link_count_ + e);
  }

  std::span<const SegmentId> starting_at(NodeIndex n) const {
    return by_origin_.at(n);
  }

  std::optional<SegmentId> find(std::span<const NodeIndex> nodes) const {
    if (nodes.empty() || nodes.front() >= by_origin_.size()) return std::nullopt;
    for (SegmentId p : by_origin_[nodes.front()]) {
      const auto& seq = segments_[p].nodes;
      if (std::equal(seq.begin(), seq.end(), nodes.begin(), nodes.end())) {
        return p;
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<Segment> segments_;
  std::size_t link_count_ = 0;
  std::vector<std::vector<SegmentId>> by_origin_;
  std::vector<bool> incidence_;
};

struct SegmentOptions {
  // Guard against path explosion. Exceeding it throws LimitExceeded instead
  // of truncating the catalog.
  std::optional<std::size_t> max_hops;
  // When false every reachable path is kept regardless of reach; used to
  // check the reach filter itself.
  bool apply_reach = true;
};

namespace segments_detail {

// Most spectrally efficient modulation that reaches `length`; ties keep the
// earlier table entry.
inline std::optional<std::size_t> best_modulation(
    const std::vector<Modulation>& table, double length) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (length > table[i].max_reach_km + kLengthTolerance) continue;
    if (!best || table[i].slot_rate_gbps > table[*best].slot_rate_gbps) best = i;
  }
  return best;
}

inline std::size_t most_efficient(const std::vector<Modulation>& table) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].slot_rate_gbps > table[best].slot_rate_gbps) best = i;
  }
  return best;
}

}  // namespace segments_detail

// Every directed simple path whose length fits the largest reach in the
// table, each paired with its most efficient feasible modulation. Segments
// are grouped by origin node, then ordered by depth-first discovery over
// links in declaration order.
inline SegmentCatalog enumerate_segments(const ProblemInstance& instance,
                                         const SegmentOptions& options = {}) {
  const auto& table = instance.modulations();
  if (table.empty()) {
    throw InstanceError("segment enumeration needs at least one modulation");
  }
  const NetworkTopology& g = instance.topology();
  double reach = 0.0;
  for (const Modulation& m : table) reach = std::max(reach, m.max_reach_km);

  std::vector<Segment> out;
  std::vector<NodeIndex> nodes;
  std::vector<LinkTraversal> links;
  std::vector<bool> on_path(g.node_count(), false);

  auto emit = [&](double length) {
    Segment p;
    p.id = out.size();
    p.nodes = nodes;
    p.links = links;
    p.length_km = length;
    auto m = options.apply_reach
                 ? segments_detail::best_modulation(table, length)
                 : std::optional<std::size_t>(
                       segments_detail::best_modulation(table, length).value_or(
                           segments_detail::most_efficient(table)));
    p.modulation_index = *m;
    p.modulation = table[*m];
    out.push_back(std::move(p));
  };

  auto extend = [&](auto&& self, NodeIndex u, double length) -> void {
    for (LinkIndex e : g.incident(u)) {
      const Link& l = g.link(e);
      const NodeIndex v = l.other(u);
      if (on_path[v]) continue;
      const double next = length + l.length_km;
      if (options.apply_reach && next > reach + kLengthTolerance) continue;
      if (options.max_hops && links.size() + 1 > *options.max_hops) {
        throw LimitExceeded(
            "segment enumeration exceeds the hop cap of " +
            std::to_string(*options.max_hops) + " at node " + g.node_label(u));
      }
      on_path[v] = true;
      nodes.push_back(v);
      links.push_back(LinkTraversal{e, l.a == u});
      emit(next);
      self(self, v, next);
      links.pop_back();
      nodes.pop_back();
      on_path[v] = false;
    }
  };

  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    on_path[s] = true;
    nodes.assign(1, s);
    extend(extend, s, 0.0);
    on_path[s] = false;
  }
  return SegmentCatalog(std::move(out), g.node_count(), g.link_count());
}

// Catalog dump: one object per segment (id, node labels, modulation, length).
inline void write_segment_catalog(std::ostream& os,
                                  const SegmentCatalog& catalog,
                                  const ProblemInstance& instance) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Segment& p : catalog) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeIndex n : p.nodes) {
      nodes.push_back(instance.topology().node_label(n));
    }
    doc.push_back({{"id", p.id},
                   {"nodes", nodes},
                   {"modulation", p.modulation.name},
                   {"length_km", p.length_km}});
  }
  os << doc.dump(2) << "\n";
}

}  // namespace rmsa
