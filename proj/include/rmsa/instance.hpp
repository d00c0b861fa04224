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

// Problem data: an undirected topology with a uniform per-link slot
// capacity, a modulation table, a demand set and the per-demand regenerator
// cap. All types validate on construction and are immutable afterwards.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rmsa/error.hpp"

namespace rmsa {

using NodeIndex = std::size_t;
using LinkIndex = std::size_t;
using DemandIndex = std::size_t;

struct Link {
  NodeIndex a = 0;
  NodeIndex b = 0;
  double length_km = 0.0;

  NodeIndex other(NodeIndex n) const { return n == a ? b : a; }
  friend bool operator==(const Link&, const Link&) = default;
};

class NetworkTopology {
 public:
  NetworkTopology() = default;

  // Throws InstanceError on any invariant violation.
  NetworkTopology(std::vector<std::string> node_labels, std::vector<Link> links,
                  int slot_capacity)
      : labels_(std::move(node_labels)),
        links_(std::move(links)),
        slot_capacity_(slot_capacity) {
    if (slot_capacity_ < 1) {
      throw InstanceError("slot capacity must be >= 1, got " +
                          std::to_string(slot_capacity_));
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw InstanceError("duplicate node '" + labels_[i] + "'");
      }
    }
    incident_.resize(labels_.size());
    std::set<std::pair<NodeIndex, NodeIndex>> seen;
    for (std::size_t e = 0; e < links_.size(); ++e) {
      const Link& link = links_[e];
      if (link.a >= labels_.size() || link.b >= labels_.size()) {
        throw InstanceError("link " + std::to_string(e) +
                            " references an undeclared node");
      }
      if (link.a == link.b) {
        throw InstanceError("self-loop on node " + labels_[link.a]);
      }
      if (!(link.length_km > 0.0)) {
        throw InstanceError("link " + labels_[link.a] + "-" + labels_[link.b] +
                            " has non-positive length");
      }
      auto key = std::minmax(link.a, link.b);
      if (!seen.insert(key).second) {
        throw InstanceError("parallel link between nodes " + labels_[link.a] +
                            " and " + labels_[link.b]);
      }
      incident_[link.a].push_back(e);
      incident_[link.b].push_back(e);
    }
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t link_count() const noexcept { return links_.size(); }
  int slot_capacity() const noexcept { return slot_capacity_; }

  const std::vector<std::string>& node_labels() const noexcept {
    return labels_;
  }
  const std::string& node_label(NodeIndex n) const { return labels_.at(n); }
  const std::vector<Link>& links() const noexcept { return links_; }
  const Link& link(LinkIndex e) const { return links_.at(e); }

  std::optional<NodeIndex> find_node(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<LinkIndex> find_link(NodeIndex u, NodeIndex v) const {
    if (u >= incident_.size()) return std::nullopt;
    for (LinkIndex e : incident_[u]) {
      if (links_[e].other(u) == v) return e;
    }
    return std::nullopt;
  }

  // Links touching `n`, in declaration order.
  std::span<const LinkIndex> incident(NodeIndex n) const {
    return incident_.at(n);
  }

  std::string link_name(LinkIndex e) const {
    const Link& l = links_.at(e);
    return labels_[l.a] + "-" + labels_[l.b];
  }

  NetworkTopology with_slot_capacity(int slot_capacity) const {
    return NetworkTopology(labels_, links_, slot_capacity);
  }

  friend bool operator==(const NetworkTopology& x, const NetworkTopology& y) {
    return x.labels_ == y.labels_ && x.links_ == y.links_ &&
           x.slot_capacity_ == y.slot_capacity_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Link> links_;
  int slot_capacity_ = 1;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<std::vector<LinkIndex>> incident_;
};

struct Modulation {
  std::string name;
  double slot_rate_gbps = 0.0;  // capacity of one frequency slot
  double max_reach_km = 0.0;

  friend bool operator==(const Modulation&, const Modulation&) = default;
};

struct Demand {
  std::string id;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  double bandwidth_gbps = 0.0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

inline void validate_modulations(const std::vector<Modulation>& table) {
  if (table.empty()) throw InstanceError("modulation table is empty");
  std::set<std::string> names;
  for (const Modulation& m : table) {
    if (!(m.slot_rate_gbps > 0.0)) {
      throw InstanceError("modulation '" + m.name +
                          "' has non-positive slot rate");
    }
    if (!(m.max_reach_km > 0.0)) {
      throw InstanceError("modulation '" + m.name +
                          "' has non-positive reach");
    }
    if (!names.insert(m.name).second) {
      throw InstanceError("duplicate modulation '" + m.name + "'");
    }
  }
}

class ProblemInstance {
 public:
  ProblemInstance() = default;

  ProblemInstance(NetworkTopology topology, std::vector<Modulation> modulations,
                  std::vector<Demand> demands, int r_max)
      : topology_(std::move(topology)),
        modulations_(std::move(modulations)),
        demands_(std::move(demands)),
        r_max_(r_max) {
    if (r_max_ < 0) {
      throw InstanceError("r_max must be >= 0, got " + std::to_string(r_max_));
    }
    validate_modulations(modulations_);
    std::set<std::string> ids;
    for (const Demand& d : demands_) {
      if (!ids.insert(d.id).second) {
        throw InstanceError("duplicate demand id '" + d.id + "'");
      }
      if (d.origin >= topology_.node_count() ||
          d.destination >= topology_.node_count()) {
        throw InstanceError("demand '" + d.id +
                            "' references a node outside the topology");
      }
      if (d.origin == d.destination) {
        throw InstanceError("demand '" + d.id +
                            "' has identical origin and destination");
      }
      if (!(d.bandwidth_gbps > 0.0)) {
        throw InstanceError("demand '" + d.id + "' has non-positive bandwidth");
      }
    }
  }

  const NetworkTopology& topology() const noexcept { return topology_; }
  const std::vector<Modulation>& modulations() const noexcept {
    return modulations_;
  }
  const std::vector<Demand>& demands() const noexcept { return demands_; }
  const Demand& demand(DemandIndex d) const { return demands_.at(d); }
  int r_max() const noexcept { return r_max_; }
  int slot_capacity() const noexcept { return topology_.slot_capacity(); }

  ProblemInstance with_r_max(int r_max) const {
    return ProblemInstance(topology_, modulations_, demands_, r_max);
  }
  ProblemInstance with_slot_capacity(int lc) const {
    return ProblemInstance(topology_.with_slot_capacity(lc), modulations_,
                           demands_, r_max_);
  }
  ProblemInstance with_demands(std::vector<Demand> demands) const {
    return ProblemInstance(topology_, modulations_, std::move(demands), r_max_);
  }

  friend bool operator==(const ProblemInstance&,
                         const ProblemInstance&) = default;

 private:
  NetworkTopology topology_;
  std::vector<Modulation> modulations_;
  std::vector<Demand> demands_;
  int r_max_ = 0;
};

namespace detail {

// Uniform draw from [0, bound) by rejection, so the sequence depends only on
// the mt19937_64 output stream (which the standard fully specifies) and not on
// the library's distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r <= limit) return r % bound;
  }
}

}  // namespace detail

// Draws `count` demands with endpoints uniform over ordered node pairs.
// Demand ids are "0".."count-1". Output depends only on the arguments.
inline std::vector<Demand> generate_demands(const NetworkTopology& topology,
                                            std::size_t count,
                                            double bandwidth_gbps,
                                            std::uint64_t seed) {
  if (count == 0) return {};
  const std::size_t n = topology.node_count();
  if (n < 2) {
    throw InstanceError("cannot generate demands on a topology with " +
                        std::to_string(n) + " node(s)");
  }
  if (!(bandwidth_gbps > 0.0)) {
    throw InstanceError("demand bandwidth must be positive");
  }
  std::mt19937_64 rng(seed);
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1);
  std::vector<Demand> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t k = detail::uniform_below(rng, pairs);
    const NodeIndex origin = static_cast<NodeIndex>(k / (n - 1));
    NodeIndex dest = static_cast<NodeIndex>(k % (n - 1));
    if (dest >= origin) ++dest;
    out.push_back(Demand{std::to_string(i), origin, dest, bandwidth_gbps});
  }
  return out;
}

}  // namespace rmsa
