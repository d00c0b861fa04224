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

// Shared fixtures, a random tiny-instance generator and naive enumerators
// used as references by the tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rmsa/rmsa.hpp"

namespace rmsa {

inline void PrintTo(const ObjectiveVector& v, std::ostream* os) {
  *os << to_string(v);
}

}  // namespace rmsa

namespace rmsa::testing {

inline SolverConfig test_config(SolveMode mode = SolveMode::indicator) {
  SolverConfig c;
  c.threads = 1;
  c.stage_time_limit_seconds = 300;
  c.mode = mode;
  c.seed = 7;
  return c;
}

inline NetworkTopology make_topology(
    std::vector<std::string> labels,
    const std::vector<std::tuple<std::string, std::string, double>>& links,
    int lc) {
  std::vector<Link> out;
  auto index = [&](const std::string& s) {
    return static_cast<NodeIndex>(
        std::find(labels.begin(), labels.end(), s) - labels.begin());
  };
  for (const auto& [a, b, km] : links) out.push_back({index(a), index(b), km});
  return NetworkTopology(std::move(labels), std::move(out), lc);
}

inline Demand demand(const NetworkTopology& g, std::string id,
                     const std::string& from, const std::string& to,
                     double gbps) {
  return Demand{std::move(id), *g.find_node(from), *g.find_node(to), gbps};
}

// Three 100 km links, one modulation reaching everything.
inline ProblemInstance triangle(int r_max = 1, int lc = 8) {
  NetworkTopology g = make_topology(
      {"1", "2", "3"}, {{"1", "2", 100}, {"2", "3", 100}, {"1", "3", 100}}, lc);
  std::vector<Demand> d{demand(g, "0", "1", "2", 100)};
  return ProblemInstance(std::move(g), {{"QPSK", 50, 1000}}, std::move(d),
                         r_max);
}

// A-B-C line, 100 km links, reach 150 km: A->C needs a regenerator at B.
inline ProblemInstance abc(int r_max = 1, int lc = 4) {
  NetworkTopology g =
      make_topology({"A", "B", "C"}, {{"A", "B", 100}, {"B", "C", 100}}, lc);
  std::vector<Demand> d{demand(g, "AC", "A", "C", 100)};
  return ProblemInstance(std::move(g), {{"QPSK", 50, 150}}, std::move(d),
                         r_max);
}

// One link A-B, `count` demands of one slot each.
inline ProblemInstance single_link(int lc, int count) {
  NetworkTopology g = make_topology({"A", "B"}, {{"A", "B", 10}}, lc);
  std::vector<Demand> d;
  for (int i = 0; i < count; ++i) {
    d.push_back(demand(g, "d" + std::to_string(i), i % 2 ? "B" : "A",
                       i % 2 ? "A" : "B", 100));
  }
  return ProblemInstance(std::move(g), {{"M", 100, 100}}, std::move(d), 0);
}

inline ProblemInstance nsfnet(std::size_t demands, int lc, int r_max,
                              std::uint64_t seed) {
  const std::filesystem::path dir =
      std::filesystem::path(RMSA_SOURCE_DIR) / "data" / "nsfnet";
  NetworkTopology g =
      load_topology(dir / "topology.json").with_slot_capacity(lc);
  auto mods = load_modulations(dir / "modulations.json");
  auto d = generate_demands(g, demands, 100.0, seed);
  return ProblemInstance(std::move(g), std::move(mods), std::move(d), r_max);
}

struct TinyLimits {
  int max_nodes = 5;
  int max_links = 7;
  int max_lc = 6;
  int max_demands = 4;
  int max_r_max = 2;
};

// Connected random instance: a random spanning tree plus extra links.
// Lengths and reaches are chosen so that reach filtering, multi-slot demands
// and regenerators all occur.
inline ProblemInstance random_tiny(std::mt19937_64& rng,
                                   const TinyLimits& lim = {}) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int n = pick(2, lim.max_nodes);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::string(1, char('A' + i)));
  std::set<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    const int u = pick(0, v - 1);
    edges.insert({u, v});
  }
  const int max_links = std::min(lim.max_links, n * (n - 1) / 2);
  const int target = pick(static_cast<int>(edges.size()), max_links);
  while (static_cast<int>(edges.size()) < target) {
    int u = pick(0, n - 1), v = pick(0, n - 1);
    if (u == v) continue;
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  std::vector<Link> links;
  for (auto [u, v] : edges) {
    links.push_back({static_cast<NodeIndex>(u), static_cast<NodeIndex>(v),
                     100.0 * pick(1, 6)});
  }
  std::shuffle(links.begin(), links.end(), rng);
  NetworkTopology g(labels, links, pick(2, lim.max_lc));

  std::vector<Modulation> mods{{"far", 25, 1000}, {"near", 50, 300}};
  const double rates[] = {25, 50, 100};
  std::vector<Demand> demands;
  const int nd = pick(1, lim.max_demands);
  for (int i = 0; i < nd; ++i) {
    int s = pick(0, n - 1), t = pick(0, n - 1);
    while (t == s) t = pick(0, n - 1);
    demands.push_back(Demand{std::to_string(i), static_cast<NodeIndex>(s),
                             static_cast<NodeIndex>(t), rates[pick(0, 2)]});
  }
  return ProblemInstance(std::move(g), std::move(mods), std::move(demands),
                         pick(0, lim.max_r_max));
}

// Every simple path as a node sequence, by brute force over permutations of
// node subsets.
inline std::vector<std::vector<NodeIndex>> naive_simple_paths(
    const NetworkTopology& g) {
  std::vector<std::vector<NodeIndex>> out;
  const std::size_t n = g.node_count();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<NodeIndex> nodes;
    for (NodeIndex v = 0; v < n; ++v) {
      if (mask & (1u << v)) nodes.push_back(v);
    }
    if (nodes.size() < 2) continue;
    do {
      bool ok = true;
      for (std::size_t i = 0; i + 1 < nodes.size() && ok; ++i) {
        ok = g.find_link(nodes[i], nodes[i + 1]).has_value();
      }
      if (ok) out.push_back(nodes);
    } while (std::next_permutation(nodes.begin(), nodes.end()));
  }
  return out;
}

inline double path_length(const NetworkTopology& g,
                          const std::vector<NodeIndex>& nodes) {
  double km = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    km += g.link(*g.find_link(nodes[i], nodes[i + 1])).length_km;
  }
  return km;
}

// Every valid chain for demand d as a list of segment ids: the cartesian
// product of the catalog up to r_max + 1 entries, filtered.
inline std::set<std::vector<SegmentId>> naive_chains(
    const ProblemInstance& instance, const SegmentCatalog& segments,
    DemandIndex d) {
  const Demand& dem = instance.demand(d);
  std::set<std::vector<SegmentId>> out;
  std::vector<SegmentId> chain;
  const std::size_t cap = static_cast<std::size_t>(instance.r_max()) + 1;
  auto valid = [&]() {
    if (segments[chain.front()].source() != dem.origin) return false;
    if (segments[chain.back()].target() != dem.destination) return false;
    std::vector<NodeIndex> walk{dem.origin};
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const Segment& p = segments[chain[i]];
      if (p.source() != walk.back()) return false;
      if (fs_count(p, dem) > instance.slot_capacity()) return false;
      walk.insert(walk.end(), p.nodes.begin() + 1, p.nodes.end());
    }
    std::vector<NodeIndex> sorted = walk;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  };
  auto grow = [&](auto&& self) -> void {
    if (!chain.empty() && valid()) out.insert(chain);
    if (chain.size() == cap) return;
    for (SegmentId p = 0; p < segments.size(); ++p) {
      chain.push_back(p);
      self(self);
      chain.pop_back();
    }
  };
  grow(grow);
  return out;
}

struct Pipeline {
  ProblemInstance instance;
  SegmentCatalog segments;
  SolutionCatalog solutions;
  IlpModel model;
};

inline Pipeline prepare(ProblemInstance instance, ModelOptions opts = {}) {
  Pipeline p;
  p.instance = std::move(instance);
  p.segments = enumerate_segments(p.instance);
  p.solutions = enumerate_solutions(p.instance, p.segments);
  p.model = build_model(p.instance, p.segments, p.solutions, opts);
  return p;
}

inline SolveReport solve(const Pipeline& p,
                         SolveMode mode = SolveMode::indicator) {
  const SolverConfig config = test_config(mode);
  auto backend = make_backend(config);
  return lexicographic_solve(p.model, p.solutions, config, *backend);
}

}  // namespace rmsa::testing
