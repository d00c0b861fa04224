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

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace rmsa {
namespace {

TEST(Segments, HandCounts) {
  EXPECT_EQ(enumerate_segments(testing::triangle()).size(), 12u);
  EXPECT_EQ(enumerate_segments(testing::abc()).size(), 4u);
  EXPECT_EQ(enumerate_segments(testing::single_link(2, 1)).size(), 2u);
}

TEST(Segments, NoModulationReachesAnything) {
  const ProblemInstance inst(
      testing::make_topology({"A", "B"}, {{"A", "B", 500}}, 4), {{"m", 50, 100}},
      {}, 1);
  EXPECT_TRUE(enumerate_segments(inst).empty());
}

TEST(Segments, PicksMostEfficientReachingModulation) {
  const NetworkTopology g =
      testing::make_topology({"A", "B", "C"}, {{"A", "B", 100}, {"B", "C", 100}}, 8);
  // Table order puts a tie first to check the tie rule.
  const std::vector<Modulation> mods{
      {"slow", 12.5, 1000}, {"fast", 50, 150}, {"fast2", 50, 150}};
  const ProblemInstance inst(g, mods, {}, 1);
  for (const Segment& p : enumerate_segments(inst)) {
    if (p.hop_count() == 1) {
      EXPECT_EQ(p.modulation.name, "fast");
      EXPECT_EQ(p.modulation_index, 1u);
    } else {
      EXPECT_EQ(p.modulation.name, "slow");
    }
  }
}

TEST(Segments, ReachBoundaryIsInclusive) {
  const ProblemInstance inst(
      testing::make_topology({"A", "B", "C"}, {{"A", "B", 0.1}, {"B", "C", 0.2}},
                             4),
      {{"m", 50, 0.3}}, {}, 0);
  // 0.1 + 0.2 exceeds 0.3 by rounding only.
  EXPECT_EQ(enumerate_segments(inst).size(), 6u);
}

TEST(Segments, FsCount) {
  const Demand d{"0", 0, 1, 100};
  Segment p;
  p.modulation = {"16QAM", 50, 1};
  EXPECT_EQ(fs_count(p, d), 2);
  p.modulation = {"8QAM", 37.5, 1};
  EXPECT_EQ(fs_count(p, d), 3);
  p.modulation = {"x", 100, 1};
  EXPECT_EQ(fs_count(p, d), 1);
  p.modulation = {"x", 1000, 1};
  EXPECT_EQ(fs_count(p, d), 1);
  // 0.3 / 0.1 is 2.9999999999999996 in binary floating point.
  p.modulation = {"x", 0.1, 1};
  EXPECT_EQ(fs_count(p, Demand{"0", 0, 1, 0.3}), 3);
}

TEST(Segments, FsCountMonotoneInBandwidth) {
  Segment p;
  p.modulation = {"m", 37.5, 1};
  int last = 0;
  for (double bw = 1; bw <= 400; bw += 0.5) {
    const int f = fs_count(p, Demand{"0", 0, 1, bw});
    EXPECT_GE(f, last);
    last = f;
  }
}

TEST(Segments, MaxHopsGuardThrows) {
  SegmentOptions opts;
  opts.max_hops = 1;
  EXPECT_THROW(enumerate_segments(testing::triangle(), opts), LimitExceeded);
  opts.max_hops = 2;
  EXPECT_EQ(enumerate_segments(testing::triangle(), opts).size(), 12u);
}

// Reference: all simple paths by brute force, filtered by reach.
TEST(Segments, MatchesNaivePathEnumeration) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 60; ++i) {
    const ProblemInstance inst = testing::random_tiny(rng);
    const SegmentCatalog cat = enumerate_segments(inst);
    std::set<std::vector<NodeIndex>> got;
    for (const Segment& p : cat) got.insert(p.nodes);
    EXPECT_EQ(got.size(), cat.size());
    std::set<std::vector<NodeIndex>> want;
    for (const auto& nodes : testing::naive_simple_paths(inst.topology())) {
      if (testing::path_length(inst.topology(), nodes) <= 1000 + 1e-9) {
        want.insert(nodes);
      }
    }
    EXPECT_EQ(got, want);
  }
}

TEST(Segments, ReversalAndConsistency) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 40; ++i) {
    const ProblemInstance inst = testing::random_tiny(rng);
    const SegmentCatalog cat = enumerate_segments(inst);
    for (SegmentId id = 0; id < cat.size(); ++id) {
      const Segment& p = cat[id];
      EXPECT_EQ(p.id, id);
      std::vector<NodeIndex> rev(p.nodes.rbegin(), p.nodes.rend());
      const auto back = cat.find(rev);
      ASSERT_TRUE(back.has_value());
      EXPECT_EQ(cat[*back].modulation, p.modulation);
      EXPECT_DOUBLE_EQ(cat[*back].length_km, p.length_km);
      EXPECT_EQ(p.links.size() + 1, p.nodes.size());
      for (LinkIndex e = 0; e < inst.topology().link_count(); ++e) {
        EXPECT_EQ(cat.incidence(id, e), p.uses(e));
      }
      const auto starts = cat.starting_at(p.source());
      EXPECT_NE(std::find(starts.begin(), starts.end(), id), starts.end());
    }
  }
}

TEST(Segments, ReachFilterIsASubset) {
  std::mt19937_64 rng(5);
  SegmentOptions all;
  all.apply_reach = false;
  for (int i = 0; i < 30; ++i) {
    const ProblemInstance inst = testing::random_tiny(rng);
    std::set<std::vector<NodeIndex>> filtered, unfiltered;
    for (const Segment& p : enumerate_segments(inst)) filtered.insert(p.nodes);
    for (const Segment& p : enumerate_segments(inst, all)) {
      unfiltered.insert(p.nodes);
    }
    EXPECT_TRUE(std::includes(unfiltered.begin(), unfiltered.end(),
                              filtered.begin(), filtered.end()));
  }
}

TEST(Segments, DeterministicAndDumpable) {
  const ProblemInstance inst = testing::nsfnet(0, 20, 1, 0);
  const SegmentCatalog a = enumerate_segments(inst);
  const SegmentCatalog b = enumerate_segments(inst);
  ASSERT_EQ(a.size(), b.size());
  for (SegmentId p = 0; p < a.size(); ++p) EXPECT_EQ(a[p].nodes, b[p].nodes);
  std::ostringstream os;
  write_segment_catalog(os, a, inst);
  EXPECT_NE(os.str().find("\"modulation\""), std::string::npos);
}

}  // namespace
}  // namespace rmsa
