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

// Solves a three-node line in memory and prints the chosen route.
// A -- B -- C, 100 km links, a 150 km reach: A->C needs a regenerator at B.

#include <iostream>

#include "rmsa/rmsa.hpp"

int main() {
  using namespace rmsa;
  NetworkTopology g({"A", "B", "C"}, {{0, 1, 100.0}, {1, 2, 100.0}}, 4);
  const ProblemInstance inst(std::move(g), {{"QPSK", 50, 150}},
                             {Demand{"AC", 0, 2, 100}}, 1);

  const SegmentCatalog segments = enumerate_segments(inst);
  const SolutionCatalog solutions = enumerate_solutions(inst, segments);
  const IlpModel model = build_model(inst, segments, solutions);

  SolverConfig config;
  config.threads = 1;
  auto backend = make_backend(config);
  const SolveReport report =
      lexicographic_solve(model, solutions, config, *backend);

  std::cout << "objective " << to_string(report.objective) << "\n";
  for (const auto& route : report.assignment.routes) {
    if (!route) continue;
    for (SegmentId pid : route->solution.chain) {
      const Segment& s = segments[pid];
      std::cout << "  segment";
      for (NodeIndex n : s.nodes) std::cout << " " << inst.topology().node_label(n);
      std::cout << " via " << s.modulation.name << ", start slot "
                << route->start_slot.at(s.links.front().link) << "\n";
    }
  }
  const ValidationReport v =
      validate_assignment(inst, segments, report.assignment);
  std::cout << "validation " << (v.passed() ? "clean" : "FAILED") << "\n";
  return v.passed() ? 0 : 1;
}
