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

// Acceptance run: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace {

using namespace rmsa;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  std::string id;
  std::string title;
  bool pass = true;
  int checks = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

// One solved run plus everything later criteria need from it.
struct Run {
  std::string name;
  testing::Pipeline p;
  SolverConfig config;
  SolveReport report;
  double seconds = 0;
};

Run solve_run(std::string name, const ProblemInstance& inst,
              const SolverConfig& config) {
  Run r;
  r.name = std::move(name);
  r.config = config;
  const auto t0 = Clock::now();
  r.p = testing::prepare(inst);
  auto backend = make_backend(config);
  r.report = lexicographic_solve(r.p.model, r.p.solutions, config, *backend);
  r.seconds = since(t0);
  return r;
}

std::string vec(const ObjectiveVector& v) { return to_string(v); }

// Stage 1 alone, then stage 2 with stage 1 pinned, on a fresh backend.
void check_stages(Criterion& c, const Run& r) {
  if (!r.report.all_optimal()) return;
  auto backend = make_backend(r.config);
  const IlpModel prepared = prepare_for_mode(r.p.model, r.config, *backend);
  const StageOutcome s1 = solve_stage(prepared, *backend, r.config, 1, {});
  c.check(s1.report.status == StageStatus::optimal &&
              *s1.report.value == r.report.objective.admitted,
          r.name + ": stage 1 re-solve");
  const std::int64_t fixed[] = {*s1.report.value};
  const StageOutcome s2 = solve_stage(prepared, *backend, r.config, 2, fixed);
  c.check(s2.report.status == StageStatus::optimal &&
              *s2.report.value == r.report.objective.regenerators,
          r.name + ": stage 2 re-solve");
}

// The emitted CSV value must parse back to exactly occupied / LC.
void check_heatmap(Criterion& c, const Run& r) {
  const ValidationReport v =
      validate_assignment(r.p.instance, r.p.segments, r.report.assignment);
  const Metrics m = compute_metrics(r.p.instance, r.report.assignment);
  std::ostringstream os;
  write_heatmap_csv(os, r.p.instance, m);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  for (LinkIndex e = 0; std::getline(in, line); ++e) {
    const double emitted = std::stod(line.substr(line.rfind(',') + 1));
    const double expect = static_cast<double>(v.occupied_slots.at(e)) /
                          static_cast<double>(r.p.instance.slot_capacity());
    c.check(emitted == expect && emitted >= 0.0 && emitted <= 1.0,
            r.name + ": link " + std::to_string(e) + " usage " + line);
  }
}

// Smallest LC that covers the sum over demands of their largest per-link
// need; recomputed until the catalog stops growing.
ProblemInstance with_sufficient_capacity(ProblemInstance inst) {
  for (;;) {
    const SegmentCatalog seg = enumerate_segments(inst);
    const SolutionCatalog sol = enumerate_solutions(inst, seg);
    int need = 0;
    for (DemandIndex d = 0; d < inst.demands().size(); ++d) {
      int worst = 0;
      for (const RoutingSolution& s : sol.solutions(d)) {
        for (const LinkNeed& n : s.link_need) worst = std::max(worst, n.slots);
      }
      need += worst;
    }
    if (need <= inst.slot_capacity()) return inst;
    inst = inst.with_slot_capacity(need);
  }
}

bool all_routable(const ProblemInstance& inst) {
  const SegmentCatalog seg = enumerate_segments(inst);
  const SolutionCatalog sol = enumerate_solutions(inst, seg);
  for (DemandIndex d = 0; d < inst.demands().size(); ++d) {
    if (sol.solutions(d).empty()) return false;
  }
  return true;
}

}  // namespace

int main() {
  const auto t_start = Clock::now();
  std::vector<Criterion> out{
      {"AC1", "oracle equivalence on random tiny instances"},
      {"AC2", "validator clean on every proven-optimal solve"},
      {"AC3", "indicator and big-M modes agree"},
      {"AC4", "r_max = 2 no worse than r_max = 1"},
      {"AC5", "sufficient capacity blocks nothing"},
      {"AC6", "hand-counted enumeration and model fixtures"},
      {"AC7", "NSFNET |D| = 15, LC = 20, r_max = 1 desk run"},
      {"AC8", "stage re-solves reproduce the vector"},
      {"AC9", "heat-map usage equals validator occupancy / LC"},
  };
  Criterion& ac1 = out[0];
  Criterion& ac2 = out[1];
  Criterion& ac3 = out[2];
  Criterion& ac4 = out[3];
  Criterion& ac5 = out[4];
  Criterion& ac6 = out[5];
  Criterion& ac7 = out[6];
  Criterion& ac8 = out[7];
  Criterion& ac9 = out[8];

  const SolverConfig indicator = testing::test_config(SolveMode::indicator);
  const SolverConfig big_m = testing::test_config(SolveMode::big_m);
  std::vector<Run> runs;

  // Tiny instances: oracle, both modes, and the r_max pair.
  std::mt19937_64 rng(20260101);
  const int tiny = 60;
  int oracle_hits = 0;
  for (int i = 0; i < tiny; ++i) {
    const ProblemInstance inst = testing::random_tiny(rng);
    const std::string name = "tiny" + std::to_string(i);
    Run a = solve_run(name, inst, indicator);
    Run b = solve_run(name + "/bigm", inst, big_m);
    const OracleResult o =
        brute_force_solve(a.p.instance, a.p.segments, a.p.solutions);
    const bool both_optimal = a.report.all_optimal() && b.report.all_optimal();
    ac1.check(both_optimal && a.report.objective == o.objective,
              name + ": solve " + vec(a.report.objective) + " oracle " +
                  vec(o.objective));
    oracle_hits += a.report.objective == o.objective;
    ac3.check(both_optimal && a.report.objective == b.report.objective,
              name + ": indicator " + vec(a.report.objective) + " bigM " +
                  vec(b.report.objective));

    Run r1 = solve_run(name + "/r1", inst.with_r_max(1), indicator);
    Run r2 = solve_run(name + "/r2", inst.with_r_max(2), indicator);
    ac4.check(r1.report.all_optimal() && r2.report.all_optimal() &&
                  lex_no_worse(r2.report.objective, r1.report.objective),
              name + ": r1 " + vec(r1.report.objective) + " r2 " +
                  vec(r2.report.objective));
    for (Run* r : {&a, &b, &r1, &r2}) runs.push_back(std::move(*r));
  }

  // Sufficient capacity: tiny instances whose demands all have a route.
  std::mt19937_64 rng5(5150);
  int ac5_instances = 0;
  while (ac5_instances < 30) {
    const ProblemInstance inst = testing::random_tiny(rng5);
    if (!all_routable(inst)) continue;
    ++ac5_instances;
    Run r = solve_run("cap" + std::to_string(ac5_instances),
                      with_sufficient_capacity(inst), indicator);
    ac5.check(r.report.all_optimal() &&
                  r.report.objective.admitted ==
                      static_cast<std::int64_t>(inst.demands().size()),
              r.name + ": " + vec(r.report.objective));
    runs.push_back(std::move(r));
  }
  {
    const ProblemInstance ns = testing::nsfnet(10, 20, 1, 11);
    if (all_routable(ns)) {
      Run r = solve_run("nsfnet-cap", with_sufficient_capacity(ns), indicator);
      ac5.check(r.report.all_optimal() && r.report.objective.admitted == 10,
                r.name + ": " + vec(r.report.objective));
      runs.push_back(std::move(r));
    }
  }

  // Hand-counted fixtures.
  {
    ac6.check(enumerate_segments(testing::triangle()).size() == 12,
              "triangle segments");
    const testing::Pipeline abc = testing::prepare(testing::abc(1));
    ac6.check(abc.segments.size() == 4, "A-B-C segments");
    ac6.check(abc.solutions.solutions(0).size() == 1, "A-B-C r_max 1");
    const testing::Pipeline abc0 = testing::prepare(testing::abc(0));
    ac6.check(abc0.solutions.solutions(0).empty(), "A-B-C r_max 0");
    const IlpModel& m = abc.model;
    ac6.check(m.count(VarKind::choice) == 1 &&
                  m.count(VarKind::start_slot) == 2 &&
                  m.count(VarKind::order) == 0 && m.indicators().empty() &&
                  m.count(Family::r1) == 1 &&
                  m.count(Family::zlb) + m.count(Family::zub) +
                          m.count(Family::zfit) ==
                      6 &&
                  m.linear().size() == 7,
              "A-B-C model counts");
    const IlpModel pair = testing::prepare(testing::single_link(4, 2)).model;
    ac6.check(pair.count(VarKind::order) == 2 &&
                  pair.count(Family::r3) + pair.count(Family::r4) +
                          pair.count(Family::r5) ==
                      3,
              "shared-link pair counts");
  }

  // Desk-scale NSFNET.
  {
    SolverConfig desk;  // default backend and limits
    desk.seed = 1;
    const ProblemInstance inst = testing::nsfnet(15, 20, 1, 1);
    Run first = solve_run("nsfnet-15", inst, desk);
    Run second = solve_run("nsfnet-15/rerun", inst, desk);
    ac7.check(first.report.all_optimal(), "first run not proven optimal");
    ac7.check(first.seconds <= 600.0,
              "first run took " + std::to_string(first.seconds) + " s");
    ac7.check(validate_assignment(first.p.instance, first.p.segments,
                                  first.report.assignment)
                  .passed(),
              "first run failed validation");
    ac7.check(second.report.all_optimal() &&
                  second.report.objective == first.report.objective,
              "rerun " + vec(second.report.objective) + " vs " +
                  vec(first.report.objective));
    std::cout << "  nsfnet-15 vector " << vec(first.report.objective) << " in "
              << first.seconds << " s and " << second.seconds << " s\n";
    runs.push_back(std::move(first));
    runs.push_back(std::move(second));

    for (std::size_t d : {8, 12}) {
      Run r1 = solve_run("nsfnet-" + std::to_string(d) + "/r1",
                         testing::nsfnet(d, 20, 1, 2), indicator);
      Run r2 = solve_run("nsfnet-" + std::to_string(d) + "/r2",
                         testing::nsfnet(d, 20, 2, 2), indicator);
      ac4.check(!r1.report.all_optimal() || !r2.report.all_optimal() ||
                    lex_no_worse(r2.report.objective, r1.report.objective),
                r1.name + " " + vec(r1.report.objective) + " vs r2 " +
                    vec(r2.report.objective));
      std::cout << "  " << r1.name << " " << vec(r1.report.objective) << " "
                << (r1.report.all_optimal() ? "optimal" : "not proven") << " "
                << r1.seconds << " s; r2 " << vec(r2.report.objective) << " "
                << (r2.report.all_optimal() ? "optimal" : "not proven") << " "
                << r2.seconds << " s\n";
      runs.push_back(std::move(r1));
      runs.push_back(std::move(r2));
    }
  }

  // Criteria over every run.
  int proven = 0;
  for (const Run& r : runs) {
    if (!r.report.all_optimal()) continue;
    ++proven;
    const ValidationReport v =
        validate_assignment(r.p.instance, r.p.segments, r.report.assignment);
    ac2.check(v.passed(), r.name + ": " +
                              (v.passed() ? std::string()
                                          : v.violations[0].detail));
    check_stages(ac8, r);
    check_heatmap(ac9, r);
  }
  ac2.check(proven > 0, "no proven-optimal runs");

  int failed = 0;
  for (const Criterion& c : out) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title
              << " (" << c.checks << " checks)";
    if (!c.pass) std::cout << ": " << c.first_failure;
    std::cout << "\n";
    failed += !c.pass;
  }
  std::cout << "oracle matches " << oracle_hits << "/" << tiny << ", "
            << proven << "/" << runs.size() << " runs proven optimal, "
            << since(t_start) << " s total\n";
  return failed;
}
