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

// rmsa: command-line driver.
//
//   rmsa solve      --topology T --modulations M (--demands D | --gen-demands N)
//   rmsa experiment --topology T --modulations M --gen-demands N... --seeds S...
//   rmsa enumerate  --topology T --modulations M --demands D --rmax K
//
// Exit status: 0 ok, 1 bad input, 2 pipeline failure, 3 validation failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmsa/rmsa.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct InstanceArgs {
  std::string topology;
  std::string modulations;
  std::string demands;
  std::size_t gen_demands = 0;
  double bandwidth = 100.0;
  std::uint64_t seed = 1;
  int r_max = 1;
  std::optional<int> lc;
};

struct SolverArgs {
  std::string mode = "indicator";
  int threads = 32;
  double time_limit = 600.0;
  std::string backend = "highs";
  std::string solver_cmd;
  std::optional<int> solver_seed;
};

void add_files(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--topology", a.topology, "topology JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--modulations", a.modulations, "modulation table JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--lc", a.lc, "override the slot capacity")
      ->check(CLI::PositiveNumber);
}

void add_solver(CLI::App* cmd, SolverArgs& s) {
  cmd->add_option("--mode", s.mode, "indicator | bigm")
      ->check(CLI::IsMember({"indicator", "bigm"}))
      ->capture_default_str();
  cmd->add_option("--threads", s.threads, "solver thread cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--time-limit", s.time_limit, "per-stage limit in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--backend", s.backend, "highs | external")
      ->capture_default_str();
  cmd->add_option("--solver-cmd", s.solver_cmd,
                  "command template for --backend external");
  cmd->add_option("--solver-seed", s.solver_seed, "solver random seed");
}

rmsa::SolverConfig solver_config(const SolverArgs& s) {
  rmsa::SolverConfig c;
  c.backend = s.backend;
  c.threads = s.threads;
  c.stage_time_limit_seconds = s.time_limit;
  c.mode = s.mode == "bigm" ? rmsa::SolveMode::big_m
                            : rmsa::SolveMode::indicator;
  c.seed = s.solver_seed;
  c.external_command = s.solver_cmd;
  c.validate();
  return c;
}

rmsa::ProblemInstance load(const InstanceArgs& a) {
  rmsa::NetworkTopology topology = rmsa::load_topology(a.topology);
  if (a.lc) topology = topology.with_slot_capacity(*a.lc);
  std::vector<rmsa::Modulation> modulations =
      rmsa::load_modulations(a.modulations);
  std::vector<rmsa::Demand> demands =
      a.demands.empty()
          ? rmsa::generate_demands(topology, a.gen_demands, a.bandwidth, a.seed)
          : rmsa::load_demands(a.demands, topology);
  return rmsa::ProblemInstance(std::move(topology), std::move(modulations),
                               std::move(demands), a.r_max);
}

json stage_json(const rmsa::StageReport& s) {
  json j = {{"rank", s.rank},
            {"status", rmsa::to_string(s.status)},
            {"wall_seconds", s.wall_seconds}};
  j["value"] = s.value ? json(*s.value) : json(nullptr);
  j["bound"] = s.bound ? json(*s.bound) : json(nullptr);
  return j;
}

json record_json(const rmsa::InstanceResult& r) {
  json stages = json::array();
  if (r.solved) {
    for (const auto& s : r.report.stages) stages.push_back(stage_json(s));
  }
  return {{"num_demands", r.num_demands},
          {"r_max", r.r_max},
          {"slot_capacity", r.slot_capacity},
          {"segments", r.segment_count},
          {"solutions", r.total_solutions},
          {"solved", r.solved},
          {"objective",
           {{"admitted", r.objective.admitted},
            {"regenerators", r.objective.regenerators},
            {"slots", r.objective.slots}}},
          {"metrics",
           {{"blocked", r.metrics.blocked},
            {"regenerators", r.metrics.total_regenerators},
            {"slots", r.metrics.total_fs}}},
          {"stages", stages},
          {"validation", r.solved ? (r.validation_passed ? "passed" : "failed")
                                  : "skipped"},
          {"violations", r.violation_count},
          {"preprocess_seconds", r.preprocess_seconds},
          {"build_seconds", r.build_seconds},
          {"solve_seconds", r.solve_seconds}};
}

int run_solve(const InstanceArgs& a, const SolverArgs& s, bool export_only,
              const std::string& out) {
  const rmsa::ProblemInstance instance = load(a);
  const rmsa::SolverConfig config = solver_config(s);
  rmsa::SolveOneOptions options;
  options.export_only = export_only;
  if (!out.empty()) {
    options.output_dir = out;
    rmsa::save_instance(instance, out);
    rmsa::write_text_file(fs::path(out) / "r_max.txt",
                          std::to_string(a.r_max) + "\n");
  }
  std::unique_ptr<rmsa::MilpBackend> backend;
  if (!export_only) backend = rmsa::make_backend(config);
  rmsa::ExternalSolverBackend unused;  // export-only never calls the backend
  rmsa::InstanceResult r = rmsa::solve_one(
      instance, config, backend ? *backend : unused, options);
  r.name = out.empty() ? "instance" : fs::path(out).filename().string();
  r.seed = a.seed;
  const json record = record_json(r);
  if (!out.empty()) {
    rmsa::write_text_file(fs::path(out) / "record.json", record.dump(2) + "\n");
  }
  std::cout << record.dump(2) << "\n";
  return r.solved && !r.validation_passed ? 3 : 0;
}

int run_enumerate(const InstanceArgs& a, const std::string& out) {
  const rmsa::ProblemInstance instance = load(a);
  const rmsa::SegmentCatalog segments = rmsa::enumerate_segments(instance);
  const rmsa::SolutionCatalog solutions =
      rmsa::enumerate_solutions(instance, segments);
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream seg(fs::path(out) / "segments.json");
    rmsa::write_segment_catalog(seg, segments, instance);
    std::ofstream sol(fs::path(out) / "solutions.json");
    rmsa::write_solution_catalog(sol, solutions, segments, instance);
  }
  json counts = json::object();
  for (const auto& [id, n] : rmsa::count_solutions(solutions, instance)) {
    counts[id] = n;
  }
  std::cout << json{{"segments", segments.size()},
                    {"solutions", solutions.total()},
                    {"per_demand", counts}}
                   .dump(2)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing, modulation and spectrum allocation with regenerators"};
  app.require_subcommand(1);

  InstanceArgs inst;
  SolverArgs solver;
  std::string out;
  bool export_only = false;

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_files(solve, inst);
  auto* dem = solve->add_option("--demands", inst.demands, "demand JSON")
                  ->check(CLI::ExistingFile);
  auto* gen = solve->add_option("--gen-demands", inst.gen_demands,
                                "generate N random demands");
  dem->excludes(gen);
  solve->add_option("--bandwidth", inst.bandwidth, "generated demand Gbps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_option("--seed", inst.seed, "generator seed")->capture_default_str();
  solve->add_option("--rmax", inst.r_max, "regenerators per demand")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_solver(solve, solver);
  solve->add_flag("--export-only", export_only, "write the model, do not solve");
  solve->add_option("--out", out, "output directory");

  rmsa::ExperimentConfig exp;
  std::string exp_demands;
  std::vector<std::size_t> exp_counts;
  std::vector<std::uint64_t> exp_seeds;
  std::vector<int> exp_rmax{1};
  std::optional<int> exp_lc;
  std::string exp_topology, exp_modulations, exp_out = "rmsa-out";
  SolverArgs exp_solver;
  CLI::App* experiment =
      app.add_subcommand("experiment", "batch over demand counts, seeds, r_max");
  experiment->add_option("--topology", exp_topology)
      ->required()
      ->check(CLI::ExistingFile);
  experiment->add_option("--modulations", exp_modulations)
      ->required()
      ->check(CLI::ExistingFile);
  auto* edem = experiment->add_option("--demands", exp_demands)
                   ->check(CLI::ExistingFile);
  auto* egen = experiment->add_option("--gen-demands", exp_counts,
                                      "demand counts");
  edem->excludes(egen);
  experiment->add_option("--bandwidth", exp.bandwidth_gbps)->capture_default_str();
  experiment->add_option("--seeds", exp_seeds, "generator seeds");
  experiment->add_option("--rmax", exp_rmax, "r_max values")
      ->capture_default_str();
  experiment->add_option("--lc", exp_lc)->check(CLI::PositiveNumber);
  add_solver(experiment, exp_solver);
  experiment->add_option("--out", exp_out)->capture_default_str();

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "dump segments and routing solutions");
  add_files(enumerate, inst);
  enumerate->add_option("--demands", inst.demands)
      ->required()
      ->check(CLI::ExistingFile);
  enumerate->add_option("--rmax", inst.r_max)->capture_default_str();
  enumerate->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      if (inst.demands.empty() && inst.gen_demands == 0) {
        std::cerr << "solve: give --demands or --gen-demands\n";
        return 1;
      }
      return run_solve(inst, solver, export_only, out);
    }
    if (*enumerate) return run_enumerate(inst, out);
    if (*experiment) {
      exp.topology_file = exp_topology;
      exp.modulation_file = exp_modulations;
      if (!exp_demands.empty()) exp.demand_file = exp_demands;
      exp.demand_counts = exp_counts;
      exp.seeds = exp_seeds;
      exp.r_max_values = exp_rmax;
      exp.slot_capacity = exp_lc;
      exp.solver = solver_config(exp_solver);
      exp.output_dir = exp_out;
      const rmsa::ExperimentSummary summary = rmsa::run_experiment(
          exp, [](const rmsa::InstanceResult& r) {
            std::cerr << r.name << " " << rmsa::to_string(r.objective)
                      << (r.all_optimal() ? "" : " (not proven optimal)")
                      << "\n";
          });
      std::cout << "wrote " << summary.records.size() << " records to "
                << summary.output_dir.string() << "\n";
      return 0;
    }
  } catch (const rmsa::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const rmsa::PipelineError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
