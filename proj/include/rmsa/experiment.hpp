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

// End-to-end pipeline and batch driver.
//
// Output files of run_experiment (all UTF-8 CSV with a header row):
//   records.csv   one row per solved instance
//   blocking.csv  num_demands,r_max,instances,mean_bd,mean_tr,mean_tfs
//   timing.csv    num_demands,r_max,instances,timeouts,min_seconds,
//                 max_seconds,p80_seconds
//   heatmap.csv   num_demands,r_max,link,a,b,mean_usage
// Means in blocking.csv and heatmap.csv cover proven-optimal instances;
// timing.csv statistics cover instances without a timeout, using
// preprocessing plus solve time. The 80th percentile is the nearest-rank
// value at rank ceil(0.8 n).

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "rmsa/backend.hpp"
#include "rmsa/backends.hpp"
#include "rmsa/instance.hpp"
#include "rmsa/io.hpp"
#include "rmsa/model.hpp"
#include "rmsa/model_io.hpp"
#include "rmsa/preprocess.hpp"
#include "rmsa/segments.hpp"
#include "rmsa/solve.hpp"
#include "rmsa/verify.hpp"

namespace rmsa {

// Names the pipeline stage that failed.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct InstanceResult {
  std::string name;
  std::size_t num_demands = 0;
  int r_max = 0;
  std::uint64_t seed = 0;
  int slot_capacity = 0;
  std::size_t segment_count = 0;
  std::size_t total_solutions = 0;
  bool solved = false;  // false for export-only runs
  SolveReport report;
  ObjectiveVector objective;
  Metrics metrics;
  bool validation_passed = false;
  std::size_t violation_count = 0;
  double preprocess_seconds = 0.0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;

  bool all_optimal() const { return solved && report.all_optimal(); }
  bool timed_out() const { return solved && !report.all_optimal(); }
};

struct SolveOneOptions {
  // Written when set: assignment.json, validation.json, heatmap.csv and,
  // for export-only runs, model.lp (plus model.mps when indicator-free).
  std::optional<std::filesystem::path> output_dir;
  bool export_only = false;
};

inline nlohmann::json assignment_to_json(const ProblemInstance& instance,
                                         const SegmentCatalog& segments,
                                         const Assignment& assignment) {
  const NetworkTopology& g = instance.topology();
  nlohmann::json out = nlohmann::json::array();
  for (DemandIndex d = 0; d < assignment.routes.size(); ++d) {
    const auto& r = assignment.routes[d];
    nlohmann::json entry = {{"demand", instance.demand(d).id},
                            {"admitted", r.has_value()}};
    if (r) {
      nlohmann::json chain = nlohmann::json::array();
      for (SegmentId pid : r->solution.chain) {
        const Segment& p = segments[pid];
        nlohmann::json nodes = nlohmann::json::array();
        for (NodeIndex n : p.nodes) nodes.push_back(g.node_label(n));
        const auto z = r->start_slot.at(p.first_link());
        chain.push_back({{"segment", pid},
                         {"nodes", nodes},
                         {"modulation", p.modulation.name},
                         {"slots", fs_count(p, instance.demand(d))},
                         {"start_slot", z}});
      }
      nlohmann::json slots = nlohmann::json::object();
      for (const auto& [e, z] : r->start_slot) slots[g.link_name(e)] = z;
      entry["solution_index"] = r->solution_index;
      entry["regenerators"] = r->solution.reg_count;
      entry["segments"] = chain;
      entry["start_slots"] = slots;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

inline InstanceResult solve_one(const ProblemInstance& instance,
                                const SolverConfig& config,
                                MilpBackend& backend,
                                const SolveOneOptions& options = {}) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  InstanceResult result;
  result.num_demands = instance.demands().size();
  result.r_max = instance.r_max();
  result.slot_capacity = instance.slot_capacity();

  const auto t0 = clock::now();
  SegmentCatalog segments;
  SolutionCatalog solutions;
  try {
    segments = enumerate_segments(instance);
    solutions = enumerate_solutions(instance, segments);
  } catch (const std::exception& e) {
    throw PipelineError("preprocess", e.what());
  }
  const auto t1 = clock::now();
  result.segment_count = segments.size();
  result.total_solutions = solutions.total();
  result.preprocess_seconds = seconds(t0, t1);

  IlpModel model;
  try {
    model = build_model(instance, segments, solutions);
  } catch (const std::exception& e) {
    throw PipelineError("build", e.what());
  }
  const auto t2 = clock::now();
  result.build_seconds = seconds(t1, t2);

  if (options.export_only) {
    if (options.output_dir) {
      try {
        std::filesystem::create_directories(*options.output_dir);
        const IlpModel to_write =
            config.mode == SolveMode::big_m ? linearize(model) : model;
        export_model(to_write, *options.output_dir / "model.lp",
                     ModelFormat::lp);
        if (to_write.indicators().empty()) {
          export_model(to_write, *options.output_dir / "model.mps",
                       ModelFormat::mps);
        }
      } catch (const std::exception& e) {
        throw PipelineError("export", e.what());
      }
    }
    return result;
  }

  try {
    result.report = lexicographic_solve(model, solutions, config, backend);
  } catch (const std::exception& e) {
    throw PipelineError("solve", e.what());
  }
  result.solved = true;
  result.solve_seconds = seconds(t2, clock::now());
  result.objective = result.report.objective;

  const ValidationReport validation =
      validate_assignment(instance, segments, result.report.assignment);
  result.validation_passed = validation.passed();
  result.violation_count = validation.violations.size();
  result.metrics = compute_metrics(instance, result.report.assignment);

  if (options.output_dir) {
    const auto& dir = *options.output_dir;
    write_text_file(dir / "assignment.json",
                    assignment_to_json(instance, segments,
                                       result.report.assignment)
                            .dump(2) +
                        "\n");
    write_text_file(dir / "validation.json",
                    validation_to_json(validation).dump(2) + "\n");
    std::ostringstream heat;
    write_heatmap_csv(heat, instance, result.metrics);
    write_text_file(dir / "heatmap.csv", heat.str());
  }
  return result;
}

struct ExperimentConfig {
  std::filesystem::path topology_file;
  std::filesystem::path modulation_file;
  // Either a fixed demand file or generated demand sets.
  std::optional<std::filesystem::path> demand_file;
  std::vector<std::size_t> demand_counts;
  double bandwidth_gbps = 100.0;
  std::vector<std::uint64_t> seeds;
  std::vector<int> r_max_values{1};
  std::optional<int> slot_capacity;
  SolverConfig solver;
  std::filesystem::path output_dir = "rmsa-out";

  void validate() const {
    if (!demand_file && demand_counts.empty()) {
      throw std::invalid_argument(
          "experiment needs a demand file or at least one demand count");
    }
    if (!demand_file && seeds.empty()) {
      throw std::invalid_argument("generated batches need at least one seed");
    }
    if (r_max_values.empty()) {
      throw std::invalid_argument("experiment needs at least one r_max value");
    }
    solver.validate();
  }
};

struct ExperimentSummary {
  std::vector<InstanceResult> records;
  std::filesystem::path output_dir;
};

inline std::string csv_header_records() {
  return "instance,num_demands,r_max,seed,slot_capacity,admitted,blocked,"
         "regenerators,slots,stage1,stage2,stage3,segments,solutions,"
         "preprocess_seconds,solve_seconds,validation\n";
}

inline std::string csv_row(const InstanceResult& r) {
  std::ostringstream os;
  os << r.name << "," << r.num_demands << "," << r.r_max << "," << r.seed
     << "," << r.slot_capacity << "," << r.objective.admitted << ","
     << r.metrics.blocked << "," << r.objective.regenerators << ","
     << r.objective.slots << "," << to_string(r.report.stages[0].status) << ","
     << to_string(r.report.stages[1].status) << ","
     << to_string(r.report.stages[2].status) << "," << r.segment_count << ","
     << r.total_solutions << "," << format_double(r.preprocess_seconds) << ","
     << format_double(r.solve_seconds) << ","
     << (r.validation_passed ? "passed" : "failed") << "\n";
  return os.str();
}

// Nearest-rank percentile of a non-empty sample.
inline double percentile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(xs.size())));
  return xs[std::clamp<std::size_t>(rank, 1, xs.size()) - 1];
}

// Aggregate tables, recomputed purely from `records`.
inline void write_aggregates(const std::vector<InstanceResult>& records,
                             const NetworkTopology& topology,
                             std::ostream& blocking, std::ostream& timing,
                             std::ostream& heatmap) {
  using Key = std::pair<std::size_t, int>;
  std::map<Key, std::vector<const InstanceResult*>> groups;
  for (const InstanceResult& r : records) {
    groups[{r.num_demands, r.r_max}].push_back(&r);
  }
  blocking << "num_demands,r_max,instances,mean_bd,mean_tr,mean_tfs\n";
  timing << "num_demands,r_max,instances,timeouts,min_seconds,max_seconds,"
            "p80_seconds\n";
  heatmap << "num_demands,r_max,link,a,b,mean_usage\n";
  for (const auto& [key, rs] : groups) {
    std::vector<const InstanceResult*> optimal;
    std::vector<double> times;
    std::size_t timeouts = 0;
    for (const InstanceResult* r : rs) {
      if (r->all_optimal()) {
        optimal.push_back(r);
        times.push_back(r->preprocess_seconds + r->solve_seconds);
      } else if (r->timed_out()) {
        ++timeouts;
      }
    }
    const double n = static_cast<double>(optimal.size());
    double bd = 0, tr = 0, tfs = 0;
    for (const InstanceResult* r : optimal) {
      bd += static_cast<double>(r->metrics.blocked);
      tr += static_cast<double>(r->metrics.total_regenerators);
      tfs += static_cast<double>(r->metrics.total_fs);
    }
    blocking << key.first << "," << key.second << "," << optimal.size() << ",";
    if (optimal.empty()) {
      blocking << ",,\n";
    } else {
      blocking << format_double(bd / n) << "," << format_double(tr / n) << ","
               << format_double(tfs / n) << "\n";
    }
    timing << key.first << "," << key.second << "," << rs.size() << ","
           << timeouts << ",";
    if (times.empty()) {
      timing << ",,\n";
    } else {
      timing << format_double(*std::min_element(times.begin(), times.end()))
             << ","
             << format_double(*std::max_element(times.begin(), times.end()))
             << "," << format_double(percentile(times, 0.8)) << "\n";
    }
    if (optimal.empty()) continue;
    for (LinkIndex e = 0; e < topology.link_count(); ++e) {
      double sum = 0;
      for (const InstanceResult* r : optimal) sum += r->metrics.per_link_usage[e];
      heatmap << key.first << "," << key.second << "," << e << ","
              << topology.node_label(topology.link(e).a) << ","
              << topology.node_label(topology.link(e).b) << ","
              << format_double(sum / n) << "\n";
    }
  }
}

// Runs every (demand set, r_max) combination. Instance files are written
// before solving so a failing instance can be replayed. A proven-optimal
// solve whose assignment fails validation aborts the batch.
inline ExperimentSummary run_experiment(
    const ExperimentConfig& config,
    const std::function<void(const InstanceResult&)>& on_result = {}) {
  config.validate();
  namespace fs = std::filesystem;
  NetworkTopology topology = load_topology(config.topology_file);
  if (config.slot_capacity) {
    topology = topology.with_slot_capacity(*config.slot_capacity);
  }
  const std::vector<Modulation> modulations =
      load_modulations(config.modulation_file);

  struct DemandSet {
    std::string name;
    std::uint64_t seed;
    std::vector<Demand> demands;
  };
  std::vector<DemandSet> sets;
  if (config.demand_file) {
    sets.push_back({"fixed", 0, load_demands(*config.demand_file, topology)});
  } else {
    for (std::size_t count : config.demand_counts) {
      for (std::uint64_t seed : config.seeds) {
        sets.push_back({"D" + std::to_string(count) + "_s" + std::to_string(seed),
                        seed,
                        generate_demands(topology, count, config.bandwidth_gbps,
                                         seed)});
      }
    }
  }

  const auto backend = make_backend(config.solver);
  ExperimentSummary summary;
  summary.output_dir = config.output_dir;
  fs::create_directories(config.output_dir);
  std::ofstream records(config.output_dir / "records.csv", std::ios::binary);
  records << csv_header_records();

  for (const DemandSet& set : sets) {
    for (int r_max : config.r_max_values) {
      const ProblemInstance instance(topology, modulations, set.demands, r_max);
      const std::string name = set.name + "_r" + std::to_string(r_max);
      const fs::path dir = config.output_dir / "instances" / name;
      save_instance(instance, dir);
      write_text_file(dir / "r_max.txt", std::to_string(r_max) + "\n");

      SolveOneOptions options;
      options.output_dir = dir;
      InstanceResult result = solve_one(instance, config.solver, *backend,
                                        options);
      result.name = name;
      result.seed = set.seed;
      if (result.all_optimal() && !result.validation_passed) {
        throw PipelineError(
            "validate", "instance " + name +
                            " failed validation after an optimal solve; "
                            "files kept in " +
                            dir.string());
      }
      records << csv_row(result) << std::flush;
      if (on_result) on_result(result);
      summary.records.push_back(std::move(result));
    }
  }

  std::ofstream blocking(config.output_dir / "blocking.csv", std::ios::binary);
  std::ofstream timing(config.output_dir / "timing.csv", std::ios::binary);
  std::ofstream heatmap(config.output_dir / "heatmap.csv", std::ios::binary);
  write_aggregates(summary.records, topology, blocking, timing, heatmap);
  return summary;
}

}  // namespace rmsa
