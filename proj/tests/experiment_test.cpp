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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace rmsa {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rmsa_exp_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    // Four-node ring with a chord.
    NetworkTopology g = testing::make_topology(
        {"1", "2", "3", "4"},
        {{"1", "2", 200}, {"2", "3", 200}, {"3", "4", 200}, {"4", "1", 200},
         {"1", "3", 300}},
        6);
    toy_ = ProblemInstance(std::move(g), {{"far", 25, 500}, {"near", 50, 250}},
                           {}, 1);
    save_instance(toy_, dir_ / "toy");
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentConfig config() const {
    ExperimentConfig c;
    c.topology_file = dir_ / "toy" / "topology.json";
    c.modulation_file = dir_ / "toy" / "modulations.json";
    c.demand_counts = {5};
    c.seeds = {1, 2, 3};
    c.solver = testing::test_config();
    c.output_dir = dir_ / "out";
    return c;
  }

  fs::path dir_;
  ProblemInstance toy_;
};

TEST_F(ExperimentTest, BatchStructure) {
  const ExperimentSummary s = run_experiment(config());
  EXPECT_EQ(s.records.size(), 3u);
  EXPECT_EQ(read_csv(dir_ / "out" / "records.csv").size(), 4u);
  EXPECT_EQ(read_csv(dir_ / "out" / "blocking.csv").size(), 2u);
  EXPECT_EQ(read_csv(dir_ / "out" / "timing.csv").size(), 2u);
  const auto heat = read_csv(dir_ / "out" / "heatmap.csv");
  ASSERT_EQ(heat.size(), 1u + toy_.topology().link_count());
  for (std::size_t i = 1; i < heat.size(); ++i) {
    const double u = std::stod(heat[i].back());
    EXPECT_GE(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
  for (const InstanceResult& r : s.records) {
    EXPECT_TRUE(r.all_optimal());
    EXPECT_TRUE(r.validation_passed);
    const fs::path inst = dir_ / "out" / "instances" / r.name;
    EXPECT_TRUE(fs::exists(inst / "demands.json"));
    EXPECT_TRUE(fs::exists(inst / "assignment.json"));
    EXPECT_TRUE(fs::exists(inst / "heatmap.csv"));
  }
}

TEST_F(ExperimentTest, AggregatesAreRecomputableFromRecords) {
  ExperimentConfig c = config();
  c.r_max_values = {1, 2};
  run_experiment(c);
  const auto records = read_csv(dir_ / "out" / "records.csv");
  const auto header = records.at(0);
  auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(
        std::find(header.begin(), header.end(), name) - header.begin());
  };
  std::map<std::string, std::vector<double>> bd, tr, tfs;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string key = r[col("num_demands")] + "," + r[col("r_max")];
    bd[key].push_back(std::stod(r[col("blocked")]));
    tr[key].push_back(std::stod(r[col("regenerators")]));
    tfs[key].push_back(std::stod(r[col("slots")]));
  }
  auto mean = [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  const auto blocking = read_csv(dir_ / "out" / "blocking.csv");
  ASSERT_EQ(blocking.size(), 3u);
  for (std::size_t i = 1; i < blocking.size(); ++i) {
    const auto& b = blocking[i];
    const std::string key = b[0] + "," + b[1];
    EXPECT_EQ(std::stod(b[3]), mean(bd.at(key)));
    EXPECT_EQ(std::stod(b[4]), mean(tr.at(key)));
    EXPECT_EQ(std::stod(b[5]), mean(tfs.at(key)));
  }
}

TEST_F(ExperimentTest, LargeCapacityBlocksNothing) {
  ExperimentConfig c = config();
  c.slot_capacity = 60;
  const ExperimentSummary s = run_experiment(c);
  for (const InstanceResult& r : s.records) EXPECT_EQ(r.metrics.blocked, 0);
  const auto blocking = read_csv(dir_ / "out" / "blocking.csv");
  EXPECT_EQ(std::stod(blocking.at(1).at(3)), 0.0);
}

TEST_F(ExperimentTest, RerunReproducesFilesAndVectors) {
  const ExperimentSummary a = run_experiment(config());
  const std::string demands =
      slurp(dir_ / "out" / "instances" / a.records[0].name / "demands.json");
  const ExperimentSummary b = run_experiment(config());
  EXPECT_EQ(
      slurp(dir_ / "out" / "instances" / b.records[0].name / "demands.json"),
      demands);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].objective, b.records[i].objective);
  }
}

TEST_F(ExperimentTest, ConfigValidation) {
  ExperimentConfig c = config();
  c.seeds.clear();
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c = config();
  c.demand_counts.clear();
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(SolveOne, AbcRecord) {
  const fs::path out = fs::temp_directory_path() / "rmsa_solve_one";
  fs::remove_all(out);
  const SolverConfig c = testing::test_config();
  auto backend = make_backend(c);
  SolveOneOptions o;
  o.output_dir = out;
  const InstanceResult r = solve_one(testing::abc(), c, *backend, o);
  EXPECT_EQ(r.objective, (ObjectiveVector{1, 1, 4}));
  EXPECT_TRUE(r.validation_passed);
  const auto assignment = nlohmann::json::parse(slurp(out / "assignment.json"));
  EXPECT_EQ(assignment[0]["segments"].size(), 2u);
  EXPECT_EQ(assignment[0]["segments"][0]["start_slot"],
            assignment[0]["segments"][1]["start_slot"]);
  fs::remove_all(out);
}

TEST(SolveOne, ExportOnlyWritesModelWithoutSolving) {
  const fs::path out = fs::temp_directory_path() / "rmsa_export_only";
  fs::remove_all(out);
  SolverConfig c = testing::test_config(SolveMode::big_m);
  ExternalSolverBackend never({"false"});
  SolveOneOptions o;
  o.output_dir = out;
  o.export_only = true;
  const InstanceResult r =
      solve_one(testing::nsfnet(4, 20, 1, 1), c, never, o);
  EXPECT_FALSE(r.solved);
  EXPECT_TRUE(fs::exists(out / "model.lp"));
  EXPECT_TRUE(fs::exists(out / "model.mps"));
  EXPECT_FALSE(fs::exists(out / "assignment.json"));
  fs::remove_all(out);
}

TEST(SolveOne, ErrorsNameTheStage) {
  SolverConfig c = testing::test_config(SolveMode::big_m);
  ExternalSolverBackend broken({"/nonexistent/solver {model} {solution}"});
  try {
    solve_one(testing::abc(), c, broken);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "solve");
  }
}

TEST(Percentile, NearestRank) {
  EXPECT_EQ(percentile({5}, 0.8), 5);
  EXPECT_EQ(percentile({1, 2, 3, 4, 5}, 0.8), 4);
  EXPECT_EQ(percentile({5, 4, 3, 2, 1, 6, 7, 8, 9, 10}, 0.8), 8);
}

}  // namespace
}  // namespace rmsa
