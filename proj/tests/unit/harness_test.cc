// Copyright 2026 The sparsecomm Authors. All Rights Reserved.
//
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
// =============================================================================

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sparsecomm/bench.h"
#include "sparsecomm/config.h"
#include "sparsecomm/experiment.h"
#include "sparsecomm/report.h"
#include "sparsecomm/text.h"

namespace sparsecomm {
namespace {

namespace fs = std::filesystem;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("sparsecomm_harness_" +
             std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunConfig Small(const std::string& name) const {
    RunConfig cfg;
    cfg.name = name;
    cfg.model.hidden = {8};
    cfg.data.n = 128;
    cfg.data.eval_n = 64;
    cfg.data.p = 4;
    cfg.data.classes = 3;
    cfg.compressor.kind = CompressorKind::kTopK;
    cfg.compressor.fraction = 0.1;
    cfg.trainer.epochs = 2;
    cfg.trainer.batch_size = 16;
    cfg.output_dir = (root_ / name).string();
    return cfg;
  }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Drops the four timing columns of steps.csv.
  static std::string StepsWithoutTimings(const fs::path& p) {
    std::istringstream in(Slurp(p));
    std::string line, out;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto cells = Split(line, ',');
      out += cells[0];
      for (std::size_t i = 5; i < cells.size(); ++i) out += "," + cells[i];
      out += "\n";
    }
    return out;
  }

  fs::path root_;
};

TEST_F(HarnessTest, RerunsAreDeterministic) {
  auto a = Small("a");
  auto b = a;
  b.output_dir = (root_ / "b").string();
  run(a);
  run(b);
  EXPECT_EQ(Slurp(root_ / "a" / "epochs.csv"), Slurp(root_ / "b" / "epochs.csv"));
  EXPECT_EQ(StepsWithoutTimings(root_ / "a" / "steps.csv"),
            StepsWithoutTimings(root_ / "b" / "steps.csv"));
  EXPECT_EQ(load_config(root_ / "a" / "config.ini"), a);
}

TEST_F(HarnessTest, OutputFilesFollowTheSchema) {
  run(Small("s"));
  std::istringstream epochs(Slurp(root_ / "s" / "epochs.csv"));
  std::string line;
  std::getline(epochs, line);
  EXPECT_EQ(line, std::string(kEpochSchema) + " eval_metric=accuracy");
  std::getline(epochs, line);
  EXPECT_EQ(line, kEpochHeader);
  std::size_t rows = 0;
  while (std::getline(epochs, line)) ++rows;
  EXPECT_EQ(rows, 2u);

  std::istringstream steps(Slurp(root_ / "s" / "steps.csv"));
  std::getline(steps, line);
  EXPECT_EQ(line, kStepSchema);
  std::getline(steps, line);
  EXPECT_EQ(line, kStepHeader);
}

TEST_F(HarnessTest, DenseTrafficCountsEveryCoordinate) {
  auto cfg = Small("dense");
  cfg.workers = 2;
  cfg.cluster.world_size = 2;
  cfg.compressor.kind = CompressorKind::kIdentity;
  cfg.scheme = CommScheme::kAllReduce;
  const auto result = train(cfg);
  const std::size_t dim = result.final_params.total_dim();
  ASSERT_FALSE(result.steps.empty());
  for (const auto& s : result.steps) EXPECT_EQ(s.traffic.entries_sent, 2 * dim);
}

TEST_F(HarnessTest, ReportGridHasBaselineAndEveryScopeWorkerCell) {
  for (auto scope : {SparsifyScope::kLayerWise, SparsifyScope::kGlobal}) {
    for (std::size_t w : {1u, 2u}) {
      auto cfg = Small(std::string(ToString(scope)) + "_w" + std::to_string(w));
      cfg.compressor.scope = scope;
      cfg.workers = w;
      cfg.cluster.world_size = w;
      run(cfg);
    }
  }
  const auto runs = load_runs(root_);
  ASSERT_EQ(runs.size(), 4u);
  const std::string report = render_report(runs);
  EXPECT_NE(report.find("Standard SGD"), std::string::npos) << report;
  EXPECT_NE(report.find("Top-k"), std::string::npos);
  EXPECT_NE(report.find("W=1"), std::string::npos);
  EXPECT_NE(report.find("W=2"), std::string::npos);
  EXPECT_NE(report.find("Forward (measured)"), std::string::npos);
  EXPECT_NE(report.find("Exchange (modeled)"), std::string::npos);

  // A single run directory loads on its own.
  EXPECT_EQ(load_runs(runs.front().dir).size(), 1u);
}

TEST_F(HarnessTest, ReportRejectsMissingOrCorruptRuns) {
  EXPECT_THROW(load_runs(root_), IoError);
  EXPECT_THROW(load_runs(root_ / "nowhere"), IoError);
  run(Small("c"));
  std::ofstream(root_ / "c" / "epochs.csv") << "garbage\n";
  EXPECT_THROW(load_runs(root_), IoError);
}

TEST_F(HarnessTest, SweepRunsValidPointsAndSkipsInvalidOnes) {
  const std::string text = "[run]\nname = sw\nscheme = allgather\noutput_dir = " +
                           root_.string() +
                           "\n[model]\nhidden = 4\n[data]\nn = 64\neval_n = 16\np = 3\n"
                           "[trainer]\nepochs = 1\nbatch_size = 16\n"
                           "[grid]\ncompressor.kind = topk, randomk, identity\n";
  const auto outcomes = sweep(expand_grid(text), 2);
  ASSERT_EQ(outcomes.size(), 3u);
  EXPECT_TRUE(outcomes[0].ok) << outcomes[0].message;
  EXPECT_TRUE(outcomes[1].ok) << outcomes[1].message;
  EXPECT_FALSE(outcomes[2].ok);
  EXPECT_EQ(load_runs(root_).size(), 2u);
}

TEST(BenchTest, SelectionSizesAndSampleCounts) {
  BenchOptions o;
  o.dim = 10000;
  o.fraction = 0.01;
  o.repetitions = 1;
  o.warmup = 0;
  const auto rows = bench_codecs(o);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.k, 100u);
    EXPECT_EQ(r.selected, 100u);
    EXPECT_EQ(r.samples.size(), 1u);
    EXPECT_EQ(r.stddev, 0.0);
    EXPECT_LE(r.min, r.mean);
  }
  const auto table = format_bench_table(o, rows);
  EXPECT_NE(table.find("topk"), std::string::npos) << table;
  o.repetitions = 0;
  EXPECT_THROW(bench_codecs(o), ConfigError);
}

}  // namespace
}  // namespace sparsecomm
