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

// sparsecomm: train, benchmark and report on sparsified data-parallel SGD.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical divergence,
// 3 I/O error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sparsecomm/bench.h"
#include "sparsecomm/config.h"
#include "sparsecomm/experiment.h"
#include "sparsecomm/report.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIo = 3;

int RunTrain(const std::string& config_path) {
  const auto cfg = sparsecomm::load_config(config_path);
  const auto dir = sparsecomm::run(cfg);
  std::cout << "wrote " << (dir / "epochs.csv").string() << " and "
            << (dir / "steps.csv").string() << "\n";
  return 0;
}

int RunSweep(const std::string& grid_path, std::size_t jobs) {
  const auto grid = sparsecomm::load_grid(grid_path);
  const auto outcomes = sparsecomm::sweep(grid, jobs);
  int failed = 0;
  for (const auto& o : outcomes) {
    std::cout << (o.ok ? "ok      " : "not run ") << o.name << ": " << o.message << "\n";
    if (!o.ok && o.message.rfind("skipped:", 0) != 0) ++failed;
  }
  return failed == 0 ? 0 : kExitConfig;
}

int RunReport(const std::string& dir, const std::string& out_path) {
  const std::string text = sparsecomm::render_report(sparsecomm::load_runs(dir));
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path);
  if (!out || !(out << text)) throw sparsecomm::IoError("cannot write '" + out_path + "'");
  return 0;
}

int RunExport(const std::string& config_path, const std::string& out_path) {
  const auto ex = sparsecomm::build_experiment(sparsecomm::load_config(config_path));
  sparsecomm::write_dataset_csv(ex.train, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsified synchronous SGD with error feedback on a simulated cluster"};
  app.require_subcommand(1);

  std::string config_path;
  auto* train = app.add_subcommand("train", "Run one experiment and write its metrics");
  train->add_option("--config", config_path, "Run configuration file")->required();

  sparsecomm::BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Time compress + decompress per scheme");
  bench->add_option("--dim", bench_opts.dim, "Vector dimension")->required();
  bench->add_option("--fraction", bench_opts.fraction, "Fraction of coordinates kept")
      ->default_val(0.01);
  bench->add_option("--reps", bench_opts.repetitions, "Measured repetitions")->default_val(20);
  bench->add_option("--warmup", bench_opts.warmup, "Unmeasured warm-up repetitions")
      ->default_val(3);
  bench->add_option("--seed", bench_opts.seed, "Seed for the input vector")->default_val(42);

  std::string report_dir, report_out;
  auto* report = app.add_subcommand("report", "Summarize completed runs as markdown");
  report->add_option("--dir", report_dir, "Run directory or directory of runs")->required();
  report->add_option("--out", report_out, "Write to this file instead of stdout");

  std::string grid_path;
  std::size_t jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Expand a grid file and run every point");
  sweep->add_option("--grid", grid_path, "Grid file")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->default_val(1);

  std::string export_out;
  auto* exp = app.add_subcommand("export-data", "Write a config's training set as CSV");
  exp->add_option("--config", config_path, "Run configuration file")->required();
  exp->add_option("--out", export_out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*train) return RunTrain(config_path);
    if (*sweep) return RunSweep(grid_path, jobs);
    if (*report) return RunReport(report_dir, report_out);
    if (*exp) return RunExport(config_path, export_out);
    if (*bench) {
      const auto rows = sparsecomm::bench_codecs(bench_opts);
      std::cout << sparsecomm::format_bench_table(bench_opts, rows);
      return 0;
    }
  } catch (const sparsecomm::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const sparsecomm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
