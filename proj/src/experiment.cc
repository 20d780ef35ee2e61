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

#include "sparsecomm/experiment.h"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "sparsecomm/text.h"

namespace sparsecomm {
namespace {

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

Experiment build_experiment(const RunConfig& cfg) {
  cfg.Validate();
  Experiment ex;
  const DataSpec& d = cfg.data;
  switch (d.kind) {
    case DataSpec::Kind::kBlobs: {
      // One draw so train and eval share cluster centers.
      const Dataset all = gen_blobs(d.classes, d.n + d.eval_n, d.p, d.separation, d.seed);
      std::vector<std::size_t> train_rows(d.n), eval_rows(d.eval_n);
      for (std::size_t i = 0; i < d.n; ++i) train_rows[i] = i;
      for (std::size_t i = 0; i < d.eval_n; ++i) eval_rows[i] = d.n + i;
      ex.train = all.Subset(train_rows);
      ex.eval = d.eval_n > 0 ? all.Subset(eval_rows) : ex.train;
      break;
    }
    case DataSpec::Kind::kLeastSquares: {
      LeastSquaresProblem ls = gen_least_squares(d.p, d.n, d.condition, d.seed, d.noise);
      ex.f_star = ls.f_star;
      ex.train = std::move(ls.data);
      ex.eval = ex.train;
      break;
    }
    case DataSpec::Kind::kCsv:
      ex.train = read_dataset_csv(d.path);
      ex.eval = ex.train;
      break;
  }
  if (ex.train.n < cfg.workers) {
    throw ConfigError("dataset has fewer rows than workers");
  }

  if (cfg.model.kind == ModelSpec::Kind::kMlp) {
    if (ex.train.num_classes < 2) throw ConfigError("mlp model needs classification data");
    std::vector<std::size_t> sizes{ex.train.p};
    sizes.insert(sizes.end(), cfg.model.hidden.begin(), cfg.model.hidden.end());
    sizes.push_back(ex.train.num_classes);
    ex.model = std::make_unique<MlpModel>(std::move(sizes), cfg.model.activation);
  } else {
    ex.model = std::make_unique<LeastSquaresModel>(ex.train.p);
  }
  return ex;
}

TrainResult train(const RunConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  Trainer trainer(*ex.model, ex.train, cfg.trainer_options());
  TrainResult result;
  result.eval_metric_name = ex.model->eval_metric_name();
  trainer.Train(
      ex.eval, [&](const EpochMetrics& m) { result.epochs.push_back(m); },
      [&](const StepReport& r) { result.steps.push_back(r); });
  result.final_params = trainer.worker(0).x;
  return result;
}

void write_run_outputs(const RunConfig& cfg, const TrainResult& result,
                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  std::ostringstream epochs;
  epochs << kEpochSchema << " eval_metric=" << result.eval_metric_name << "\n"
         << kEpochHeader << "\n";
  for (const auto& m : result.epochs) {
    epochs << m.epoch << "," << FormatDouble(m.train_loss) << "," << FormatDouble(m.eval_metric)
           << "," << FormatDouble(m.lr) << "," << FormatDouble(m.cumulative_bytes) << "\n";
  }
  std::ostringstream steps;
  steps << kStepSchema << "\n" << kStepHeader << "\n";
  for (const auto& r : result.steps) {
    steps << r.step << "," << FormatDouble(r.timings.forward) << ","
          << FormatDouble(r.timings.backward) << "," << FormatDouble(r.timings.codec) << ","
          << FormatDouble(r.timings.exchange_modeled) << "," << r.traffic.entries_sent << ","
          << FormatDouble(r.traffic.bytes_sent) << "," << r.traffic.messages_sent << ","
          << FormatDouble(r.loss) << "\n";
  }
  WriteText(dir / "config.ini", config_to_string(cfg));
  WriteText(dir / "epochs.csv", epochs.str());
  WriteText(dir / "steps.csv", steps.str());
}

std::filesystem::path run(const RunConfig& cfg) {
  const TrainResult result = train(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  write_run_outputs(cfg, result, dir);
  return dir;
}

std::vector<SweepOutcome> sweep(const std::vector<GridEntry>& grid, std::size_t jobs) {
  std::vector<SweepOutcome> out(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      out[i].name = grid[i].name;
      if (!grid[i].valid) {
        out[i].message = "skipped: " + grid[i].error;
        continue;
      }
      try {
        const auto dir = run(grid[i].config);
        out[i].ok = true;
        out[i].message = dir.string();
      } catch (const std::exception& e) {
        out[i].message = e.what();
      }
    }
  };
  jobs = std::max<std::size_t>(1, jobs);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace sparsecomm
