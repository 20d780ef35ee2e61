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

#ifndef SPARSECOMM_EXPERIMENT_H_
#define SPARSECOMM_EXPERIMENT_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sparsecomm/config.h"
#include "sparsecomm/dataset.h"
#include "sparsecomm/models.h"
#include "sparsecomm/optimizer.h"

namespace sparsecomm {

inline constexpr const char* kEpochSchema = "# schema: sparsecomm-epochs v1";
inline constexpr const char* kStepSchema = "# schema: sparsecomm-steps v1";
inline constexpr const char* kEpochHeader = "epoch,train_loss,eval_metric,lr,cumulative_bytes";
inline constexpr const char* kStepHeader =
    "step,t_forward,t_backward,t_codec,t_exchange_modeled,entries,bytes,messages,loss";

// Model and data materialized from a RunConfig.
struct Experiment {
  std::unique_ptr<Model> model;
  Dataset train;
  Dataset eval;
  std::optional<double> f_star;  // least-squares data only
};

Experiment build_experiment(const RunConfig& cfg);

struct TrainResult {
  std::vector<EpochMetrics> epochs;
  std::vector<StepReport> steps;
  LayeredParams final_params;
  std::string eval_metric_name;
};

// Runs every epoch of the configured experiment in memory.
TrainResult train(const RunConfig& cfg);

// Writes config.ini, epochs.csv and steps.csv into dir.
void write_run_outputs(const RunConfig& cfg, const TrainResult& result,
                       const std::filesystem::path& dir);

// train() then write_run_outputs() into cfg.output_dir. Returns that dir.
std::filesystem::path run(const RunConfig& cfg);

struct SweepOutcome {
  std::string name;
  bool ok = false;
  std::string message;
};

// Runs every valid grid point (up to `jobs` at a time, each in its own
// output dir). Invalid points are reported, not run.
std::vector<SweepOutcome> sweep(const std::vector<GridEntry>& grid, std::size_t jobs = 1);

}  // namespace sparsecomm

#endif  // SPARSECOMM_EXPERIMENT_H_
