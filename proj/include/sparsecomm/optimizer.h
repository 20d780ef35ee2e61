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

#ifndef SPARSECOMM_OPTIMIZER_H_
#define SPARSECOMM_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sparsecomm/comm_sim.h"
#include "sparsecomm/compressors.h"
#include "sparsecomm/dataset.h"
#include "sparsecomm/models.h"
#include "sparsecomm/param_space.h"

namespace sparsecomm {

struct TrainerConfig {
  double gamma0 = 0.1;
  std::vector<std::size_t> lr_decay_epochs;
  double lr_decay_factor = 10.0;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  bool scale_lr_by_workers = false;
  // e <- p - q with the aggregated q instead of the local residual.
  bool literal_error_update = false;

  void Validate() const;
  bool operator==(const TrainerConfig&) const = default;
};

// gamma0 * (W if scaling) / factor^(#decay epochs <= epoch)
double lr_at(std::size_t epoch, const TrainerConfig& cfg, std::size_t world_size);

enum class CommScheme { kAllReduce, kAllGather };
std::string_view ToString(CommScheme scheme);
CommScheme ParseCommScheme(std::string_view s);

// Rejects compressor/collective pairings that cannot work: identity needs
// allreduce, top-k needs allgather, and random selections under allreduce
// need a shared seed. The message names the violated rule.
void CheckSchemeCompatibility(const CompressorConfig& cfg, CommScheme scheme);

// How the training set is split across workers.
enum class DataPartition {
  kShard,      // disjoint shards
  kReplicate,  // every worker sees all rows in the same order
};

struct WorkerState {
  std::uint32_t id = 0;
  LayeredParams x;  // parameters
  LayeredParams e;  // error memory
  LayeredParams m;  // momentum buffer
  Dataset shard;
  std::vector<std::size_t> order;  // current epoch's visiting order
};

// Weight decay and momentum applied to the raw stochastic gradient:
// m <- beta * m + (grad + wd * x); returns m.
LayeredParams local_gradient(WorkerState& state, const Model& model, const TrainerConfig& cfg,
                             std::span<const std::size_t> rows);

struct HalfStep {
  std::vector<SparsePayload> payloads;
  LayeredParams p;
};

// p = gamma * g + e; payloads = C(p).
HalfStep worker_half_step(const LayeredParams& g, const LayeredParams& e, Real gamma,
                          const CompressorConfig& cfg, const RngStream& step_stream);

struct StageTimings {
  double forward = 0.0;
  double backward = 0.0;
  double codec = 0.0;
  double exchange_modeled = 0.0;

  double total() const { return forward + backward + codec + exchange_modeled; }
};

struct StepReport {
  std::size_t step = 0;
  std::size_t epoch = 0;
  StageTimings timings;  // measured stages are means over workers
  WorkerTraffic traffic;  // cluster-wide
  double loss = 0.0;      // mean worker batch loss
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double eval_metric = 0.0;
  double lr = 0.0;
  double cumulative_bytes = 0.0;
};

// Everything one worker did in one step, for invariant checks.
struct WorkerStepTrace {
  std::size_t step = 0;
  std::uint32_t worker = 0;
  const LayeredParams& p;
  const LayeredParams& sent;  // decompressed own payloads
  const LayeredParams& e_next;
  const LayeredParams& q;  // aggregated update
  const std::vector<SparsePayload>& payloads;
};

struct TrainerOptions {
  TrainerConfig trainer;
  CompressorConfig compressor;
  ClusterConfig cluster;
  CommScheme scheme = CommScheme::kAllGather;
  DataPartition partition = DataPartition::kShard;
  std::uint64_t data_seed = 0;
  std::uint64_t init_seed = 0;
};

// Synchronous data-parallel SGD with compressed gradients and error feedback
// over a simulated cluster. Workers run in worker-id order inside each step;
// the result matches any concurrent execution because every reduction uses
// that same order.
class Trainer {
 public:
  using Observer = std::function<void(const WorkerStepTrace&)>;

  Trainer(const Model& model, const Dataset& train_data, TrainerOptions options);

  // One iteration of the compressed, error-compensated update on all workers.
  StepReport Step();
  // Runs every remaining epoch. on_epoch sees each epoch's metrics.
  void Train(const Dataset& eval_data, const std::function<void(const EpochMetrics&)>& on_epoch,
             const std::function<void(const StepReport&)>& on_step = {});

  void set_observer(Observer observer) { observer_ = std::move(observer); }

  std::size_t world_size() const { return workers_.size(); }
  std::size_t steps_per_epoch() const { return steps_per_epoch_; }
  std::size_t batch_rows() const { return batch_rows_; }
  std::size_t step_count() const { return step_; }
  const WorkerState& worker(std::size_t w) const { return workers_.at(w); }
  const TrainerOptions& options() const { return options_; }
  double cumulative_bytes() const { return cumulative_bytes_; }

 private:
  void StartEpochIfNeeded();

  const Model& model_;
  TrainerOptions options_;
  std::vector<WorkerState> workers_;
  std::size_t steps_per_epoch_ = 0;
  std::size_t batch_rows_ = 0;
  std::size_t step_ = 0;
  double cumulative_bytes_ = 0.0;
  Observer observer_;
};

}  // namespace sparsecomm

#endif  // SPARSECOMM_OPTIMIZER_H_
