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

#include "sparsecomm/optimizer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace sparsecomm {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Dense view of one payload's target inside a layered vector.
std::span<Real> TargetOf(LayeredParams& dense, const SparsePayload& payload) {
  return payload.scope.is_global() ? dense.values() : dense.layer(payload.scope.layer);
}

}  // namespace

void TrainerConfig::Validate() const {
  if (!(gamma0 > 0.0)) throw ConfigError("gamma0 must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (!(lr_decay_factor > 0.0)) throw ConfigError("lr_decay_factor must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  for (std::size_t i = 0; i < lr_decay_epochs.size(); ++i) {
    if (lr_decay_epochs[i] >= epochs) {
      throw ConfigError("lr decay epoch " + std::to_string(lr_decay_epochs[i]) +
                        " is not below the epoch count " + std::to_string(epochs));
    }
    if (i > 0 && lr_decay_epochs[i] <= lr_decay_epochs[i - 1]) {
      throw ConfigError("lr decay epochs must be strictly increasing");
    }
  }
}

double lr_at(std::size_t epoch, const TrainerConfig& cfg, std::size_t world_size) {
  double lr = cfg.gamma0;
  if (cfg.scale_lr_by_workers) lr *= static_cast<double>(world_size);
  for (std::size_t decay_epoch : cfg.lr_decay_epochs) {
    if (decay_epoch <= epoch) lr /= cfg.lr_decay_factor;
  }
  return lr;
}

std::string_view ToString(CommScheme scheme) {
  return scheme == CommScheme::kAllReduce ? "allreduce" : "allgather";
}

CommScheme ParseCommScheme(std::string_view s) {
  if (s == "allreduce") return CommScheme::kAllReduce;
  if (s == "allgather") return CommScheme::kAllGather;
  throw ConfigError("unknown comm scheme '" + std::string(s) +
                    "' (expected allreduce or allgather)");
}

void CheckSchemeCompatibility(const CompressorConfig& cfg, CommScheme scheme) {
  if (cfg.kind == CompressorKind::kIdentity && scheme != CommScheme::kAllReduce) {
    throw ConfigError("rule identity-requires-allreduce: the identity compressor is dense "
                      "and must use allreduce");
  }
  if (cfg.kind == CompressorKind::kTopK && scheme != CommScheme::kAllGather) {
    throw ConfigError("rule topk-requires-allgather: top-k selects per-worker coordinates "
                      "and must use allgather");
  }
  if (cfg.uses_randomness() && scheme == CommScheme::kAllReduce &&
      cfg.seed_mode != SeedMode::kShared) {
    throw ConfigError("rule allreduce-requires-shared-seed: " + std::string(ToString(cfg.kind)) +
                      " with allreduce needs seed_mode = shared");
  }
}

LayeredParams local_gradient(WorkerState& state, const Model& model, const TrainerConfig& cfg,
                             std::span<const std::size_t> rows) {
  if (state.shard.n == 0) throw ConfigError("worker " + std::to_string(state.id) + " has no data");
  LayeredParams g = model.Gradient(state.x, Batch{state.shard, rows});
  if (cfg.weight_decay != 0.0) g.Axpy(static_cast<Real>(cfg.weight_decay), state.x);
  const Real beta = static_cast<Real>(cfg.momentum);
  auto mv = state.m.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = beta * mv[i] + gv[i];
  return state.m;
}

HalfStep worker_half_step(const LayeredParams& g, const LayeredParams& e, Real gamma,
                          const CompressorConfig& cfg, const RngStream& step_stream) {
  if (!g.SameStructure(e)) throw StructureError("gradient and error memory differ in structure");
  HalfStep out{{}, LayeredParams::ZerosLike(g)};
  auto pv = out.p.values();
  const auto gv = g.values();
  const auto ev = e.values();
  for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = gamma * gv[i] + ev[i];
  out.payloads = compress_scoped(out.p, cfg, step_stream);
  return out;
}

Trainer::Trainer(const Model& model, const Dataset& train_data, TrainerOptions options)
    : model_(model), options_(std::move(options)) {
  options_.trainer.Validate();
  options_.compressor.Validate();
  options_.cluster.Validate();
  CheckSchemeCompatibility(options_.compressor, options_.scheme);
  train_data.Validate();

  const std::size_t world = options_.cluster.world_size;
  const LayeredParams x0 = model_.InitParams(options_.init_seed);
  std::size_t min_shard = train_data.n;
  for (std::size_t w = 0; w < world; ++w) {
    WorkerState s;
    s.id = static_cast<std::uint32_t>(w);
    s.x = x0;
    s.e = LayeredParams::ZerosLike(x0);
    s.m = LayeredParams::ZerosLike(x0);
    s.shard = options_.partition == DataPartition::kShard
                  ? shard(train_data, world, w, options_.data_seed)
                  : train_data;
    min_shard = std::min(min_shard, s.shard.n);
    workers_.push_back(std::move(s));
  }
  // Every worker takes the same number of equal-size batches per epoch; a
  // trailing partial batch is dropped.
  batch_rows_ = std::min(options_.trainer.batch_size, min_shard);
  steps_per_epoch_ = min_shard / batch_rows_;
}

void Trainer::StartEpochIfNeeded() {
  if (step_ % steps_per_epoch_ != 0) return;
  const std::size_t epoch = step_ / steps_per_epoch_;
  for (auto& w : workers_) {
    const std::uint32_t order_key = options_.partition == DataPartition::kShard ? w.id : 0;
    w.order = epoch_order(w.shard.n, options_.data_seed, order_key, epoch);
  }
}

StepReport Trainer::Step() {
  StartEpochIfNeeded();
  const std::size_t world = workers_.size();
  const std::size_t epoch = step_ / steps_per_epoch_;
  const std::size_t in_epoch = step_ % steps_per_epoch_;
  const Real gamma = static_cast<Real>(lr_at(epoch, options_.trainer, world));
  const CompressorConfig& ccfg = options_.compressor;

  StepReport report;
  report.step = step_;
  report.epoch = epoch;

  // Local gradient, p = gamma g + e, q_w = C(p).
  std::vector<HalfStep> half;
  half.reserve(world);
  double forward = 0.0, backward = 0.0, codec = 0.0, loss_sum = 0.0;
  for (auto& w : workers_) {
    const std::span<const std::size_t> rows(w.order.data() + in_epoch * batch_rows_, batch_rows_);
    auto t0 = Clock::now();
    const double loss = model_.Loss(w.x, Batch{w.shard, rows});
    forward += SecondsSince(t0);
    if (!std::isfinite(loss)) {
      throw DivergenceError("divergence: worker " + std::to_string(w.id) +
                            " has non-finite training loss at step " + std::to_string(step_));
    }
    loss_sum += loss;

    t0 = Clock::now();
    const LayeredParams g = local_gradient(w, model_, options_.trainer, rows);
    backward += SecondsSince(t0);

    t0 = Clock::now();
    const RngStream stream(ccfg.base_seed, rng_tag(ccfg, w.id), step_);
    half.push_back(worker_half_step(g, w.e, gamma, ccfg, stream));
    codec += SecondsSince(t0);
  }

  // Exchange, one collective per payload ordinal.
  TrafficMeter meter(world);
  const std::size_t num_payloads = half.front().payloads.size();
  std::vector<LayeredParams> q(world, LayeredParams::ZerosLike(workers_.front().x));
  for (std::size_t j = 0; j < num_payloads; ++j) {
    std::vector<SparsePayload> round;
    round.reserve(world);
    for (const auto& h : half) round.push_back(h.payloads[j]);

    if (world == 1) {
      auto t0 = Clock::now();
      scatter_add_into(TargetOf(q[0], round[0]), round[0]);
      codec += SecondsSince(t0);
    } else if (options_.scheme == CommScheme::kAllReduce) {
      const SparsePayload reduced = all_reduce_sum(round, options_.cluster, meter);
      auto t0 = Clock::now();
      for (auto& qw : q) scatter_add_into(TargetOf(qw, reduced), reduced);
      codec += SecondsSince(t0);
    } else {
      const auto received = all_gather(round, options_.cluster, meter);
      auto t0 = Clock::now();
      for (std::size_t w = 0; w < world; ++w) {
        const auto dense = aggregate_gathered(received[w], round[0].dim);
        auto target = TargetOf(q[w], round[0]);
        std::copy(dense.begin(), dense.end(), target.begin());
      }
      codec += SecondsSince(t0);
    }
  }

  // x <- x - q; e <- p - C(p) (or p - q in literal mode).
  for (std::size_t w = 0; w < world; ++w) {
    WorkerState& ws = workers_[w];
    ws.x -= q[w];
    const LayeredParams sent = decompress_scoped(half[w].payloads, ws.x.shared_shape());
    ws.e = half[w].p;
    ws.e -= options_.trainer.literal_error_update ? q[w] : sent;
    if (observer_) {
      observer_(WorkerStepTrace{step_, ws.id, half[w].p, sent, ws.e, q[w], half[w].payloads});
    }
  }

  const auto exchange = model_exchange_time(meter, options_.cluster);
  const double w_count = static_cast<double>(world);
  report.timings.forward = forward / w_count;
  report.timings.backward = backward / w_count;
  report.timings.codec = codec / w_count;
  report.timings.exchange_modeled = *std::max_element(exchange.begin(), exchange.end());
  report.traffic = meter.aggregate();
  report.loss = loss_sum / w_count;
  cumulative_bytes_ += report.traffic.bytes_sent;
  ++step_;
  return report;
}

void Trainer::Train(const Dataset& eval_data,
                    const std::function<void(const EpochMetrics&)>& on_epoch,
                    const std::function<void(const StepReport&)>& on_step) {
  const std::size_t total_steps = options_.trainer.epochs * steps_per_epoch_;
  while (step_ < total_steps) {
    const std::size_t epoch = step_ / steps_per_epoch_;
    double loss_sum = 0.0;
    for (std::size_t s = 0; s < steps_per_epoch_; ++s) {
      const StepReport r = Step();
      loss_sum += r.loss;
      if (on_step) on_step(r);
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(steps_per_epoch_);
    m.eval_metric = model_.EvalMetric(workers_.front().x, eval_data);
    m.lr = lr_at(epoch, options_.trainer, workers_.size());
    m.cumulative_bytes = cumulative_bytes_;
    if (on_epoch) on_epoch(m);
  }
}

}  // namespace sparsecomm
