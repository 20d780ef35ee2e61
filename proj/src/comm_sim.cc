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

#include "sparsecomm/comm_sim.h"

#include <string>

namespace sparsecomm {
namespace {

void RequireWorld(std::span<const SparsePayload> payloads, const ClusterConfig& cfg,
                  const TrafficMeter& meter) {
  cfg.Validate();
  if (payloads.size() != cfg.world_size) {
    throw ProtocolViolation("collective expects " + std::to_string(cfg.world_size) +
                            " payloads, got " + std::to_string(payloads.size()));
  }
  if (meter.world_size() != cfg.world_size) {
    throw ProtocolViolation("traffic meter sized for a different world");
  }
}

void RequireSameFrame(std::span<const SparsePayload> payloads) {
  const SparsePayload& first = payloads.front();
  for (std::size_t w = 1; w < payloads.size(); ++w) {
    if (payloads[w].scope != first.scope) {
      throw ProtocolViolation("workers 0 and " + std::to_string(w) + " disagree on scope (" +
                              first.scope.ToString() + " vs " +
                              payloads[w].scope.ToString() + ")");
    }
    if (payloads[w].dim != first.dim) {
      throw ProtocolViolation("workers 0 and " + std::to_string(w) + " disagree on dim");
    }
  }
}

}  // namespace

void ClusterConfig::Validate() const {
  if (world_size < 1) throw ConfigError("cluster world_size must be >= 1");
  if (!(bandwidth > 0.0)) throw ConfigError("cluster bandwidth must be > 0");
  if (!(latency >= 0.0)) throw ConfigError("cluster latency must be >= 0");
  if (value_bytes != 4 && value_bytes != 8) throw ConfigError("value_bytes must be 4 or 8");
  if (index_bytes != 4) throw ConfigError("index_bytes must be 4");
}

WorkerTraffic TrafficMeter::aggregate() const {
  WorkerTraffic total;
  for (const auto& t : per_worker_) total += t;
  return total;
}

SparsePayload all_reduce_sum(std::span<const SparsePayload> payloads, const ClusterConfig& cfg,
                             TrafficMeter& meter) {
  RequireWorld(payloads, cfg, meter);
  for (const auto& p : payloads) p.Validate();
  RequireSameFrame(payloads);
  const SparsePayload& first = payloads.front();
  for (std::size_t w = 1; w < payloads.size(); ++w) {
    if (payloads[w].indices != first.indices) {
      throw ProtocolViolation("allReduce needs identical coordinates; workers " +
                              std::to_string(w - 1) + " and " + std::to_string(w) +
                              " selected different index sets");
    }
  }
  const std::size_t world = payloads.size();
  if (world == 1) return first;

  SparsePayload out;
  out.scope = first.scope;
  out.dim = first.dim;
  out.indices = first.indices;
  out.values.assign(first.size(), Real{0});
  for (const auto& p : payloads) {
    for (std::size_t i = 0; i < p.size(); ++i) out.values[i] += p.values[i];
  }

  const double ring_factor = 2.0 * static_cast<double>(world - 1) / static_cast<double>(world);
  for (std::size_t w = 0; w < world; ++w) {
    WorkerTraffic t;
    t.entries_sent = payloads[w].size();
    t.messages_sent = 2 * (world - 1);
    t.bytes_sent = static_cast<double>(t.entries_sent * cfg.value_bytes) * ring_factor;
    meter.Record(w, t);
  }
  return out;
}

std::vector<std::vector<SparsePayload>> all_gather(std::span<const SparsePayload> payloads,
                                                   const ClusterConfig& cfg,
                                                   TrafficMeter& meter) {
  RequireWorld(payloads, cfg, meter);
  for (const auto& p : payloads) p.Validate();
  RequireSameFrame(payloads);
  const std::size_t world = payloads.size();
  std::vector<SparsePayload> all(payloads.begin(), payloads.end());
  std::vector<std::vector<SparsePayload>> received(world, all);
  if (world == 1) return received;

  for (std::size_t w = 0; w < world; ++w) {
    WorkerTraffic t;
    t.entries_sent = payloads[w].size();
    t.messages_sent = world - 1;
    t.bytes_sent = static_cast<double>(t.entries_sent * (cfg.value_bytes + cfg.index_bytes) *
                                       (world - 1));
    meter.Record(w, t);
  }
  return received;
}

std::vector<Real> aggregate_gathered(std::span<const SparsePayload> gathered, std::size_t dim) {
  std::vector<Real> dense(dim, Real{0});
  for (const auto& p : gathered) {
    if (p.dim != dim) {
      throw StructureError("gathered payload dim " + std::to_string(p.dim) +
                           " does not match " + std::to_string(dim));
    }
    scatter_add_into(dense, p);
  }
  return dense;
}

double model_exchange_time(const WorkerTraffic& traffic, const ClusterConfig& cfg) {
  return cfg.latency * static_cast<double>(traffic.messages_sent) +
         traffic.bytes_sent / cfg.bandwidth;
}

std::vector<double> model_exchange_time(const TrafficMeter& meter, const ClusterConfig& cfg) {
  std::vector<double> out;
  out.reserve(meter.world_size());
  for (const auto& t : meter.per_worker()) out.push_back(model_exchange_time(t, cfg));
  return out;
}

}  // namespace sparsecomm
