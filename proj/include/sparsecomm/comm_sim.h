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

#ifndef SPARSECOMM_COMM_SIM_H_
#define SPARSECOMM_COMM_SIM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sparsecomm/param_space.h"

namespace sparsecomm {

// Simulated peer-to-peer cluster. Only the byte accounting constants are
// modeled; nothing goes over a wire.
struct ClusterConfig {
  std::size_t world_size = 1;
  double bandwidth = 1.25e9;  // bytes/s, a 10 Gbit NIC
  double latency = 1e-5;      // seconds per message
  std::size_t value_bytes = sizeof(Real);
  std::size_t index_bytes = 4;

  void Validate() const;
  bool operator==(const ClusterConfig&) const = default;
};

struct WorkerTraffic {
  std::uint64_t messages_sent = 0;
  std::uint64_t entries_sent = 0;
  // Modeled volume; fractional under the ring allReduce volume factor.
  double bytes_sent = 0.0;

  WorkerTraffic& operator+=(const WorkerTraffic& o) {
    messages_sent += o.messages_sent;
    entries_sent += o.entries_sent;
    bytes_sent += o.bytes_sent;
    return *this;
  }
  bool operator==(const WorkerTraffic&) const = default;
};

class TrafficMeter {
 public:
  explicit TrafficMeter(std::size_t world_size = 1) : per_worker_(world_size) {}

  void Record(std::size_t worker, const WorkerTraffic& t) { per_worker_.at(worker) += t; }
  void Reset() { per_worker_.assign(per_worker_.size(), WorkerTraffic{}); }

  std::size_t world_size() const { return per_worker_.size(); }
  const WorkerTraffic& worker(std::size_t w) const { return per_worker_.at(w); }
  const std::vector<WorkerTraffic>& per_worker() const { return per_worker_; }
  WorkerTraffic aggregate() const;

 private:
  std::vector<WorkerTraffic> per_worker_;
};

// Ring allReduce over payloads that share scope, dim, and coordinates.
// Values are summed in ascending worker order; only values are charged on
// the wire since coordinates are reproducible from the shared seed. Throws
// ProtocolViolation naming the first worker pair whose index sets differ.
SparsePayload all_reduce_sum(std::span<const SparsePayload> payloads, const ClusterConfig& cfg,
                             TrafficMeter& meter);

// Every worker receives all W payloads in worker-id order. Index and value
// pairs are charged to each sender once per peer.
std::vector<std::vector<SparsePayload>> all_gather(std::span<const SparsePayload> payloads,
                                                   const ClusterConfig& cfg,
                                                   TrafficMeter& meter);

// Dense sum of gathered payloads, accumulated in the order given.
std::vector<Real> aggregate_gathered(std::span<const SparsePayload> gathered, std::size_t dim);

// latency * messages + bytes / bandwidth.
double model_exchange_time(const WorkerTraffic& traffic, const ClusterConfig& cfg);
std::vector<double> model_exchange_time(const TrafficMeter& meter, const ClusterConfig& cfg);

}  // namespace sparsecomm

#endif  // SPARSECOMM_COMM_SIM_H_
