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

#ifndef SPARSECOMM_DATASET_H_
#define SPARSECOMM_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sparsecomm/types.h"

namespace sparsecomm {

// Row-major n x p features with one label per row. num_classes == 0 marks a
// regression target; otherwise labels hold class ids 0..num_classes-1.
struct Dataset {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t num_classes = 0;
  std::vector<Real> features;
  std::vector<Real> labels;

  std::span<const Real> row(std::size_t i) const {
    return std::span<const Real>(features).subspan(i * p, p);
  }
  void Validate() const;
  Dataset Subset(std::span<const std::size_t> rows) const;
  bool operator==(const Dataset&) const = default;
};

struct LeastSquaresProblem {
  Dataset data;
  std::vector<Real> optimum;
  double f_star = 0.0;
};

// f(x) = 1/(2n) ||Ax - b||^2 for explicit A (row-major n x p) and b, with the
// minimizer from a direct QR solve.
LeastSquaresProblem least_squares_from(std::size_t n, std::size_t p, std::vector<Real> a,
                                       std::vector<Real> b);

// Random instance whose Hessian A^T A / n has eigenvalues spread
// geometrically over [1/condition, 1]. b = A x_true + noise * N(0, 1).
LeastSquaresProblem gen_least_squares(std::size_t p, std::size_t n, double condition,
                                      std::uint64_t seed, double noise = 0.1);

// Balanced Gaussian clusters (unit variance) around centers at distance
// `separation` from the origin.
Dataset gen_blobs(std::size_t classes, std::size_t n, std::size_t p, double separation,
                  std::uint64_t seed);

// Row ids of worker `worker_id`'s shard: one seed-keyed shuffle of 0..n-1,
// then contiguous near-equal slices with the remainder going to the lowest ids.
std::vector<std::size_t> shard_rows(std::size_t n, std::size_t world_size, std::size_t worker_id,
                                    std::uint64_t seed);
Dataset shard(const Dataset& data, std::size_t world_size, std::size_t worker_id,
              std::uint64_t seed);

// Per-epoch visiting order of a shard, keyed by (seed, worker, epoch).
std::vector<std::size_t> epoch_order(std::size_t shard_size, std::uint64_t seed,
                                     std::uint32_t worker_id, std::uint64_t epoch);

// CSV with a "# sparsecomm-dataset" comment line, then a header of feature
// columns followed by "label".
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace sparsecomm

#endif  // SPARSECOMM_DATASET_H_
