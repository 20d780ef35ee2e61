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

#ifndef SPARSECOMM_BENCH_H_
#define SPARSECOMM_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsecomm/compressors.h"

namespace sparsecomm {

struct BenchOptions {
  std::size_t dim = 1'000'000;
  double fraction = 0.01;
  std::size_t repetitions = 20;
  std::size_t warmup = 3;
  std::uint64_t seed = 42;
  std::vector<CompressorKind> kinds{CompressorKind::kTopK, CompressorKind::kRandomK,
                                    CompressorKind::kBlockRandomK};
};

struct BenchRow {
  CompressorKind kind = CompressorKind::kTopK;
  std::size_t k = 0;
  std::size_t selected = 0;      // entries in the last payload
  std::vector<double> samples;   // seconds, compress + decompress
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Wall-clock compress + decompress per scheme on one shared random vector.
// Decompression scatters into a preallocated dense buffer.
std::vector<BenchRow> bench_codecs(const BenchOptions& options);

std::string format_bench_table(const BenchOptions& options, const std::vector<BenchRow>& rows);

}  // namespace sparsecomm

#endif  // SPARSECOMM_BENCH_H_
