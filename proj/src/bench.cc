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

#include "sparsecomm/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace sparsecomm {

std::vector<BenchRow> bench_codecs(const BenchOptions& options) {
  if (options.dim < 1) throw ConfigError("bench dim must be >= 1");
  if (options.repetitions < 1) throw ConfigError("bench repetitions must be >= 1");
  const std::size_t k = k_for(options.dim, options.fraction);

  std::vector<Real> v(options.dim);
  RngStream data_rng(options.seed, 0xBE7C0000u, 0);
  for (auto& x : v) x = static_cast<Real>(data_rng.Normal());
  std::vector<Real> dense(options.dim, Real{0});

  std::vector<BenchRow> rows;
  for (const CompressorKind kind : options.kinds) {
    BenchRow row;
    row.kind = kind;
    row.k = kind == CompressorKind::kIdentity ? options.dim : k;
    const std::size_t total = options.warmup + options.repetitions;
    for (std::size_t rep = 0; rep < total; ++rep) {
      RngStream rng(options.seed, RngStream::kSharedTag, rep);
      const auto t0 = std::chrono::steady_clock::now();
      const SparsePayload payload = compress_vector(v, kind, k, rng);
      scatter_add_into(dense, payload);
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.selected = payload.size();
      if (rep >= options.warmup) row.samples.push_back(dt);
    }
    const double n = static_cast<double>(row.samples.size());
    row.mean = std::accumulate(row.samples.begin(), row.samples.end(), 0.0) / n;
    double var = 0.0;
    for (double s : row.samples) var += (s - row.mean) * (s - row.mean);
    row.stddev = row.samples.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    row.min = *std::min_element(row.samples.begin(), row.samples.end());
    row.max = *std::max_element(row.samples.begin(), row.samples.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_bench_table(const BenchOptions& options, const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "Codec cost (compress + decompress), dim=" << options.dim
      << " fraction=" << options.fraction << " warmup=" << options.warmup << "\n\n";
  out << "| scheme | k | selected | samples | mean (ms) | stddev (ms) | min (ms) | max (ms) |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "| %s | %zu | %zu | %zu | %.4f | %.4f | %.4f | %.4f |\n",
                  std::string(ToString(r.kind)).c_str(), r.k, r.selected, r.samples.size(),
                  r.mean * 1e3, r.stddev * 1e3, r.min * 1e3, r.max * 1e3);
    out << buf;
  }
  return out.str();
}

}  // namespace sparsecomm
