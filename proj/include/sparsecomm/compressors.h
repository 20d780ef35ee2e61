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

#ifndef SPARSECOMM_COMPRESSORS_H_
#define SPARSECOMM_COMPRESSORS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsecomm/param_space.h"
#include "sparsecomm/rng.h"

namespace sparsecomm {

enum class CompressorKind { kIdentity, kTopK, kRandomK, kBlockRandomK };
enum class SparsifyScope { kLayerWise, kGlobal };
enum class SeedMode { kShared, kPerWorker };

std::string_view ToString(CompressorKind kind);
std::string_view ToString(SparsifyScope scope);
std::string_view ToString(SeedMode mode);
// Accept the lowercase config spellings ("topk", "layerwise", "shared", ...).
CompressorKind ParseCompressorKind(std::string_view s);
SparsifyScope ParseSparsifyScope(std::string_view s);
SeedMode ParseSeedMode(std::string_view s);

struct CompressorConfig {
  CompressorKind kind = CompressorKind::kTopK;
  double fraction = 0.01;
  SparsifyScope scope = SparsifyScope::kLayerWise;
  SeedMode seed_mode = SeedMode::kShared;
  std::uint64_t base_seed = 0;

  // Throws ConfigError unless fraction is in (0, 1].
  void Validate() const;
  bool uses_randomness() const {
    return kind == CompressorKind::kRandomK || kind == CompressorKind::kBlockRandomK;
  }
  bool operator==(const CompressorConfig&) const = default;
};

// max(1, ceil(fraction * dim)), capped at dim.
std::size_t k_for(std::size_t dim, double fraction);

// k largest-magnitude coordinates; ties go to the lower index.
SparsePayload compress_topk(std::span<const Real> v, std::size_t k,
                            PayloadScope scope = PayloadScope::Global());

// k distinct coordinates uniformly without replacement (Floyd's algorithm,
// exactly k draws from rng).
SparsePayload compress_randomk(std::span<const Real> v, std::size_t k, RngStream& rng,
                               PayloadScope scope = PayloadScope::Global());

// One uniform start s, then {(s + i) mod dim : 0 <= i < k}.
SparsePayload compress_blockrandomk(std::span<const Real> v, std::size_t k, RngStream& rng,
                                    PayloadScope scope = PayloadScope::Global());
// Block selection for a known start; exposed for tests.
std::vector<Index> block_indices(std::size_t dim, std::size_t k, std::size_t start);

SparsePayload compress_identity(std::span<const Real> v,
                                PayloadScope scope = PayloadScope::Global());

// Dispatch on kind for a single vector.
SparsePayload compress_vector(std::span<const Real> v, CompressorKind kind, std::size_t k,
                              RngStream& rng, PayloadScope scope = PayloadScope::Global());

// The RNG tag a worker uses under the configured seed mode.
std::uint32_t rng_tag(const CompressorConfig& cfg, std::uint32_t worker_id);

// Applies the compressor layer-wise (one payload per layer, in layer order)
// or globally (one payload over the concatenation). The ordinal-th payload
// draws from step_stream.ForPayload(ordinal).
std::vector<SparsePayload> compress_scoped(const LayeredParams& p, const CompressorConfig& cfg,
                                           const RngStream& step_stream);

// Dense reconstruction of scoped payloads into p's layout.
LayeredParams decompress_scoped(std::span<const SparsePayload> payloads,
                                const std::shared_ptr<const LayerShape>& shape);

}  // namespace sparsecomm

#endif  // SPARSECOMM_COMPRESSORS_H_
