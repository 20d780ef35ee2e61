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

#include "sparsecomm/compressors.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsecomm {
namespace {

void RequireK(std::size_t k, std::size_t dim) {
  if (k < 1 || k > dim) {
    throw ContractViolation("k=" + std::to_string(k) + " out of range [1, " +
                            std::to_string(dim) + "]");
  }
}

}  // namespace

std::string_view ToString(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::kIdentity: return "identity";
    case CompressorKind::kTopK: return "topk";
    case CompressorKind::kRandomK: return "randomk";
    case CompressorKind::kBlockRandomK: return "blockrandomk";
  }
  return "?";
}

std::string_view ToString(SparsifyScope scope) {
  return scope == SparsifyScope::kGlobal ? "global" : "layerwise";
}

std::string_view ToString(SeedMode mode) {
  return mode == SeedMode::kShared ? "shared" : "perworker";
}

CompressorKind ParseCompressorKind(std::string_view s) {
  if (s == "identity") return CompressorKind::kIdentity;
  if (s == "topk") return CompressorKind::kTopK;
  if (s == "randomk") return CompressorKind::kRandomK;
  if (s == "blockrandomk") return CompressorKind::kBlockRandomK;
  throw ConfigError("unknown compressor kind '" + std::string(s) +
                    "' (expected identity, topk, randomk or blockrandomk)");
}

SparsifyScope ParseSparsifyScope(std::string_view s) {
  if (s == "layerwise") return SparsifyScope::kLayerWise;
  if (s == "global") return SparsifyScope::kGlobal;
  throw ConfigError("unknown scope '" + std::string(s) + "' (expected layerwise or global)");
}

SeedMode ParseSeedMode(std::string_view s) {
  if (s == "shared") return SeedMode::kShared;
  if (s == "perworker") return SeedMode::kPerWorker;
  throw ConfigError("unknown seed mode '" + std::string(s) + "' (expected shared or perworker)");
}

void CompressorConfig::Validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("compressor fraction must be in (0, 1], got " + std::to_string(fraction));
  }
}

std::size_t k_for(std::size_t dim, double fraction) {
  if (dim == 0) throw ContractViolation("k_for needs dim >= 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ContractViolation("k_for needs fraction in (0, 1]");
  }
  // The relative shave keeps products like 0.07 * 100 = 7.000000000000001
  // from rounding up to the next integer.
  const double x = fraction * static_cast<double>(dim);
  const double k = std::ceil(x * (1.0 - 1e-12));
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, dim);
}

SparsePayload compress_topk(std::span<const Real> v, std::size_t k, PayloadScope scope) {
  const std::size_t dim = v.size();
  RequireK(k, dim);
  if (k == dim) return compress_identity(v, std::move(scope));

  // k-th largest magnitude, then one ascending scan: everything strictly
  // above it, plus the lowest-index ties until k are taken.
  std::vector<Real> mags(dim);
  for (std::size_t i = 0; i < dim; ++i) mags[i] = std::abs(v[i]);
  std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end(), std::greater<Real>());
  const Real threshold = mags[k - 1];
  std::size_t above = 0;
  for (std::size_t i = 0; i < dim; ++i) above += std::abs(v[i]) > threshold ? 1 : 0;
  std::size_t ties_left = k - above;

  SparsePayload out;
  out.scope = std::move(scope);
  out.dim = dim;
  out.indices.reserve(k);
  out.values.reserve(k);
  for (std::size_t i = 0; i < dim; ++i) {
    const Real m = std::abs(v[i]);
    if (m > threshold || (m == threshold && ties_left > 0)) {
      if (m == threshold) --ties_left;
      out.indices.push_back(static_cast<Index>(i));
      out.values.push_back(v[i]);
    }
  }
  return out;
}

SparsePayload compress_randomk(std::span<const Real> v, std::size_t k, RngStream& rng,
                               PayloadScope scope) {
  const std::size_t dim = v.size();
  RequireK(k, dim);
  std::vector<bool> chosen(dim, false);
  std::vector<Index> picked;
  picked.reserve(k);
  for (std::size_t j = dim - k; j < dim; ++j) {
    const auto t = static_cast<std::size_t>(rng.UniformBelow(j + 1));
    const std::size_t pick = chosen[t] ? j : t;
    chosen[pick] = true;
    picked.push_back(static_cast<Index>(pick));
  }
  std::sort(picked.begin(), picked.end());
  return gather(v, picked, std::move(scope));
}

std::vector<Index> block_indices(std::size_t dim, std::size_t k, std::size_t start) {
  RequireK(k, dim);
  if (start >= dim) throw ContractViolation("block start out of range");
  std::vector<Index> idx;
  idx.reserve(k);
  const std::size_t end = start + k;
  if (end <= dim) {
    for (std::size_t i = start; i < end; ++i) idx.push_back(static_cast<Index>(i));
  } else {
    for (std::size_t i = 0; i < end - dim; ++i) idx.push_back(static_cast<Index>(i));
    for (std::size_t i = start; i < dim; ++i) idx.push_back(static_cast<Index>(i));
  }
  return idx;
}

SparsePayload compress_blockrandomk(std::span<const Real> v, std::size_t k, RngStream& rng,
                                    PayloadScope scope) {
  const std::size_t dim = v.size();
  RequireK(k, dim);
  const auto start = static_cast<std::size_t>(rng.UniformBelow(dim));
  const std::size_t end = start + k;
  SparsePayload out;
  out.scope = std::move(scope);
  out.dim = dim;
  out.indices = block_indices(dim, k, start);
  out.values.resize(k);
  if (end <= dim) {
    std::copy(v.begin() + start, v.begin() + end, out.values.begin());
  } else {
    const std::size_t wrapped = end - dim;
    std::copy(v.begin(), v.begin() + wrapped, out.values.begin());
    std::copy(v.begin() + start, v.end(), out.values.begin() + wrapped);
  }
  return out;
}

SparsePayload compress_identity(std::span<const Real> v, PayloadScope scope) {
  SparsePayload out;
  out.scope = std::move(scope);
  out.dim = v.size();
  out.indices.resize(v.size());
  std::iota(out.indices.begin(), out.indices.end(), Index{0});
  out.values.assign(v.begin(), v.end());
  return out;
}

SparsePayload compress_vector(std::span<const Real> v, CompressorKind kind, std::size_t k,
                              RngStream& rng, PayloadScope scope) {
  switch (kind) {
    case CompressorKind::kIdentity: return compress_identity(v, std::move(scope));
    case CompressorKind::kTopK: return compress_topk(v, k, std::move(scope));
    case CompressorKind::kRandomK: return compress_randomk(v, k, rng, std::move(scope));
    case CompressorKind::kBlockRandomK:
      return compress_blockrandomk(v, k, rng, std::move(scope));
  }
  throw ContractViolation("unknown compressor kind");
}

std::uint32_t rng_tag(const CompressorConfig& cfg, std::uint32_t worker_id) {
  return cfg.seed_mode == SeedMode::kShared ? RngStream::kSharedTag : worker_id;
}

std::vector<SparsePayload> compress_scoped(const LayeredParams& p, const CompressorConfig& cfg,
                                           const RngStream& step_stream) {
  cfg.Validate();
  std::vector<SparsePayload> out;
  if (cfg.scope == SparsifyScope::kGlobal) {
    RngStream rng = step_stream.ForPayload(0);
    const auto v = p.values();
    out.push_back(compress_vector(v, cfg.kind, k_for(v.size(), cfg.fraction), rng,
                                  PayloadScope::Global()));
    return out;
  }
  out.reserve(p.num_layers());
  for (std::size_t i = 0; i < p.num_layers(); ++i) {
    RngStream rng = step_stream.ForPayload(static_cast<std::uint32_t>(i));
    const auto v = p.layer(i);
    out.push_back(compress_vector(v, cfg.kind, k_for(v.size(), cfg.fraction), rng,
                                  PayloadScope::Layer(p.shape().name(i))));
  }
  return out;
}

LayeredParams decompress_scoped(std::span<const SparsePayload> payloads,
                                const std::shared_ptr<const LayerShape>& shape) {
  LayeredParams dense(shape);
  for (const auto& payload : payloads) {
    if (payload.scope.is_global()) {
      scatter_add_into(dense.values(), payload);
    } else {
      scatter_add_into(dense.layer(payload.scope.layer), payload);
    }
  }
  return dense;
}

}  // namespace sparsecomm
