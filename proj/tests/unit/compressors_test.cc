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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace sparsecomm {
namespace {

// Brute-force reference: full sort by (magnitude desc, index asc).
std::vector<Index> TopKBySort(const std::vector<Real>& v, std::size_t k) {
  std::vector<Index> order(v.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

TEST(KForTest, Examples) {
  EXPECT_EQ(k_for(100, 0.01), 1u);
  EXPECT_EQ(k_for(250, 0.01), 3u);
  EXPECT_EQ(k_for(5, 1.0), 5u);
  EXPECT_EQ(k_for(300, 0.01), 3u);
  EXPECT_EQ(k_for(100, 0.07), 7u);
  EXPECT_EQ(k_for(1, 0.01), 1u);
  EXPECT_EQ(k_for(10'000'000, 0.01), 100'000u);
  EXPECT_THROW(k_for(0, 0.5), ContractViolation);
  EXPECT_THROW(k_for(10, 0.0), ContractViolation);
}

TEST(TopKTest, TwoLargestMagnitudes) {
  const std::vector<Real> v{0.1, -3.0, 0.5, 2.0};
  const auto p = compress_topk(v, 2);
  EXPECT_EQ(p.indices, (std::vector<Index>{1, 3}));
  EXPECT_EQ(p.values, (std::vector<Real>{-3.0, 2.0}));
}

TEST(TopKTest, TiesGoToLowerIndex) {
  const std::vector<Real> v{1.0, -1.0, 0.0};
  const auto p = compress_topk(v, 1);
  EXPECT_EQ(p.indices, (std::vector<Index>{0}));
  EXPECT_EQ(p.values, (std::vector<Real>{1.0}));
  EXPECT_EQ(compress_topk(v, 2).indices, (std::vector<Index>{0, 1}));
}

TEST(TopKTest, KOutOfRange) {
  const std::vector<Real> v{1, 2};
  EXPECT_THROW(compress_topk(v, 0), ContractViolation);
  EXPECT_THROW(compress_topk(v, 3), ContractViolation);
}

TEST(TopKTest, MatchesFullSortOracle) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + gen() % 2000;
    std::vector<Real> v(d);
    if (trial % 3 == 0) {
      // Small integer alphabet forces many magnitude ties.
      for (auto& x : v) x = static_cast<Real>(static_cast<int>(gen() % 7) - 3);
    } else {
      for (auto& x : v) x = static_cast<Real>(normal(gen));
    }
    const std::size_t k = 1 + gen() % d;
    const auto p = compress_topk(v, k);
    ASSERT_EQ(p.indices, TopKBySort(v, k)) << "trial " << trial;
    p.Validate();
    Real min_sel = std::numeric_limits<Real>::infinity();
    for (Real x : p.values) min_sel = std::min(min_sel, std::abs(x));
    Real max_unsel = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (!std::binary_search(p.indices.begin(), p.indices.end(), static_cast<Index>(i))) {
        max_unsel = std::max(max_unsel, std::abs(v[i]));
      }
    }
    EXPECT_GE(min_sel, max_unsel);
  }
}

TEST(RandomKTest, FullSelectionCopiesEverything) {
  const std::vector<Real> v{4, 5, 6, 7};
  RngStream rng(1, 0, 0);
  const auto p = compress_randomk(v, 4, rng);
  EXPECT_EQ(p.indices, (std::vector<Index>{0, 1, 2, 3}));
  EXPECT_EQ(p.values, v);
}

TEST(RandomKTest, DeterministicAndExactDrawCount) {
  std::vector<Real> v(1000);
  std::iota(v.begin(), v.end(), Real{0});
  RngStream a(9, RngStream::kSharedTag, 3), b(9, RngStream::kSharedTag, 3);
  const auto pa = compress_randomk(v, 37, a);
  const auto pb = compress_randomk(v, 37, b);
  EXPECT_EQ(pa, pb);
  EXPECT_EQ(pa.size(), 37u);
  EXPECT_EQ(a.draws(), 37u);
  pa.Validate();
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa.values[i], v[pa.indices[i]]);
}

TEST(RandomKTest, InclusionFrequencyIsUniform) {
  const std::size_t dim = 10, k = 2, reps = 100000;
  const std::vector<Real> v(dim, 1.0);
  std::vector<std::size_t> hits(dim, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(31, RngStream::kSharedTag, r);
    for (Index i : compress_randomk(v, k, rng).indices) ++hits[i];
  }
  for (std::size_t i = 0; i < dim; ++i) {
    EXPECT_NEAR(static_cast<double>(hits[i]) / reps, 0.2, 0.01) << "coordinate " << i;
  }
}

TEST(BlockRandomKTest, WrapAroundAndContiguousCases) {
  EXPECT_EQ(block_indices(5, 3, 4), (std::vector<Index>{0, 1, 4}));
  EXPECT_EQ(block_indices(5, 3, 1), (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(block_indices(5, 5, 3), (std::vector<Index>{0, 1, 2, 3, 4}));
  EXPECT_THROW(block_indices(5, 6, 0), ContractViolation);
}

TEST(BlockRandomKTest, OneDrawAndContiguousModuloDim) {
  std::vector<Real> v(97);
  std::iota(v.begin(), v.end(), Real{0});
  for (std::uint64_t step = 0; step < 200; ++step) {
    RngStream rng(4, 1, step);
    const auto p = compress_blockrandomk(v, 13, rng);
    EXPECT_EQ(rng.draws(), 1u);
    ASSERT_EQ(p.size(), 13u);
    p.Validate();
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.values[i], v[p.indices[i]]);
    // Exactly one gap (mod dim) between consecutive selected coordinates
    // unless the block covers everything.
    std::size_t breaks = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Index next = p.indices[(i + 1) % p.size()];
      if (next != (p.indices[i] + 1) % v.size()) ++breaks;
    }
    EXPECT_EQ(breaks, 1u);
  }
}

TEST(BlockRandomKTest, InclusionFrequencyIsUniform) {
  const std::size_t dim = 10, k = 3, reps = 100000;
  const std::vector<Real> v(dim, 1.0);
  std::vector<std::size_t> hits(dim, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream rng(8, RngStream::kSharedTag, r);
    for (Index i : compress_blockrandomk(v, k, rng).indices) ++hits[i];
  }
  for (std::size_t i = 0; i < dim; ++i) {
    EXPECT_NEAR(static_cast<double>(hits[i]) / reps, 0.3, 0.01) << "coordinate " << i;
  }
}

TEST(IdentityTest, KeepsEverything) {
  const std::vector<Real> v{1, 2};
  const auto p = compress_identity(v);
  EXPECT_EQ(p.indices, (std::vector<Index>{0, 1}));
  EXPECT_EQ(p.values, v);
  EXPECT_EQ(decompress(p), v);
}

LayeredParams TwoLayerVector(std::size_t a, std::size_t b) {
  std::vector<Real> la(a), lb(b);
  std::iota(la.begin(), la.end(), Real{1});
  std::iota(lb.begin(), lb.end(), Real{1000});
  return LayeredParams::FromLayers({{"a", la}, {"b", lb}});
}

TEST(ScopedTest, LayerWiseAppliesKPerLayer) {
  const auto p = TwoLayerVector(100, 300);
  CompressorConfig cfg;
  cfg.kind = CompressorKind::kTopK;
  cfg.scope = SparsifyScope::kLayerWise;
  const auto out = compress_scoped(p, cfg, RngStream(0, 0, 0));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].size(), 1u);
  EXPECT_EQ(out[1].size(), 3u);
  EXPECT_EQ(out[0].scope, PayloadScope::Layer("a"));
  EXPECT_EQ(out[1].scope, PayloadScope::Layer("b"));
  EXPECT_EQ(out[0].dim, 100u);
}

TEST(ScopedTest, GlobalAppliesKToConcatenation) {
  const auto p = TwoLayerVector(100, 300);
  CompressorConfig cfg;
  cfg.kind = CompressorKind::kTopK;
  cfg.scope = SparsifyScope::kGlobal;
  const auto out = compress_scoped(p, cfg, RngStream(0, 0, 0));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].size(), 4u);
  EXPECT_EQ(out[0].dim, 400u);
  EXPECT_TRUE(out[0].scope.is_global());
  // Magnitude ranking over the concatenation picks only layer b.
  EXPECT_EQ(out[0].indices, (std::vector<Index>{396, 397, 398, 399}));
  const auto dense = decompress_scoped(out, p.shared_shape());
  EXPECT_EQ(dense.layer("b")[299], 1299);
  EXPECT_EQ(dense.layer("a")[0], 0);
}

TEST(ScopedTest, GlobalBlockCanSpanLayerBoundary) {
  const auto p = TwoLayerVector(100, 300);
  CompressorConfig cfg;
  cfg.kind = CompressorKind::kBlockRandomK;
  cfg.scope = SparsifyScope::kGlobal;
  cfg.fraction = 0.05;  // k = 20
  bool spanned = false;
  for (std::uint64_t step = 0; step < 2000 && !spanned; ++step) {
    const auto out = compress_scoped(p, cfg, RngStream(3, RngStream::kSharedTag, step));
    const auto& idx = out[0].indices;
    const bool in_a = std::any_of(idx.begin(), idx.end(), [](Index i) { return i < 100; });
    const bool in_b = std::any_of(idx.begin(), idx.end(), [](Index i) { return i >= 100; });
    spanned = in_a && in_b;
  }
  EXPECT_TRUE(spanned);
}

TEST(ScopedTest, SharedSeedAlignsWorkersPerWorkerDoesNot) {
  const auto p = TwoLayerVector(100, 300);
  for (auto kind : {CompressorKind::kRandomK, CompressorKind::kBlockRandomK}) {
    CompressorConfig cfg;
    cfg.kind = kind;
    cfg.fraction = 0.05;
    cfg.base_seed = 17;
    cfg.seed_mode = SeedMode::kShared;
    for (std::uint64_t step = 0; step < 20; ++step) {
      const auto w0 = compress_scoped(p, cfg, RngStream(17, rng_tag(cfg, 0), step));
      const auto w5 = compress_scoped(p, cfg, RngStream(17, rng_tag(cfg, 5), step));
      ASSERT_EQ(w0.size(), w5.size());
      for (std::size_t j = 0; j < w0.size(); ++j) EXPECT_EQ(w0[j].indices, w5[j].indices);
    }
    cfg.seed_mode = SeedMode::kPerWorker;
    std::size_t differing = 0;
    for (std::uint64_t step = 0; step < 20; ++step) {
      const auto w0 = compress_scoped(p, cfg, RngStream(17, rng_tag(cfg, 0), step));
      const auto w1 = compress_scoped(p, cfg, RngStream(17, rng_tag(cfg, 1), step));
      differing += w0[1].indices != w1[1].indices ? 1 : 0;
    }
    EXPECT_GT(differing, 15u);
  }
}

TEST(CompressorConfigTest, FractionRange) {
  CompressorConfig cfg;
  cfg.fraction = 0.0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.fraction = 1.5;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.fraction = 1.0;
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(CompressorConfigTest, ParsesConfigSpellings) {
  EXPECT_EQ(ParseCompressorKind("blockrandomk"), CompressorKind::kBlockRandomK);
  EXPECT_EQ(ParseSparsifyScope("global"), SparsifyScope::kGlobal);
  EXPECT_EQ(ParseSeedMode("perworker"), SeedMode::kPerWorker);
  EXPECT_THROW(ParseCompressorKind("top-k"), ConfigError);
}

}  // namespace
}  // namespace sparsecomm
