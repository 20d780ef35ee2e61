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

#include "sparsecomm/param_space.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <random>

namespace sparsecomm {
namespace {

LayeredParams TwoLayers() { return LayeredParams::FromLayers({{"a", {1, 2}}, {"b", {3}}}); }

TEST(LayerShapeTest, RejectsEmptyAndDuplicateLayers) {
  EXPECT_THROW(LayerShape({{"a", 0}}), StructureError);
  EXPECT_THROW(LayerShape({{"a", 1}, {"a", 2}}), StructureError);
  EXPECT_THROW(LayerShape(std::vector<std::pair<std::string, std::size_t>>{}), StructureError);
  const LayerShape s({{"a", 2}, {"b", 3}});
  EXPECT_EQ(s.total_dim(), 5u);
  EXPECT_EQ(s.offset(1), 2u);
  EXPECT_EQ(s.index_of("b"), 1u);
  EXPECT_THROW(s.index_of("c"), StructureError);
}

TEST(FlattenTest, ConcatenatesInDeclaredOrder) {
  EXPECT_EQ(flatten(TwoLayers()), (std::vector<Real>{1, 2, 3}));
}

TEST(FlattenTest, UnflattenInvertsFlatten) {
  const auto shape = std::make_shared<const LayerShape>(
      std::vector<std::pair<std::string, std::size_t>>{{"a", 2}, {"b", 1}});
  const std::vector<Real> v{1, 2, 3};
  const LayeredParams p = unflatten(v, shape);
  EXPECT_EQ(p, TwoLayers());
  EXPECT_EQ(p.layer("a")[1], 2);
  EXPECT_EQ(p.layer("b")[0], 3);
}

TEST(FlattenTest, UnflattenLengthMismatch) {
  const auto shape = std::make_shared<const LayerShape>(
      std::vector<std::pair<std::string, std::size_t>>{{"a", 2}});
  const std::vector<Real> v{1};
  EXPECT_THROW(unflatten(v, shape), StructureError);
}

TEST(FlattenTest, RoundTripIsBitExactOnRandomInputs) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  std::uniform_int_distribution<std::size_t> layers(1, 6);
  std::normal_distribution<double> value(0.0, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, std::size_t>> dims;
    const std::size_t nl = layers(gen);
    for (std::size_t l = 0; l < nl; ++l) dims.emplace_back("l" + std::to_string(l), size(gen));
    const auto shape = std::make_shared<const LayerShape>(dims);
    std::vector<Real> v(shape->total_dim());
    for (auto& x : v) x = static_cast<Real>(value(gen));
    const auto back = flatten(unflatten(v, shape));
    ASSERT_EQ(back.size(), v.size());
    EXPECT_EQ(std::memcmp(back.data(), v.data(), v.size() * sizeof(Real)), 0);
    const LayeredParams p = unflatten(v, shape);
    EXPECT_EQ(unflatten(flatten(p), shape), p);
  }
}

TEST(LayeredParamsTest, ArithmeticIsCoordinateWiseAndStructureChecked) {
  LayeredParams a = TwoLayers();
  const LayeredParams b = TwoLayers();
  a += b;
  EXPECT_EQ(flatten(a), (std::vector<Real>{2, 4, 6}));
  a -= b;
  EXPECT_EQ(a, b);
  a *= 0.5;
  EXPECT_EQ(flatten(a), (std::vector<Real>{0.5, 1, 1.5}));
  a.Axpy(2, b);
  EXPECT_EQ(flatten(a), (std::vector<Real>{2.5, 5, 7.5}));

  const LayeredParams other = LayeredParams::FromLayers({{"a", {1}}, {"b", {2, 3}}});
  EXPECT_THROW(a += other, StructureError);
  EXPECT_THROW(a.Axpy(1, other), StructureError);
  EXPECT_EQ(a.shape().name(1), "b");
}

TEST(GatherTest, Lookup) {
  const std::vector<Real> v{5, 6, 7};
  const std::vector<Index> idx{0, 2};
  const SparsePayload p = gather(v, idx);
  EXPECT_EQ(p.values, (std::vector<Real>{5, 7}));
  EXPECT_EQ(p.dim, 3u);
  EXPECT_TRUE(p.scope.is_global());
}

TEST(GatherTest, EmptySelection) {
  const std::vector<Real> v{5, 6, 7};
  const SparsePayload p = gather(v, std::vector<Index>{});
  EXPECT_EQ(p.size(), 0u);
  EXPECT_EQ(p.dim, 3u);
  p.Validate();
}

TEST(GatherTest, RejectsUnsortedDuplicateOrOutOfRange) {
  const std::vector<Real> v{5, 6, 7};
  EXPECT_THROW(gather(v, std::vector<Index>{2, 0}), ContractViolation);
  EXPECT_THROW(gather(v, std::vector<Index>{1, 1}), ContractViolation);
  EXPECT_THROW(gather(v, std::vector<Index>{3}), ContractViolation);
}

TEST(ScatterAddTest, AddsAtIndices) {
  SparsePayload p{PayloadScope::Global(), 3, {1}, {4}};
  EXPECT_EQ(scatter_add({0, 0, 0}, p), (std::vector<Real>{0, 4, 0}));
  EXPECT_EQ(scatter_add({1, 1, 1}, p), (std::vector<Real>{1, 5, 1}));
}

TEST(ScatterAddTest, EmptyPayloadIsIdentity) {
  SparsePayload p{PayloadScope::Global(), 3, {}, {}};
  EXPECT_EQ(scatter_add({1, 2, 3}, p), (std::vector<Real>{1, 2, 3}));
}

TEST(ScatterAddTest, DimensionMismatch) {
  SparsePayload p{PayloadScope::Global(), 4, {1}, {4}};
  EXPECT_THROW(scatter_add({0, 0, 0}, p), StructureError);
}

TEST(ScatterAddTest, GatherScatterDuality) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> value;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + gen() % 64;
    std::vector<Real> v(d);
    for (auto& x : v) x = static_cast<Real>(value(gen));
    std::vector<Index> idx;
    for (std::size_t i = 0; i < d; ++i) {
      if (gen() % 3 == 0) idx.push_back(static_cast<Index>(i));
    }
    const auto dense = scatter_add(std::vector<Real>(d, 0), gather(v, idx));
    for (std::size_t i = 0; i < d; ++i) {
      const bool in = std::binary_search(idx.begin(), idx.end(), static_cast<Index>(i));
      EXPECT_EQ(dense[i], in ? v[i] : Real{0});
    }
  }
}

TEST(SparsePayloadTest, ValidateCatchesBrokenInvariants) {
  EXPECT_THROW((SparsePayload{PayloadScope::Global(), 3, {0, 1}, {1}}.Validate()),
               ContractViolation);
  EXPECT_THROW((SparsePayload{PayloadScope::Global(), 3, {1, 0}, {1, 2}}.Validate()),
               ContractViolation);
  EXPECT_THROW((SparsePayload{PayloadScope::Global(), 3, {3}, {1}}.Validate()),
               ContractViolation);
  EXPECT_NO_THROW((SparsePayload{PayloadScope::Layer("w"), 3, {0, 2}, {1, 2}}.Validate()));
}

}  // namespace
}  // namespace sparsecomm
