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

#include "sparsecomm/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "sparsecomm/types.h"

namespace sparsecomm {
namespace {

// Known-answer vectors published with the Random123 reference implementation.
TEST(PhiloxTest, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::Block(C{0, 0, 0, 0}, {0, 0}),
            (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::Block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::Block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStreamTest, SameAddressSameDraws) {
  RngStream a(123, 4, 9, 2), b(123, 4, 9, 2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
  EXPECT_EQ(a.draws(), 100u);
}

TEST(RngStreamTest, AnyAddressComponentChangesTheStream) {
  const auto first = [](RngStream s) { return s.NextU64(); };
  const std::uint64_t base = first(RngStream(1, 2, 3, 4));
  EXPECT_NE(base, first(RngStream(9, 2, 3, 4)));
  EXPECT_NE(base, first(RngStream(1, 9, 3, 4)));
  EXPECT_NE(base, first(RngStream(1, 2, 9, 4)));
  EXPECT_NE(base, first(RngStream(1, 2, 3, 9)));
  EXPECT_EQ(base, first(RngStream(1, 2, 3, 0).ForPayload(4)));
}

TEST(RngStreamTest, UniformBelowStaysInRangeAndCoversIt) {
  RngStream s(5, RngStream::kSharedTag, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = s.UniformBelow(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(s.draws(), 2000u);
  EXPECT_THROW(s.UniformBelow(0), ContractViolation);
}

TEST(RngStreamTest, NormalMoments) {
  RngStream s(77, 0, 0);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.Normal();
    sum += x;
    sq += x * x;
  }
  // 5 standard errors.
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(RngStreamTest, RejectsStepBeyond32Bits) {
  EXPECT_THROW(RngStream(0, 0, std::uint64_t{1} << 32), ContractViolation);
}

}  // namespace
}  // namespace sparsecomm
