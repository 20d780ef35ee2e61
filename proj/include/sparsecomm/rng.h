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

#ifndef SPARSECOMM_RNG_H_
#define SPARSECOMM_RNG_H_

#include <array>
#include <cstdint>

namespace sparsecomm {

// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter Block(Counter counter, Key key);
};

// Deterministic random stream addressed by (seed, tag, step, ordinal). The
// tag is either a worker id or kSharedTag; workers that use the same tag at
// the same step draw identical sequences on any platform.
//
// Counter words: [block index, payload ordinal, step, tag]. Key: base seed.
class RngStream {
 public:
  static constexpr std::uint32_t kSharedTag = 0xFFFFFFFFu;

  RngStream(std::uint64_t seed, std::uint32_t tag, std::uint64_t step,
            std::uint32_t ordinal = 0);

  // Fresh stream for the ordinal-th payload of this (seed, tag, step).
  RngStream ForPayload(std::uint32_t ordinal) const {
    return RngStream(seed_, tag_, step_, ordinal);
  }

  std::uint64_t NextU64();
  // Uniform in [0, n) by 128-bit multiply-shift: exactly one NextU64 per call,
  // bias bounded by n / 2^64.
  std::uint64_t UniformBelow(std::uint64_t n);
  // Uniform in [0, 1) with 53 random bits.
  double UniformDouble();
  // Standard normal via Box-Muller; two NextU64 per call.
  double Normal();

  std::uint64_t seed() const { return seed_; }
  std::uint32_t tag() const { return tag_; }
  std::uint64_t step() const { return step_; }
  std::uint32_t ordinal() const { return ordinal_; }
  // Number of 64-bit draws consumed so far.
  std::uint64_t draws() const { return draws_; }

 private:
  void Refill();

  std::uint64_t seed_;
  std::uint32_t tag_;
  std::uint64_t step_;
  std::uint32_t ordinal_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int cursor_ = 4;
  std::uint64_t draws_ = 0;
};

}  // namespace sparsecomm

#endif  // SPARSECOMM_RNG_H_
