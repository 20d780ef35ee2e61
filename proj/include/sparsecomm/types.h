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

#ifndef SPARSECOMM_TYPES_H_
#define SPARSECOMM_TYPES_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparsecomm {

// One floating-point width for a whole build. 64-bit by default so that the
// error-feedback identity can be checked bit-exactly.
#ifdef SPARSECOMM_REAL_FLOAT32
using Real = float;
#else
using Real = double;
#endif

// Coordinate ids travel as 32-bit unsigned integers.
using Index = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched layer structure or vector length.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (e.g. unsorted indices).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Workers handed a collective inconsistent payloads.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Loss became NaN or infinite during training.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsecomm

#endif  // SPARSECOMM_TYPES_H_
