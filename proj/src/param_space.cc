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

#include <limits>
#include <unordered_set>

namespace sparsecomm {

LayerShape::LayerShape(std::vector<std::pair<std::string, std::size_t>> layers) {
  if (layers.empty()) throw StructureError("layer shape needs at least one layer");
  std::unordered_set<std::string> seen;
  for (auto& [name, size] : layers) {
    if (size == 0) throw StructureError("layer '" + name + "' is empty");
    if (!seen.insert(name).second) throw StructureError("duplicate layer name '" + name + "'");
    names_.push_back(std::move(name));
    sizes_.push_back(size);
    offsets_.push_back(total_dim_);
    total_dim_ += size;
  }
  if (total_dim_ > std::numeric_limits<Index>::max()) {
    throw StructureError("total dimension does not fit 32-bit coordinate ids");
  }
}

std::size_t LayerShape::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw StructureError("no layer named '" + name + "'");
}

LayeredParams::LayeredParams(std::shared_ptr<const LayerShape> shape)
    : shape_(std::move(shape)) {
  if (!shape_) throw StructureError("null layer shape");
  values_.assign(shape_->total_dim(), Real{0});
}

LayeredParams::LayeredParams(std::shared_ptr<const LayerShape> shape, std::vector<Real> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (!shape_) throw StructureError("null layer shape");
  if (values_.size() != shape_->total_dim()) {
    throw StructureError("value count " + std::to_string(values_.size()) +
                         " does not match layer shape dimension " +
                         std::to_string(shape_->total_dim()));
  }
}

LayeredParams LayeredParams::FromLayers(
    const std::vector<std::pair<std::string, std::vector<Real>>>& layers) {
  std::vector<std::pair<std::string, std::size_t>> sizes;
  std::vector<Real> values;
  for (const auto& [name, v] : layers) {
    sizes.emplace_back(name, v.size());
    values.insert(values.end(), v.begin(), v.end());
  }
  return LayeredParams(std::make_shared<const LayerShape>(std::move(sizes)), std::move(values));
}

std::span<Real> LayeredParams::layer(std::size_t i) {
  return std::span<Real>(values_).subspan(shape_->offset(i), shape_->size(i));
}

std::span<const Real> LayeredParams::layer(std::size_t i) const {
  return std::span<const Real>(values_).subspan(shape_->offset(i), shape_->size(i));
}

bool LayeredParams::SameStructure(const LayeredParams& other) const {
  if (shape_ == other.shape_) return true;
  if (!shape_ || !other.shape_) return false;
  return *shape_ == *other.shape_;
}

void LayeredParams::RequireSameStructure(const LayeredParams& other, const char* op) const {
  if (!SameStructure(other)) {
    throw StructureError(std::string("layer structure mismatch in ") + op);
  }
}

LayeredParams& LayeredParams::operator+=(const LayeredParams& other) {
  RequireSameStructure(other, "add");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

LayeredParams& LayeredParams::operator-=(const LayeredParams& other) {
  RequireSameStructure(other, "subtract");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

LayeredParams& LayeredParams::operator*=(Real scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

LayeredParams& LayeredParams::Axpy(Real alpha, const LayeredParams& other) {
  RequireSameStructure(other, "axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += alpha * other.values_[i];
  return *this;
}

void LayeredParams::SetZero() { std::fill(values_.begin(), values_.end(), Real{0}); }

bool LayeredParams::operator==(const LayeredParams& other) const {
  return SameStructure(other) && values_ == other.values_;
}

LayeredParams operator+(LayeredParams a, const LayeredParams& b) { return a += b; }
LayeredParams operator-(LayeredParams a, const LayeredParams& b) { return a -= b; }
LayeredParams operator*(Real s, LayeredParams a) { return a *= s; }

std::vector<Real> flatten(const LayeredParams& params) {
  auto v = params.values();
  return {v.begin(), v.end()};
}

LayeredParams unflatten(std::span<const Real> v, std::shared_ptr<const LayerShape> shape) {
  if (!shape) throw StructureError("null layer shape");
  if (v.size() != shape->total_dim()) {
    throw StructureError("cannot unflatten " + std::to_string(v.size()) +
                         " values into shape of dimension " + std::to_string(shape->total_dim()));
  }
  return LayeredParams(std::move(shape), std::vector<Real>(v.begin(), v.end()));
}

void SparsePayload::Validate() const {
  if (indices.size() != values.size()) {
    throw ContractViolation("payload has " + std::to_string(indices.size()) + " indices but " +
                            std::to_string(values.size()) + " values");
  }
  if (indices.size() > dim) throw ContractViolation("payload holds more entries than its dim");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dim) {
      throw ContractViolation("payload index " + std::to_string(indices[i]) +
                              " out of range for dim " + std::to_string(dim));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw ContractViolation("payload indices not strictly increasing at position " +
                              std::to_string(i));
    }
  }
}

SparsePayload gather(std::span<const Real> v, std::span<const Index> indices,
                     PayloadScope scope) {
  SparsePayload out;
  out.scope = std::move(scope);
  out.dim = v.size();
  out.indices.assign(indices.begin(), indices.end());
  out.values.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= v.size()) {
      throw ContractViolation("gather index " + std::to_string(indices[i]) +
                              " out of range for length " + std::to_string(v.size()));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw ContractViolation("gather indices must be sorted and unique");
    }
    out.values[i] = v[indices[i]];
  }
  return out;
}

void scatter_add_into(std::span<Real> target, const SparsePayload& payload) {
  if (payload.dim != target.size()) {
    throw StructureError("payload dim " + std::to_string(payload.dim) +
                         " does not match target length " + std::to_string(target.size()));
  }
  const std::size_t n = payload.indices.size();
  for (std::size_t i = 0; i < n; ++i) target[payload.indices[i]] += payload.values[i];
}

std::vector<Real> scatter_add(std::vector<Real> target, const SparsePayload& payload) {
  scatter_add_into(target, payload);
  return target;
}

std::vector<Real> decompress(const SparsePayload& payload) {
  std::vector<Real> dense(payload.dim, Real{0});
  scatter_add_into(dense, payload);
  return dense;
}

}  // namespace sparsecomm
