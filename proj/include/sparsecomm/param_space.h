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

#ifndef SPARSECOMM_PARAM_SPACE_H_
#define SPARSECOMM_PARAM_SPACE_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparsecomm/types.h"

namespace sparsecomm {

// Ordered (name, size) description of a layered vector. Layers are non-empty
// and names are unique.
class LayerShape {
 public:
  LayerShape() = default;
  explicit LayerShape(std::vector<std::pair<std::string, std::size_t>> layers);

  std::size_t num_layers() const { return names_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::size_t size(std::size_t i) const { return sizes_.at(i); }
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  // Throws StructureError if no layer has this name.
  std::size_t index_of(const std::string& name) const;

  bool operator==(const LayerShape& other) const {
    return names_ == other.names_ && sizes_ == other.sizes_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_dim_ = 0;
};

// Dense parameters (or gradients, error memory, momentum) laid out as one
// contiguous buffer partitioned into named layers. The layer structure is
// fixed at construction; arithmetic requires identical structure.
class LayeredParams {
 public:
  LayeredParams() = default;
  explicit LayeredParams(std::shared_ptr<const LayerShape> shape);
  LayeredParams(std::shared_ptr<const LayerShape> shape, std::vector<Real> values);

  static LayeredParams FromLayers(
      const std::vector<std::pair<std::string, std::vector<Real>>>& layers);
  static LayeredParams ZerosLike(const LayeredParams& other) {
    return LayeredParams(other.shape_);
  }

  const LayerShape& shape() const { return *shape_; }
  const std::shared_ptr<const LayerShape>& shared_shape() const { return shape_; }
  std::size_t num_layers() const { return shape_ ? shape_->num_layers() : 0; }
  std::size_t total_dim() const { return values_.size(); }

  std::span<Real> layer(std::size_t i);
  std::span<const Real> layer(std::size_t i) const;
  std::span<Real> layer(const std::string& name) { return layer(shape_->index_of(name)); }
  std::span<const Real> layer(const std::string& name) const {
    return layer(shape_->index_of(name));
  }

  std::span<Real> values() { return values_; }
  std::span<const Real> values() const { return values_; }

  bool SameStructure(const LayeredParams& other) const;

  LayeredParams& operator+=(const LayeredParams& other);
  LayeredParams& operator-=(const LayeredParams& other);
  LayeredParams& operator*=(Real scale);
  // this += alpha * other
  LayeredParams& Axpy(Real alpha, const LayeredParams& other);
  void SetZero();

  // Structure equal and every coordinate compares equal.
  bool operator==(const LayeredParams& other) const;

 private:
  void RequireSameStructure(const LayeredParams& other, const char* op) const;

  std::shared_ptr<const LayerShape> shape_;
  std::vector<Real> values_;
};

LayeredParams operator+(LayeredParams a, const LayeredParams& b);
LayeredParams operator-(LayeredParams a, const LayeredParams& b);
LayeredParams operator*(Real s, LayeredParams a);

// Concatenation of all layers in declared order.
std::vector<Real> flatten(const LayeredParams& params);
// Inverse of flatten. Throws StructureError on length mismatch.
LayeredParams unflatten(std::span<const Real> v, std::shared_ptr<const LayerShape> shape);

// Which vector a payload was cut from: the concatenation of all layers, or a
// single named layer.
struct PayloadScope {
  enum class Kind { kGlobal, kLayer };

  Kind kind = Kind::kGlobal;
  std::string layer;

  static PayloadScope Global() { return {}; }
  static PayloadScope Layer(std::string name) { return {Kind::kLayer, std::move(name)}; }

  bool is_global() const { return kind == Kind::kGlobal; }
  std::string ToString() const { return is_global() ? "global" : "layer:" + layer; }
  bool operator==(const PayloadScope&) const = default;
};

// Compressed message: sorted unique coordinate ids plus their values.
struct SparsePayload {
  PayloadScope scope;
  std::size_t dim = 0;
  std::vector<Index> indices;
  std::vector<Real> values;

  std::size_t size() const { return indices.size(); }
  // Throws ContractViolation if any invariant is broken.
  void Validate() const;
  bool operator==(const SparsePayload&) const = default;
};

// Materializes a selection. indices must be strictly increasing and < v.size().
SparsePayload gather(std::span<const Real> v, std::span<const Index> indices,
                     PayloadScope scope = PayloadScope::Global());

// target[idx] += value for each (idx, value). Throws StructureError when
// payload.dim != target.size().
void scatter_add_into(std::span<Real> target, const SparsePayload& payload);
std::vector<Real> scatter_add(std::vector<Real> target, const SparsePayload& payload);

// Dense vector of length payload.dim holding the payload's values.
std::vector<Real> decompress(const SparsePayload& payload);

}  // namespace sparsecomm

#endif  // SPARSECOMM_PARAM_SPACE_H_
