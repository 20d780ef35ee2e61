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

#ifndef SPARSECOMM_MODELS_H_
#define SPARSECOMM_MODELS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sparsecomm/dataset.h"
#include "sparsecomm/param_space.h"

namespace sparsecomm {

// Rows of a dataset forming one mini-batch.
struct Batch {
  const Dataset& data;
  std::span<const std::size_t> rows;
};

// Differentiable model with an exact, layered gradient. Loss is the mean
// over the batch.
class Model {
 public:
  virtual ~Model() = default;

  virtual const std::shared_ptr<const LayerShape>& structure() const = 0;
  virtual LayeredParams InitParams(std::uint64_t seed) const = 0;
  virtual double Loss(const LayeredParams& x, const Batch& batch) const = 0;
  virtual LayeredParams Gradient(const LayeredParams& x, const Batch& batch) const = 0;
  // Accuracy for classifiers, full-data loss for regressors.
  virtual double EvalMetric(const LayeredParams& x, const Dataset& data) const = 0;
  virtual std::string eval_metric_name() const = 0;
};

// f(x) = 1/(2m) sum_i (a_i . x - b_i)^2 over a single layer "w".
class LeastSquaresModel final : public Model {
 public:
  explicit LeastSquaresModel(std::size_t dim);

  const std::shared_ptr<const LayerShape>& structure() const override { return shape_; }
  LayeredParams InitParams(std::uint64_t seed) const override;
  double Loss(const LayeredParams& x, const Batch& batch) const override;
  LayeredParams Gradient(const LayeredParams& x, const Batch& batch) const override;
  double EvalMetric(const LayeredParams& x, const Dataset& data) const override;
  std::string eval_metric_name() const override { return "loss"; }

 private:
  std::shared_ptr<const LayerShape> shape_;
};

enum class Activation { kTanh, kRelu };
Activation ParseActivation(const std::string& s);
std::string ToString(Activation a);

// Fully connected network with softmax cross-entropy. Layers are exposed as
// "fc<i>.weight" (out x in, row-major) and "fc<i>.bias".
class MlpModel final : public Model {
 public:
  MlpModel(std::vector<std::size_t> layer_sizes, Activation activation);

  const std::shared_ptr<const LayerShape>& structure() const override { return shape_; }
  // Weights ~ N(0, 1/fan_in), biases zero.
  LayeredParams InitParams(std::uint64_t seed) const override;
  double Loss(const LayeredParams& x, const Batch& batch) const override;
  LayeredParams Gradient(const LayeredParams& x, const Batch& batch) const override;
  double EvalMetric(const LayeredParams& x, const Dataset& data) const override;
  std::string eval_metric_name() const override { return "accuracy"; }

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::vector<std::size_t> Predict(const LayeredParams& x, const Dataset& data) const;

 private:
  std::vector<std::size_t> sizes_;
  Activation activation_;
  std::shared_ptr<const LayerShape> shape_;
};

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h against Gradient on
// every coordinate. Returns max_i |fd_i - g_i| / max(|fd_i|, |g_i|, floor).
double finite_difference_check(const Model& model, const LayeredParams& x, const Batch& batch,
                               double h, double floor = 1e-3);

}  // namespace sparsecomm

#endif  // SPARSECOMM_MODELS_H_
