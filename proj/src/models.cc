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

#include "sparsecomm/models.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sparsecomm/rng.h"

namespace sparsecomm {
namespace {

constexpr std::uint32_t kInitTag = 0x1A17A000u;

using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const Mat>;
using MatMap = Eigen::Map<Mat>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

Mat BatchFeatures(const Batch& batch) {
  Mat m(batch.rows.size(), batch.data.p);
  for (std::size_t i = 0; i < batch.rows.size(); ++i) {
    const auto row = batch.data.row(batch.rows[i]);
    for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = row[j];
  }
  return m;
}

void RequireBatch(const Batch& batch, std::size_t p) {
  if (batch.rows.empty()) throw ContractViolation("empty batch");
  if (batch.data.p != p) {
    throw StructureError("model expects " + std::to_string(p) + " features, data has " +
                         std::to_string(batch.data.p));
  }
}

std::vector<std::size_t> AllRows(const Dataset& data) {
  std::vector<std::size_t> rows(data.n);
  for (std::size_t i = 0; i < data.n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

LeastSquaresModel::LeastSquaresModel(std::size_t dim)
    : shape_(std::make_shared<const LayerShape>(
          std::vector<std::pair<std::string, std::size_t>>{{"w", dim}})) {}

LayeredParams LeastSquaresModel::InitParams(std::uint64_t) const { return LayeredParams(shape_); }

double LeastSquaresModel::Loss(const LayeredParams& x, const Batch& batch) const {
  RequireBatch(batch, shape_->total_dim());
  const auto w = x.values();
  double total = 0.0;
  for (std::size_t r : batch.rows) {
    const auto a = batch.data.row(r);
    double residual = -static_cast<double>(batch.data.labels[r]);
    for (std::size_t j = 0; j < a.size(); ++j) residual += static_cast<double>(a[j]) * w[j];
    total += residual * residual;
  }
  return 0.5 * total / static_cast<double>(batch.rows.size());
}

LayeredParams LeastSquaresModel::Gradient(const LayeredParams& x, const Batch& batch) const {
  RequireBatch(batch, shape_->total_dim());
  const auto w = x.values();
  LayeredParams g(shape_);
  auto gv = g.values();
  const Real inv_m = Real{1} / static_cast<Real>(batch.rows.size());
  for (std::size_t r : batch.rows) {
    const auto a = batch.data.row(r);
    Real residual = -batch.data.labels[r];
    for (std::size_t j = 0; j < a.size(); ++j) residual += a[j] * w[j];
    for (std::size_t j = 0; j < a.size(); ++j) gv[j] += inv_m * residual * a[j];
  }
  return g;
}

double LeastSquaresModel::EvalMetric(const LayeredParams& x, const Dataset& data) const {
  const auto rows = AllRows(data);
  return Loss(x, Batch{data, rows});
}

Activation ParseActivation(const std::string& s) {
  if (s == "tanh") return Activation::kTanh;
  if (s == "relu") return Activation::kRelu;
  throw ConfigError("unknown activation '" + s + "' (expected tanh or relu)");
}

std::string ToString(Activation a) { return a == Activation::kTanh ? "tanh" : "relu"; }

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes, Activation activation)
    : sizes_(std::move(layer_sizes)), activation_(activation) {
  if (sizes_.size() < 2) throw ConfigError("an MLP needs at least input and output sizes");
  if (sizes_.back() < 2) throw ConfigError("an MLP classifier needs at least 2 outputs");
  std::vector<std::pair<std::string, std::size_t>> layers;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto prefix = "fc" + std::to_string(l);
    layers.emplace_back(prefix + ".weight", sizes_[l + 1] * sizes_[l]);
    layers.emplace_back(prefix + ".bias", sizes_[l + 1]);
  }
  shape_ = std::make_shared<const LayerShape>(std::move(layers));
}

LayeredParams MlpModel::InitParams(std::uint64_t seed) const {
  LayeredParams x(shape_);
  RngStream rng(seed, kInitTag, 0);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const Real scale = static_cast<Real>(1.0 / std::sqrt(static_cast<double>(sizes_[l])));
    for (Real& w : x.layer(2 * l)) w = scale * static_cast<Real>(rng.Normal());
  }
  return x;
}

namespace {

struct ForwardPass {
  std::vector<Mat> activations;  // activations[0] = input; last = logits
  std::vector<Mat> pre;          // pre-activation of each layer
};

ForwardPass RunForward(const LayeredParams& x, const Mat& input,
                       const std::vector<std::size_t>& sizes, Activation act) {
  ForwardPass fp;
  fp.activations.push_back(input);
  const std::size_t num_layers = sizes.size() - 1;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const auto w = x.layer(2 * l);
    const auto b = x.layer(2 * l + 1);
    const ConstMatMap wm(w.data(), sizes[l + 1], sizes[l]);
    const Eigen::Map<const Vec> bv(b.data(), sizes[l + 1]);
    Mat z = fp.activations.back() * wm.transpose();
    z.rowwise() += bv.transpose();
    fp.pre.push_back(z);
    if (l + 1 < num_layers) {
      if (act == Activation::kTanh) {
        z = z.array().tanh().matrix();
      } else {
        z = z.cwiseMax(Real{0});
      }
    }
    fp.activations.push_back(std::move(z));
  }
  return fp;
}

// Row-wise log-softmax.
Mat LogSoftmax(const Mat& logits) {
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const Real mx = logits.row(i).maxCoeff();
    Real sum = 0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) sum += std::exp(logits(i, j) - mx);
    const Real lse = mx + std::log(sum);
    out.row(i) = logits.row(i).array() - lse;
  }
  return out;
}

std::size_t LabelOf(const Dataset& data, std::size_t r, std::size_t classes) {
  const Real v = data.labels[r];
  if (!(v >= 0) || static_cast<std::size_t>(v) >= classes) {
    throw StructureError("label " + std::to_string(v) + " outside 0.." +
                         std::to_string(classes - 1));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

double MlpModel::Loss(const LayeredParams& x, const Batch& batch) const {
  RequireBatch(batch, sizes_.front());
  const ForwardPass fp = RunForward(x, BatchFeatures(batch), sizes_, activation_);
  const Mat logp = LogSoftmax(fp.activations.back());
  double total = 0.0;
  for (std::size_t i = 0; i < batch.rows.size(); ++i) {
    total -= logp(i, LabelOf(batch.data, batch.rows[i], sizes_.back()));
  }
  return total / static_cast<double>(batch.rows.size());
}

LayeredParams MlpModel::Gradient(const LayeredParams& x, const Batch& batch) const {
  RequireBatch(batch, sizes_.front());
  const ForwardPass fp = RunForward(x, BatchFeatures(batch), sizes_, activation_);
  const std::size_t m = batch.rows.size();
  const std::size_t num_layers = sizes_.size() - 1;

  // dL/dlogits = (softmax - onehot) / m
  Mat delta = LogSoftmax(fp.activations.back()).array().exp().matrix();
  for (std::size_t i = 0; i < m; ++i) {
    delta(i, LabelOf(batch.data, batch.rows[i], sizes_.back())) -= Real{1};
  }
  delta /= static_cast<Real>(m);

  LayeredParams g(shape_);
  for (std::size_t l = num_layers; l-- > 0;) {
    auto gw = g.layer(2 * l);
    auto gb = g.layer(2 * l + 1);
    MatMap gwm(gw.data(), sizes_[l + 1], sizes_[l]);
    Eigen::Map<Vec> gbv(gb.data(), sizes_[l + 1]);
    gwm = delta.transpose() * fp.activations[l];
    gbv = delta.colwise().sum().transpose();
    if (l == 0) break;
    const auto w = x.layer(2 * l);
    const ConstMatMap wm(w.data(), sizes_[l + 1], sizes_[l]);
    Mat back = delta * wm;
    const Mat& z = fp.pre[l - 1];
    if (activation_ == Activation::kTanh) {
      const Mat& a = fp.activations[l];
      back.array() *= (Real{1} - a.array().square());
    } else {
      back.array() *= (z.array() > Real{0}).template cast<Real>();
    }
    delta = std::move(back);
  }
  return g;
}

std::vector<std::size_t> MlpModel::Predict(const LayeredParams& x, const Dataset& data) const {
  const auto rows = AllRows(data);
  const Batch batch{data, rows};
  RequireBatch(batch, sizes_.front());
  const ForwardPass fp = RunForward(x, BatchFeatures(batch), sizes_, activation_);
  const Mat& logits = fp.activations.back();
  std::vector<std::size_t> out(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    Eigen::Index arg;
    logits.row(i).maxCoeff(&arg);
    out[i] = static_cast<std::size_t>(arg);
  }
  return out;
}

double MlpModel::EvalMetric(const LayeredParams& x, const Dataset& data) const {
  const auto pred = Predict(x, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.n; ++i) {
    correct += pred[i] == LabelOf(data, i, sizes_.back()) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.n);
}

double finite_difference_check(const Model& model, const LayeredParams& x, const Batch& batch,
                               double h, double floor) {
  if (!(h > 0.0)) throw ContractViolation("finite difference step must be positive");
  const LayeredParams g = model.Gradient(x, batch);
  LayeredParams probe = x;
  auto pv = probe.values();
  const auto gv = g.values();
  double worst = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const Real orig = pv[i];
    const Real hi = orig + static_cast<Real>(h);
    const Real lo = orig - static_cast<Real>(h);
    pv[i] = hi;
    const double up = model.Loss(probe, batch);
    pv[i] = lo;
    const double down = model.Loss(probe, batch);
    pv[i] = orig;
    // Divide by the step actually taken after rounding.
    const double fd = (up - down) / (static_cast<double>(hi) - static_cast<double>(lo));
    const double an = gv[i];
    const double scale = std::max({std::abs(fd), std::abs(an), floor});
    worst = std::max(worst, std::abs(fd - an) / scale);
  }
  return worst;
}

}  // namespace sparsecomm
