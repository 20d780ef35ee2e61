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

#include "sparsecomm/dataset.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sparsecomm/rng.h"
#include "sparsecomm/text.h"

namespace sparsecomm {
namespace {

// RNG tags reserved for data generation; worker ids never reach these.
constexpr std::uint32_t kLeastSquaresTag = 0xDA7A0001u;
constexpr std::uint32_t kBlobsTag = 0xDA7A0002u;
constexpr std::uint32_t kShardTag = 0xDA7A0003u;
constexpr std::uint32_t kEpochOrdinal = 7;

using MatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void Shuffle(std::vector<std::size_t>& v, RngStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.UniformBelow(i));
    std::swap(v[i - 1], v[j]);
  }
}

MatrixXd GaussianMatrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

// Orthonormal columns spanning a Gaussian matrix's range.
MatrixXd OrthonormalColumns(std::size_t rows, std::size_t cols, RngStream& rng) {
  const MatrixXd g = GaussianMatrix(rows, cols, rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(rows, cols);
  return q;
}

}  // namespace

void Dataset::Validate() const {
  if (n < 1) throw ConfigError("dataset '" + name + "' is empty");
  if (p < 1) throw ConfigError("dataset '" + name + "' has no features");
  if (features.size() != n * p || labels.size() != n) {
    throw StructureError("dataset '" + name + "' rows and labels are misaligned");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.name = name;
  out.seed = seed;
  out.n = rows.size();
  out.p = p;
  out.num_classes = num_classes;
  out.features.reserve(rows.size() * p);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= n) throw ContractViolation("subset row out of range");
    const auto src = row(r);
    out.features.insert(out.features.end(), src.begin(), src.end());
    out.labels.push_back(labels[r]);
  }
  return out;
}

LeastSquaresProblem least_squares_from(std::size_t n, std::size_t p, std::vector<Real> a,
                                       std::vector<Real> b) {
  if (n < p || p < 1) throw ConfigError("least squares needs n >= p >= 1");
  if (a.size() != n * p || b.size() != n) throw StructureError("least squares A/b shape mismatch");
  MatrixXd am(n, p);
  Eigen::VectorXd bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    bv(i) = b[i];
    for (std::size_t j = 0; j < p; ++j) am(i, j) = a[i * p + j];
  }
  const Eigen::VectorXd x = am.colPivHouseholderQr().solve(bv);
  const double f_star = 0.5 * (am * x - bv).squaredNorm() / static_cast<double>(n);

  LeastSquaresProblem out;
  out.data.name = "least_squares";
  out.data.n = n;
  out.data.p = p;
  out.data.features = std::move(a);
  out.data.labels = std::move(b);
  out.optimum.assign(x.data(), x.data() + p);
  out.f_star = f_star;
  return out;
}

LeastSquaresProblem gen_least_squares(std::size_t p, std::size_t n, double condition,
                                      std::uint64_t seed, double noise) {
  if (n < p || p < 1) throw ConfigError("least squares needs n >= p >= 1");
  if (!(condition >= 1.0)) throw ConfigError("condition number must be >= 1");
  RngStream rng(seed, kLeastSquaresTag, 0);
  const MatrixXd u = OrthonormalColumns(n, p, rng);
  const MatrixXd v = OrthonormalColumns(p, p, rng);
  Eigen::VectorXd s(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double t = p == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(p - 1);
    s(i) = std::sqrt(static_cast<double>(n) * std::pow(condition, -t));
  }
  const MatrixXd a = u * s.asDiagonal() * v.transpose();
  Eigen::VectorXd x_true(p);
  for (std::size_t j = 0; j < p; ++j) x_true(j) = rng.Normal();
  Eigen::VectorXd b = a * x_true;
  for (std::size_t i = 0; i < n; ++i) b(i) += noise * rng.Normal();

  std::vector<Real> av(n * p), bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    bv[i] = static_cast<Real>(b(i));
    for (std::size_t j = 0; j < p; ++j) av[i * p + j] = static_cast<Real>(a(i, j));
  }
  LeastSquaresProblem out = least_squares_from(n, p, std::move(av), std::move(bv));
  out.data.seed = seed;
  return out;
}

Dataset gen_blobs(std::size_t classes, std::size_t n, std::size_t p, double separation,
                  std::uint64_t seed) {
  if (classes < 2) throw ConfigError("blobs need at least 2 classes");
  if (n < classes) throw ConfigError("blobs need at least one point per class");
  if (p < 1) throw ConfigError("blobs need at least one feature");
  RngStream rng(seed, kBlobsTag, 0);
  std::vector<double> centers(classes * p);
  for (std::size_t c = 0; c < classes; ++c) {
    double norm = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      centers[c * p + j] = rng.Normal();
      norm += centers[c * p + j] * centers[c * p + j];
    }
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < p; ++j) centers[c * p + j] *= separation / norm;
  }
  Dataset d;
  d.name = "blobs";
  d.seed = seed;
  d.n = n;
  d.p = p;
  d.num_classes = classes;
  d.features.resize(n * p);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes;
    d.labels[i] = static_cast<Real>(c);
    for (std::size_t j = 0; j < p; ++j) {
      d.features[i * p + j] = static_cast<Real>(centers[c * p + j] + rng.Normal());
    }
  }
  return d;
}

std::vector<std::size_t> shard_rows(std::size_t n, std::size_t world_size, std::size_t worker_id,
                                    std::uint64_t seed) {
  if (world_size < 1) throw ConfigError("world size must be >= 1");
  if (world_size > n) {
    throw ConfigError("cannot shard " + std::to_string(n) + " rows over " +
                      std::to_string(world_size) + " workers");
  }
  if (worker_id >= world_size) throw ContractViolation("worker id out of range");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RngStream rng(seed, kShardTag, 0);
  Shuffle(perm, rng);
  const std::size_t base = n / world_size;
  const std::size_t extra = n % world_size;
  const std::size_t begin = worker_id * base + std::min(worker_id, extra);
  const std::size_t size = base + (worker_id < extra ? 1 : 0);
  return {perm.begin() + begin, perm.begin() + begin + size};
}

Dataset shard(const Dataset& data, std::size_t world_size, std::size_t worker_id,
              std::uint64_t seed) {
  const auto rows = shard_rows(data.n, world_size, worker_id, seed);
  return data.Subset(rows);
}

std::vector<std::size_t> epoch_order(std::size_t shard_size, std::uint64_t seed,
                                     std::uint32_t worker_id, std::uint64_t epoch) {
  std::vector<std::size_t> order(shard_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(seed, worker_id, epoch, kEpochOrdinal);
  Shuffle(order, rng);
  return order;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  data.Validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# sparsecomm-dataset name=" << data.name << " seed=" << data.seed
      << " classes=" << data.num_classes << "\n";
  for (std::size_t j = 0; j < data.p; ++j) out << "x" << j << ",";
  out << "label\n";
  for (std::size_t i = 0; i < data.n; ++i) {
    for (Real v : data.row(i)) out << FormatDouble(v) << ",";
    out << FormatDouble(data.labels[i]) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (Trim(line).empty()) continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "name") d.name = val;
        if (key == "seed" && !TryParseNumber(val, d.seed)) throw IoError(where + ": bad seed");
        if (key == "classes" && !TryParseNumber(val, d.num_classes)) {
          throw IoError(where + ": bad class count");
        }
      }
      continue;
    }
    const auto cells = Split(line, ',');
    if (!have_header) {
      if (cells.size() < 2 || cells.back() != "label") {
        throw IoError(where + ": header must list feature columns then 'label'");
      }
      d.p = cells.size() - 1;
      have_header = true;
      continue;
    }
    if (cells.size() != d.p + 1) throw IoError(where + ": expected " + std::to_string(d.p + 1) + " cells");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v;
      if (!TryParseNumber(cells[j], v)) throw IoError(where + ": bad number '" + cells[j] + "'");
      if (j < d.p) {
        d.features.push_back(static_cast<Real>(v));
      } else {
        d.labels.push_back(static_cast<Real>(v));
      }
    }
    ++d.n;
  }
  if (!have_header) throw IoError("'" + path.string() + "' has no header row");
  d.Validate();
  return d;
}

}  // namespace sparsecomm
