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

#ifndef SPARSECOMM_CONFIG_H_
#define SPARSECOMM_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sparsecomm/comm_sim.h"
#include "sparsecomm/compressors.h"
#include "sparsecomm/models.h"
#include "sparsecomm/optimizer.h"

namespace sparsecomm {

struct ModelSpec {
  enum class Kind { kMlp, kLeastSquares };
  Kind kind = Kind::kMlp;
  std::vector<std::size_t> hidden{32, 32};
  Activation activation = Activation::kTanh;
  std::uint64_t seed = 1;

  bool operator==(const ModelSpec&) const = default;
};

struct DataSpec {
  enum class Kind { kBlobs, kLeastSquares, kCsv };
  Kind kind = Kind::kBlobs;
  std::size_t n = 2000;
  std::size_t eval_n = 1000;
  std::size_t p = 16;
  std::size_t classes = 4;
  double separation = 2.0;
  double condition = 10.0;
  double noise = 0.1;
  std::uint64_t seed = 1;
  DataPartition partition = DataPartition::kShard;
  std::string path;  // kCsv only

  bool operator==(const DataSpec&) const = default;
};

// A complete, validated experiment description. Seeds: data.seed keys the
// dataset, shards and batch order; model.seed the initialization;
// compressor.base_seed the coordinate selection.
struct RunConfig {
  std::string name = "run";
  std::size_t workers = 1;
  CommScheme scheme = CommScheme::kAllGather;
  ModelSpec model;
  DataSpec data;
  CompressorConfig compressor;
  TrainerConfig trainer;
  ClusterConfig cluster;
  std::string output_dir = "runs";

  // Includes the compressor/collective compatibility rules.
  void Validate() const;
  TrainerOptions trainer_options() const;
  bool operator==(const RunConfig&) const = default;
};

// Sectioned key = value text. Omitted keys take defaults: fraction 0.01,
// momentum 0.9, weight decay 1e-4, decay factor 10, gamma0 0.1 (0.01 for
// global scope), and a scheme compatible with the compressor.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_string(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

struct GridEntry {
  std::string name;
  bool valid = false;
  RunConfig config;   // when valid
  std::string error;  // when not
};

// A grid file is a config plus a [grid] section whose keys are
// "section.key" and whose values are comma-separated alternatives. The
// cartesian product is expanded in key order; each point gets its own
// name and output directory under the base output_dir.
std::vector<GridEntry> expand_grid(const std::string& text, const std::string& origin = "<string>");
std::vector<GridEntry> load_grid(const std::filesystem::path& path);

}  // namespace sparsecomm

#endif  // SPARSECOMM_CONFIG_H_
