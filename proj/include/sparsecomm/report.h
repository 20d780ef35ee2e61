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

#ifndef SPARSECOMM_REPORT_H_
#define SPARSECOMM_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sparsecomm/config.h"
#include "sparsecomm/optimizer.h"

namespace sparsecomm {

// One completed run as read back from its output directory.
struct RunRecord {
  std::filesystem::path dir;
  RunConfig config;
  std::string eval_metric_name;
  std::vector<EpochMetrics> epochs;
  std::vector<StepReport> steps;

  double final_eval() const { return epochs.back().eval_metric; }
};

// A run directory itself, or every directory below `dir` holding a
// config.ini. Throws IoError naming the offending file on missing or corrupt
// metrics, and when no run is found.
std::vector<RunRecord> load_runs(const std::filesystem::path& dir);

// Row label in the accuracy grid, e.g. "Random-k (allGather)".
std::string configuration_label(const RunConfig& cfg);

// Markdown: (a) final eval metric per configuration x scope x W, with the
// dense baseline row always present; (b) mean per-step stage breakdown.
std::string render_report(const std::vector<RunRecord>& runs);

}  // namespace sparsecomm

#endif  // SPARSECOMM_REPORT_H_
