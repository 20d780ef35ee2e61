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

#include "sparsecomm/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sparsecomm/experiment.h"
#include "sparsecomm/text.h"

namespace sparsecomm {
namespace {

struct CsvFile {
  std::string schema_line;
  std::vector<std::vector<std::string>> rows;
};

CsvFile ReadCsv(const std::filesystem::path& path, const std::string& schema,
                const std::string& header) {
  std::ifstream in(path);
  if (!in) throw IoError("missing metrics file '" + path.string() + "'");
  CsvFile f;
  std::string line;
  if (!std::getline(in, line) || line.rfind(schema, 0) != 0) {
    throw IoError("corrupt metrics file '" + path.string() + "': bad schema line");
  }
  f.schema_line = line;
  if (!std::getline(in, line) || Trim(line) != header) {
    throw IoError("corrupt metrics file '" + path.string() + "': bad header");
  }
  const std::size_t columns = Split(header, ',').size();
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto cells = Split(line, ',');
    if (cells.size() != columns) {
      throw IoError("corrupt metrics file '" + path.string() + "' line " +
                    std::to_string(line_no) + ": expected " + std::to_string(columns) +
                    " columns");
    }
    f.rows.push_back(std::move(cells));
  }
  if (f.rows.empty()) throw IoError("corrupt metrics file '" + path.string() + "': no rows");
  return f;
}

template <typename T>
T Cell(const std::vector<std::string>& row, std::size_t i, const std::filesystem::path& path) {
  T v{};
  if (!TryParseNumber(row[i], v)) {
    throw IoError("corrupt metrics file '" + path.string() + "': bad value '" + row[i] + "'");
  }
  return v;
}

RunRecord LoadRun(const std::filesystem::path& dir) {
  RunRecord r;
  r.dir = dir;
  try {
    r.config = load_config(dir / "config.ini");
  } catch (const Error& e) {
    throw IoError("corrupt run config '" + (dir / "config.ini").string() + "': " + e.what());
  }
  const auto epochs_path = dir / "epochs.csv";
  const CsvFile ef = ReadCsv(epochs_path, kEpochSchema, kEpochHeader);
  const auto pos = ef.schema_line.find("eval_metric=");
  r.eval_metric_name = pos == std::string::npos ? "metric" : ef.schema_line.substr(pos + 12);
  for (const auto& row : ef.rows) {
    EpochMetrics m;
    m.epoch = Cell<std::size_t>(row, 0, epochs_path);
    m.train_loss = Cell<double>(row, 1, epochs_path);
    m.eval_metric = Cell<double>(row, 2, epochs_path);
    m.lr = Cell<double>(row, 3, epochs_path);
    m.cumulative_bytes = Cell<double>(row, 4, epochs_path);
    r.epochs.push_back(m);
  }
  const auto steps_path = dir / "steps.csv";
  const CsvFile sf = ReadCsv(steps_path, kStepSchema, kStepHeader);
  for (const auto& row : sf.rows) {
    StepReport s;
    s.step = Cell<std::size_t>(row, 0, steps_path);
    s.timings.forward = Cell<double>(row, 1, steps_path);
    s.timings.backward = Cell<double>(row, 2, steps_path);
    s.timings.codec = Cell<double>(row, 3, steps_path);
    s.timings.exchange_modeled = Cell<double>(row, 4, steps_path);
    s.traffic.entries_sent = Cell<std::uint64_t>(row, 5, steps_path);
    s.traffic.bytes_sent = Cell<double>(row, 6, steps_path);
    s.traffic.messages_sent = Cell<std::uint64_t>(row, 7, steps_path);
    s.loss = Cell<double>(row, 8, steps_path);
    r.steps.push_back(s);
  }
  return r;
}

std::string FormatMetric(double v, const std::string& metric) {
  char buf[64];
  if (metric == "accuracy") {
    std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4g", v);
  }
  return buf;
}

std::string Ms(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", seconds * 1e3);
  return buf;
}

int LabelRank(const std::string& label) {
  static const std::vector<std::string> order{
      "Standard SGD",           "Top-k",
      "Random-k (allGather)",   "Random-k (allReduce)",
      "Block-random-k (allGather)", "Block-random-k (allReduce)"};
  const auto it = std::find(order.begin(), order.end(), label);
  return static_cast<int>(it - order.begin());
}

}  // namespace

std::vector<RunRecord> load_runs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("'" + dir.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> run_dirs;
  if (std::filesystem::exists(dir / "config.ini")) {
    run_dirs.push_back(dir);
  } else {
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().filename() == "config.ini") {
        run_dirs.push_back(entry.path().parent_path());
      }
    }
  }
  if (run_dirs.empty()) throw IoError("no completed runs under '" + dir.string() + "'");
  std::sort(run_dirs.begin(), run_dirs.end());
  std::vector<RunRecord> runs;
  for (const auto& d : run_dirs) runs.push_back(LoadRun(d));
  return runs;
}

std::string configuration_label(const RunConfig& cfg) {
  const std::string scheme = cfg.scheme == CommScheme::kAllReduce ? "allReduce" : "allGather";
  switch (cfg.compressor.kind) {
    case CompressorKind::kIdentity: return "Standard SGD";
    case CompressorKind::kTopK: return "Top-k";
    case CompressorKind::kRandomK: return "Random-k (" + scheme + ")";
    case CompressorKind::kBlockRandomK: return "Block-random-k (" + scheme + ")";
  }
  return "?";
}

std::string render_report(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw IoError("no runs to report");

  std::set<std::string> metrics;
  for (const auto& r : runs) metrics.insert(r.eval_metric_name);
  const std::string metric = metrics.size() == 1 ? *metrics.begin() : "mixed metrics";

  // Scope columns come from the sparse runs; the dense baseline does not
  // depend on scope and is listed under each.
  std::set<SparsifyScope> scopes;
  std::set<std::size_t> worlds;
  for (const auto& r : runs) {
    worlds.insert(r.config.workers);
    if (r.config.compressor.kind != CompressorKind::kIdentity) {
      scopes.insert(r.config.compressor.scope);
    }
  }
  if (scopes.empty()) scopes.insert(SparsifyScope::kLayerWise);

  using CellKey = std::tuple<std::string, SparsifyScope, std::size_t>;
  std::map<CellKey, std::vector<double>> cells;
  std::set<std::string> labels{"Standard SGD"};
  for (const auto& r : runs) {
    const std::string label = configuration_label(r.config);
    labels.insert(label);
    if (r.config.compressor.kind == CompressorKind::kIdentity) {
      for (auto s : scopes) cells[{label, s, r.config.workers}].push_back(r.final_eval());
    } else {
      cells[{label, r.config.compressor.scope, r.config.workers}].push_back(r.final_eval());
    }
  }
  std::vector<std::string> ordered(labels.begin(), labels.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return LabelRank(a) < LabelRank(b);
  });

  std::ostringstream out;
  out << "## Final " << metric << " by configuration\n\n| Configuration |";
  for (auto s : scopes) {
    const char* scope_name = s == SparsifyScope::kLayerWise ? "Layer-wise" : "Global";
    for (auto w : worlds) out << " " << scope_name << " W=" << w << " |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < scopes.size() * worlds.size(); ++i) out << "---|";
  out << "\n";
  for (const auto& label : ordered) {
    out << "| " << label << " |";
    for (auto s : scopes) {
      for (auto w : worlds) {
        const auto it = cells.find({label, s, w});
        if (it == cells.end()) {
          out << " - |";
          continue;
        }
        const auto& v = it->second;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        out << " " << FormatMetric(mean, metric);
        if (v.size() > 1) out << " (n=" << v.size() << ")";
        out << " |";
      }
    }
    out << "\n";
  }

  // Mean per-step breakdown per (configuration, scope, W).
  struct Acc {
    StageTimings sum;
    std::size_t steps = 0;
  };
  using RowKey = std::tuple<int, std::string, std::string, std::size_t>;
  std::map<RowKey, Acc> rows;
  for (const auto& r : runs) {
    const std::string label = configuration_label(r.config);
    const std::string scope = r.config.compressor.kind == CompressorKind::kIdentity
                                  ? "-"
                                  : std::string(ToString(r.config.compressor.scope));
    Acc& acc = rows[{LabelRank(label), label, scope, r.config.workers}];
    for (const auto& s : r.steps) {
      acc.sum.forward += s.timings.forward;
      acc.sum.backward += s.timings.backward;
      acc.sum.codec += s.timings.codec;
      acc.sum.exchange_modeled += s.timings.exchange_modeled;
      ++acc.steps;
    }
  }
  out << "\n## Time per training step (ms)\n\n"
      << "| Configuration | Scope | W | Forward (measured) | Backward (measured) | "
         "Coding/decoding (measured) | Exchange (modeled) | Total | Breakdown |\n"
      << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& [key, acc] : rows) {
    const double n = static_cast<double>(std::max<std::size_t>(acc.steps, 1));
    const StageTimings mean{acc.sum.forward / n, acc.sum.backward / n, acc.sum.codec / n,
                            acc.sum.exchange_modeled / n};
    const double total = mean.total();
    std::string bar;
    if (total > 0.0) {
      constexpr int kWidth = 40;
      const auto cells_for = [&](double t) {
        return std::string(static_cast<std::size_t>(std::lround(kWidth * t / total)), ' ');
      };
      std::string f = cells_for(mean.forward), b = cells_for(mean.backward);
      std::string c = cells_for(mean.codec), x = cells_for(mean.exchange_modeled);
      std::fill(f.begin(), f.end(), 'F');
      std::fill(b.begin(), b.end(), 'B');
      std::fill(c.begin(), c.end(), 'C');
      std::fill(x.begin(), x.end(), 'X');
      bar = "`" + f + b + c + x + "`";
    }
    out << "| " << std::get<1>(key) << " | " << std::get<2>(key) << " | " << std::get<3>(key)
        << " | " << Ms(mean.forward) << " | " << Ms(mean.backward) << " | " << Ms(mean.codec)
        << " | " << Ms(mean.exchange_modeled) << " | " << Ms(total) << " | " << bar << " |\n";
  }
  out << "\nF forward, B backward, C coding/decoding, X exchange.\n";
  return out.str();
}

}  // namespace sparsecomm
