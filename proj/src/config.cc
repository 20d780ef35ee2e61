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

#include "sparsecomm/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sparsecomm/text.h"

namespace sparsecomm {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"run", {"name", "workers", "scheme", "output_dir"}},
      {"model", {"kind", "hidden", "activation", "seed"}},
      {"data",
       {"kind", "n", "eval_n", "p", "classes", "separation", "condition", "noise", "seed",
        "partition", "path"}},
      {"compressor", {"kind", "fraction", "scope", "seed_mode", "seed"}},
      {"trainer",
       {"gamma0", "lr_decay_epochs", "lr_decay_factor", "momentum", "weight_decay", "epochs",
        "batch_size", "scale_lr_by_workers", "literal_error_update"}},
      {"cluster", {"bandwidth", "latency", "value_bytes"}},
  };
  return keys;
}

// Drops an inline "; ..." or " # ..." comment after a value.
std::string StripComment(const std::string& raw) {
  std::string_view v(raw);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) {
      v = v.substr(0, i);
      break;
    }
  }
  return std::string(Trim(v));
}

// Typed access to one parsed tree; every error names origin and key.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::string origin) : tree_(tree), origin_(std::move(origin)) {
    for (const auto& [section, body] : tree_) {
      if (section == "grid" || section == "sweep") continue;
      if (!body.data().empty() && body.empty()) Fail("key '" + section + "' outside a section");
      const auto it = KnownKeys().find(section);
      if (it == KnownKeys().end()) Fail("unknown section [" + section + "]");
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) Fail("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  [[noreturn]] void Fail(const std::string& msg) const {
    throw ConfigError(origin_ + ": " + msg);
  }

  std::optional<std::string> Raw(const std::string& section, const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "/" + key, '/'));
    if (!v) return std::nullopt;
    return StripComment(*v);
  }

  std::string String(const std::string& s, const std::string& k, const std::string& def) const {
    return Raw(s, k).value_or(def);
  }

  template <typename T>
  T Number(const std::string& s, const std::string& k, T def) const {
    const auto raw = Raw(s, k);
    if (!raw) return def;
    T out{};
    if (!TryParseNumber(*raw, out)) Fail(s + "." + k + ": '" + *raw + "' is not a valid number");
    return out;
  }

  bool Flag(const std::string& s, const std::string& k, bool def) const {
    const auto raw = Raw(s, k);
    if (!raw) return def;
    if (*raw == "true" || *raw == "1" || *raw == "on") return true;
    if (*raw == "false" || *raw == "0" || *raw == "off") return false;
    Fail(s + "." + k + ": '" + *raw + "' is not a boolean");
  }

  std::vector<std::size_t> Sizes(const std::string& s, const std::string& k,
                                 std::vector<std::size_t> def) const {
    const auto raw = Raw(s, k);
    if (!raw) return def;
    std::vector<std::size_t> out;
    if (raw->empty()) return out;
    for (const auto& cell : Split(*raw, ',')) {
      std::size_t v;
      if (!TryParseNumber(cell, v)) Fail(s + "." + k + ": '" + cell + "' is not a count");
      out.push_back(v);
    }
    return out;
  }

  template <typename F>
  auto Enum(const std::string& s, const std::string& k, const std::string& def, F parse) const {
    const auto raw = String(s, k, def);
    try {
      return parse(raw);
    } catch (const ConfigError& e) {
      Fail(s + "." + k + ": " + e.what());
    }
  }

 private:
  const pt::ptree& tree_;
  std::string origin_;
};

pt::ptree ParseTree(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

ModelSpec::Kind ParseModelKind(const std::string& s) {
  if (s == "mlp") return ModelSpec::Kind::kMlp;
  if (s == "least_squares") return ModelSpec::Kind::kLeastSquares;
  throw ConfigError("unknown model kind '" + s + "' (expected mlp or least_squares)");
}

DataSpec::Kind ParseDataKind(const std::string& s) {
  if (s == "blobs") return DataSpec::Kind::kBlobs;
  if (s == "least_squares") return DataSpec::Kind::kLeastSquares;
  if (s == "csv") return DataSpec::Kind::kCsv;
  throw ConfigError("unknown data kind '" + s + "' (expected blobs, least_squares or csv)");
}

DataPartition ParsePartition(const std::string& s) {
  if (s == "shard") return DataPartition::kShard;
  if (s == "replicate") return DataPartition::kReplicate;
  throw ConfigError("unknown partition '" + s + "' (expected shard or replicate)");
}

std::string ModelKindName(ModelSpec::Kind k) {
  return k == ModelSpec::Kind::kMlp ? "mlp" : "least_squares";
}

std::string DataKindName(DataSpec::Kind k) {
  switch (k) {
    case DataSpec::Kind::kBlobs: return "blobs";
    case DataSpec::Kind::kLeastSquares: return "least_squares";
    case DataSpec::Kind::kCsv: return "csv";
  }
  return "?";
}

std::string JoinSizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

RunConfig FromTree(const pt::ptree& tree, const std::string& origin) {
  const Reader r(tree, origin);
  RunConfig c;
  c.name = r.String("run", "name", c.name);
  c.workers = r.Number<std::size_t>("run", "workers", c.workers);
  c.output_dir = r.String("run", "output_dir", c.output_dir);

  c.model.kind = r.Enum("model", "kind", "mlp", ParseModelKind);
  c.model.hidden = r.Sizes("model", "hidden", c.model.hidden);
  c.model.activation = r.Enum("model", "activation", "tanh", ParseActivation);
  c.model.seed = r.Number<std::uint64_t>("model", "seed", c.model.seed);

  const std::string default_data = c.model.kind == ModelSpec::Kind::kMlp ? "blobs" : "least_squares";
  c.data.kind = r.Enum("data", "kind", default_data, ParseDataKind);
  c.data.n = r.Number<std::size_t>("data", "n", c.data.n);
  c.data.eval_n = r.Number<std::size_t>("data", "eval_n", c.data.eval_n);
  c.data.p = r.Number<std::size_t>("data", "p", c.data.p);
  c.data.classes = r.Number<std::size_t>("data", "classes", c.data.classes);
  c.data.separation = r.Number<double>("data", "separation", c.data.separation);
  c.data.condition = r.Number<double>("data", "condition", c.data.condition);
  c.data.noise = r.Number<double>("data", "noise", c.data.noise);
  c.data.seed = r.Number<std::uint64_t>("data", "seed", c.data.seed);
  c.data.partition = r.Enum("data", "partition", "shard", ParsePartition);
  c.data.path = r.String("data", "path", "");

  c.compressor.kind = r.Enum("compressor", "kind", "topk", ParseCompressorKind);
  c.compressor.fraction = r.Number<double>("compressor", "fraction", 0.01);
  c.compressor.scope = r.Enum("compressor", "scope", "layerwise", ParseSparsifyScope);
  c.compressor.seed_mode = r.Enum("compressor", "seed_mode", "shared", ParseSeedMode);
  c.compressor.base_seed = r.Number<std::uint64_t>("compressor", "seed", 0);

  const std::string default_scheme =
      c.compressor.kind == CompressorKind::kIdentity ? "allreduce" : "allgather";
  c.scheme = r.Enum("run", "scheme", default_scheme, ParseCommScheme);

  const bool global = c.compressor.scope == SparsifyScope::kGlobal &&
                      c.compressor.kind != CompressorKind::kIdentity;
  c.trainer.gamma0 = r.Number<double>("trainer", "gamma0", global ? 0.01 : 0.1);
  c.trainer.lr_decay_epochs = r.Sizes("trainer", "lr_decay_epochs", {});
  c.trainer.lr_decay_factor = r.Number<double>("trainer", "lr_decay_factor", 10.0);
  c.trainer.momentum = r.Number<double>("trainer", "momentum", 0.9);
  c.trainer.weight_decay = r.Number<double>("trainer", "weight_decay", 1e-4);
  c.trainer.epochs = r.Number<std::size_t>("trainer", "epochs", 10);
  c.trainer.batch_size = r.Number<std::size_t>("trainer", "batch_size", 32);
  c.trainer.scale_lr_by_workers = r.Flag("trainer", "scale_lr_by_workers", false);
  c.trainer.literal_error_update = r.Flag("trainer", "literal_error_update", false);

  c.cluster.world_size = c.workers;
  c.cluster.bandwidth = r.Number<double>("cluster", "bandwidth", c.cluster.bandwidth);
  c.cluster.latency = r.Number<double>("cluster", "latency", c.cluster.latency);
  c.cluster.value_bytes = r.Number<std::size_t>("cluster", "value_bytes", c.cluster.value_bytes);

  try {
    c.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

pt::ptree ToTree(const RunConfig& c) {
  pt::ptree t;
  auto put = [&t](const std::string& s, const std::string& k, const std::string& v) {
    t.put(pt::ptree::path_type(s + "/" + k, '/'), v);
  };
  put("run", "name", c.name);
  put("run", "workers", std::to_string(c.workers));
  put("run", "scheme", std::string(ToString(c.scheme)));
  put("run", "output_dir", c.output_dir);

  put("model", "kind", ModelKindName(c.model.kind));
  put("model", "hidden", JoinSizes(c.model.hidden));
  put("model", "activation", ToString(c.model.activation));
  put("model", "seed", std::to_string(c.model.seed));

  put("data", "kind", DataKindName(c.data.kind));
  put("data", "n", std::to_string(c.data.n));
  put("data", "eval_n", std::to_string(c.data.eval_n));
  put("data", "p", std::to_string(c.data.p));
  put("data", "classes", std::to_string(c.data.classes));
  put("data", "separation", FormatDouble(c.data.separation));
  put("data", "condition", FormatDouble(c.data.condition));
  put("data", "noise", FormatDouble(c.data.noise));
  put("data", "seed", std::to_string(c.data.seed));
  put("data", "partition", c.data.partition == DataPartition::kShard ? "shard" : "replicate");
  if (!c.data.path.empty()) put("data", "path", c.data.path);

  put("compressor", "kind", std::string(ToString(c.compressor.kind)));
  put("compressor", "fraction", FormatDouble(c.compressor.fraction));
  put("compressor", "scope", std::string(ToString(c.compressor.scope)));
  put("compressor", "seed_mode", std::string(ToString(c.compressor.seed_mode)));
  put("compressor", "seed", std::to_string(c.compressor.base_seed));

  put("trainer", "gamma0", FormatDouble(c.trainer.gamma0));
  put("trainer", "lr_decay_epochs", JoinSizes(c.trainer.lr_decay_epochs));
  put("trainer", "lr_decay_factor", FormatDouble(c.trainer.lr_decay_factor));
  put("trainer", "momentum", FormatDouble(c.trainer.momentum));
  put("trainer", "weight_decay", FormatDouble(c.trainer.weight_decay));
  put("trainer", "epochs", std::to_string(c.trainer.epochs));
  put("trainer", "batch_size", std::to_string(c.trainer.batch_size));
  put("trainer", "scale_lr_by_workers", c.trainer.scale_lr_by_workers ? "true" : "false");
  put("trainer", "literal_error_update", c.trainer.literal_error_update ? "true" : "false");

  put("cluster", "bandwidth", FormatDouble(c.cluster.bandwidth));
  put("cluster", "latency", FormatDouble(c.cluster.latency));
  put("cluster", "value_bytes", std::to_string(c.cluster.value_bytes));
  return t;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void RunConfig::Validate() const {
  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  if (cluster.world_size != workers) throw ConfigError("cluster world size must equal run.workers");
  if (name.empty()) throw ConfigError("run.name must not be empty");
  compressor.Validate();
  trainer.Validate();
  cluster.Validate();
  CheckSchemeCompatibility(compressor, scheme);
  if (model.kind == ModelSpec::Kind::kLeastSquares && data.kind == DataSpec::Kind::kBlobs) {
    throw ConfigError("least_squares model needs least_squares or csv data");
  }
  if (model.kind == ModelSpec::Kind::kMlp && data.kind == DataSpec::Kind::kLeastSquares) {
    throw ConfigError("mlp model needs blobs or csv data");
  }
  if (data.kind == DataSpec::Kind::kCsv && data.path.empty()) {
    throw ConfigError("data.path is required for csv data");
  }
  if (data.kind != DataSpec::Kind::kCsv) {
    if (data.n < workers) throw ConfigError("data.n must be >= run.workers");
    if (data.p < 1) throw ConfigError("data.p must be >= 1");
  }
  if (data.kind == DataSpec::Kind::kBlobs && data.classes < 2) {
    throw ConfigError("data.classes must be >= 2");
  }
}

TrainerOptions RunConfig::trainer_options() const {
  TrainerOptions o;
  o.trainer = trainer;
  o.compressor = compressor;
  o.cluster = cluster;
  o.scheme = scheme;
  o.partition = data.partition;
  o.data_seed = data.seed;
  o.init_seed = model.seed;
  return o;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  return FromTree(ParseTree(text, origin), origin);
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(ReadFile(path), path.string());
}

std::string config_to_string(const RunConfig& cfg) {
  std::ostringstream out;
  pt::ini_parser::write_ini(out, ToTree(cfg));
  return out.str();
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << config_to_string(cfg);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<GridEntry> expand_grid(const std::string& text, const std::string& origin) {
  const pt::ptree tree = ParseTree(text, origin);
  const auto grid = tree.get_child_optional("grid");
  if (!grid || grid->empty()) throw ConfigError(origin + ": grid file needs a non-empty [grid]");

  struct Axis {
    std::string section, key;
    std::vector<std::string> values;
  };
  std::vector<Axis> axes;
  for (const auto& [dotted, node] : *grid) {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) {
      throw ConfigError(origin + ": grid key '" + dotted + "' must look like section.key");
    }
    Axis a{dotted.substr(0, dot), dotted.substr(dot + 1), Split(StripComment(node.data()), ',')};
    const auto known = KnownKeys().find(a.section);
    if (known == KnownKeys().end() || !known->second.count(a.key)) {
      throw ConfigError(origin + ": grid key '" + dotted + "' is not a config key");
    }
    axes.push_back(std::move(a));
  }

  pt::ptree base = tree;
  base.erase("grid");
  base.erase("sweep");
  const std::string base_dir = base.get<std::string>(pt::ptree::path_type("run/output_dir", '/'),
                                                     "runs");
  const std::string base_name = base.get<std::string>(pt::ptree::path_type("run/name", '/'),
                                                      "run");

  std::vector<GridEntry> out;
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    pt::ptree point = base;
    std::string name = base_name;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const auto& v = axes[i].values[pos[i]];
      point.put(pt::ptree::path_type(axes[i].section + "/" + axes[i].key, '/'), v);
      name += "_" + axes[i].key + "-" + v;
    }
    point.put(pt::ptree::path_type("run/name", '/'), name);
    point.put(pt::ptree::path_type("run/output_dir", '/'),
              (std::filesystem::path(base_dir) / name).string());
    GridEntry entry;
    entry.name = name;
    try {
      entry.config = FromTree(point, origin + " [" + name + "]");
      entry.valid = true;
    } catch (const ConfigError& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));

    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++pos[i] < axes[i].values.size()) break;
      pos[i] = 0;
      if (i == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

std::vector<GridEntry> load_grid(const std::filesystem::path& path) {
  return expand_grid(ReadFile(path), path.string());
}

}  // namespace sparsecomm
