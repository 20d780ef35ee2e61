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

// Python bindings for the core operations.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sparsecomm/bench.h"
#include "sparsecomm/comm_sim.h"
#include "sparsecomm/compressors.h"
#include "sparsecomm/config.h"
#include "sparsecomm/experiment.h"
#include "sparsecomm/report.h"
#include "sparsecomm/rng.h"

namespace py = pybind11;
namespace sc = sparsecomm;

namespace {

using Array = py::array_t<sc::Real, py::array::c_style | py::array::forcecast>;

std::span<const sc::Real> View(const Array& a) {
  if (a.ndim() != 1) throw sc::StructureError("expected a 1-D array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

Array ToArray(const std::vector<sc::Real>& v) {
  return Array(static_cast<py::ssize_t>(v.size()), v.data());
}

sc::SparsePayload Compress(const Array& v, const std::string& kind, double fraction,
                           std::uint64_t seed, std::uint64_t step) {
  const auto view = View(v);
  sc::RngStream rng(seed, 0, step);
  return sc::compress_vector(view, sc::ParseCompressorKind(kind), sc::k_for(view.size(), fraction),
                             rng);
}

py::dict EpochDict(const sc::EpochMetrics& m) {
  py::dict d;
  d["epoch"] = m.epoch;
  d["train_loss"] = m.train_loss;
  d["eval_metric"] = m.eval_metric;
  d["lr"] = m.lr;
  d["cumulative_bytes"] = m.cumulative_bytes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparsified SGD with error feedback on a simulated cluster";

  auto base = py::register_exception<sc::Error>(m, "Error");
  py::register_exception<sc::StructureError>(m, "StructureError", base.ptr());
  py::register_exception<sc::ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<sc::ProtocolViolation>(m, "ProtocolViolation", base.ptr());
  py::register_exception<sc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<sc::DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<sc::IoError>(m, "IoError", base.ptr());

  m.attr("real_bytes") = sizeof(sc::Real);

  py::class_<sc::SparsePayload>(m, "SparsePayload")
      .def(py::init([](std::size_t dim, std::vector<sc::Index> indices,
                       std::vector<sc::Real> values) {
             sc::SparsePayload p{sc::PayloadScope::Global(), dim, std::move(indices),
                                 std::move(values)};
             p.Validate();
             return p;
           }),
           py::arg("dim"), py::arg("indices"), py::arg("values"))
      .def_readonly("dim", &sc::SparsePayload::dim)
      .def_property_readonly("indices", [](const sc::SparsePayload& p) { return p.indices; })
      .def_property_readonly("values", [](const sc::SparsePayload& p) { return ToArray(p.values); })
      .def("__len__", &sc::SparsePayload::size)
      .def("__eq__", [](const sc::SparsePayload& a, const sc::SparsePayload& b) { return a == b; })
      .def("__repr__", [](const sc::SparsePayload& p) {
        return "<SparsePayload dim=" + std::to_string(p.dim) +
               " entries=" + std::to_string(p.size()) + ">";
      });

  m.def("k_for", &sc::k_for, py::arg("dim"), py::arg("fraction"));
  m.def("compress", &Compress, py::arg("v"), py::arg("kind"), py::arg("fraction") = 0.01,
        py::arg("seed") = 0, py::arg("step") = 0,
        "Sparsify a vector with identity, topk, randomk or blockrandomk.");
  m.def("decompress", [](const sc::SparsePayload& p) { return ToArray(sc::decompress(p)); });
  m.def("gather", [](const Array& v, std::vector<sc::Index> idx) {
    return sc::gather(View(v), std::move(idx));
  });

  py::class_<sc::WorkerTraffic>(m, "WorkerTraffic")
      .def_readonly("messages_sent", &sc::WorkerTraffic::messages_sent)
      .def_readonly("entries_sent", &sc::WorkerTraffic::entries_sent)
      .def_readonly("bytes_sent", &sc::WorkerTraffic::bytes_sent);

  m.def(
      "all_reduce_sum",
      [](const std::vector<sc::SparsePayload>& payloads) {
        sc::ClusterConfig cfg;
        cfg.world_size = payloads.size();
        sc::TrafficMeter meter(payloads.size());
        auto out = sc::all_reduce_sum(payloads, cfg, meter);
        return py::make_tuple(out, meter.aggregate());
      },
      py::arg("payloads"), "Sum shared-index payloads; returns (payload, traffic).");
  m.def(
      "all_gather",
      [](const std::vector<sc::SparsePayload>& payloads) {
        sc::ClusterConfig cfg;
        cfg.world_size = payloads.size();
        sc::TrafficMeter meter(payloads.size());
        auto out = sc::all_gather(payloads, cfg, meter);
        return py::make_tuple(out, meter.aggregate());
      },
      py::arg("payloads"), "Deliver every payload to every worker; returns (lists, traffic).");
  m.def(
      "aggregate_gathered",
      [](const std::vector<sc::SparsePayload>& gathered, std::size_t dim) {
        return ToArray(sc::aggregate_gathered(gathered, dim));
      },
      py::arg("gathered"), py::arg("dim"));

  py::class_<sc::RunConfig>(m, "RunConfig")
      .def_readwrite("name", &sc::RunConfig::name)
      .def_readwrite("output_dir", &sc::RunConfig::output_dir)
      .def_readonly("workers", &sc::RunConfig::workers)
      .def("__str__", &sc::config_to_string)
      .def("__eq__", [](const sc::RunConfig& a, const sc::RunConfig& b) { return a == b; });
  m.def("parse_config", &sc::parse_config, py::arg("text"), py::arg("origin") = "<string>");
  m.def("load_config", &sc::load_config, py::arg("path"));

  m.def(
      "train",
      [](const sc::RunConfig& cfg) {
        sc::TrainResult r;
        {
          py::gil_scoped_release release;
          r = sc::train(cfg);
        }
        py::list epochs;
        for (const auto& e : r.epochs) epochs.append(EpochDict(e));
        py::dict out;
        out["eval_metric_name"] = r.eval_metric_name;
        out["epochs"] = epochs;
        out["params"] = ToArray(
            std::vector<sc::Real>(r.final_params.values().begin(), r.final_params.values().end()));
        return out;
      },
      py::arg("config"), "Train in memory and return per-epoch metrics.");
  m.def(
      "run",
      [](const sc::RunConfig& cfg) {
        py::gil_scoped_release release;
        return sc::run(cfg);
      },
      py::arg("config"), "Train and write config.ini, epochs.csv and steps.csv.");
  m.def(
      "report", [](const std::filesystem::path& dir) { return sc::render_report(sc::load_runs(dir)); },
      py::arg("dir"));

  m.def(
      "bench",
      [](std::size_t dim, double fraction, std::size_t reps) {
        sc::BenchOptions o;
        o.dim = dim;
        o.fraction = fraction;
        o.repetitions = reps;
        std::vector<sc::BenchRow> rows;
        {
          py::gil_scoped_release release;
          rows = sc::bench_codecs(o);
        }
        py::dict out;
        for (const auto& r : rows) out[py::str(std::string(sc::ToString(r.kind)))] = r.mean;
        return out;
      },
      py::arg("dim"), py::arg("fraction") = 0.01, py::arg("reps") = 20,
      "Mean compress + decompress seconds per scheme.");
}
