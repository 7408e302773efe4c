// Copyright 2026 The transmon-twin Authors
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

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "twin/benchmarks.hpp"
#include "twin/channels.hpp"
#include "twin/cli.hpp"
#include "twin/config.hpp"
#include "twin/emulator.hpp"
#include "twin/errors.hpp"

namespace py = pybind11;
using namespace twin;

namespace {

std::map<std::string, double> as_dict(const ShotDistribution& d) {
  std::map<std::string, double> out;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d.is_exact()) {
      if (d.probability(x) > 0.0) out[d.bitstring(x)] = d.probability(x);
    } else if (d.counts()[x] > 0) {
      out[d.bitstring(x)] = static_cast<double>(d.counts()[x]);
    }
  }
  return out;
}

ShotDistribution from_dict(const std::map<std::string, double>& values) {
  if (values.empty()) throw ValidationError("empty distribution");
  const int width = static_cast<int>(values.begin()->first.size());
  std::vector<double> p(std::size_t{1} << width, 0.0);
  double total = 0.0;
  for (const auto& [bits, v] : values) {
    if (static_cast<int>(bits.size()) != width) throw ValidationError("mixed bitstring widths");
    std::size_t x = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ValidationError("bad bitstring '" + bits + "'");
      x = (x << 1) | static_cast<std::size_t>(c == '1');
    }
    if (v < 0.0) throw ValidationError("negative weight");
    p[x] += v;
    total += v;
  }
  if (!(total > 0.0)) throw ValidationError("distribution has zero mass");
  for (double& v : p) v /= total;
  return ShotDistribution::exact(width, std::move(p));
}

}  // namespace

PYBIND11_MODULE(_twin, m) {
  m.doc() = "Noise emulation of a small transmon device";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

  py::class_<DeviceModel>(m, "DeviceModel")
      .def_property_readonly("name", &DeviceModel::name)
      .def_property_readonly("num_qubits", &DeviceModel::num_qubits)
      .def_property_readonly("active_qubits", &DeviceModel::active_qubits)
      .def_property_readonly("edges", &DeviceModel::edges)
      .def("neighbors", &DeviceModel::neighbors)
      .def("beta", [](const DeviceModel& d, int u, int v) { return beta(d, make_edge(u, v)); },
           "Always-on ZZ rate of a coupling edge in rad/s")
      .def("hash", [](const DeviceModel& d) { return device_hash(d); })
      .def("to_toml", [](const DeviceModel& d) { return to_toml(d); });
  m.def("load_device", &load_device, py::arg("path"));
  m.def("parse_device", [](const std::string& text) { return parse_device(text); });

  py::class_<Circuit>(m, "Circuit")
      .def(py::init<int, std::string>(), py::arg("num_qubits"), py::arg("label") = "")
      .def_property("label", &Circuit::label, &Circuit::set_label)
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def_property_readonly("measured_qubits", &Circuit::measured_qubits)
      .def("rx", &Circuit::rx, py::return_value_policy::reference_internal)
      .def("ry", &Circuit::ry, py::return_value_policy::reference_internal)
      .def("rz", &Circuit::rz, py::return_value_policy::reference_internal)
      .def("cz", &Circuit::cz, py::return_value_policy::reference_internal)
      .def("barrier", &Circuit::barrier, py::arg("qubits") = std::vector<int>{},
           py::return_value_policy::reference_internal)
      .def("measure", &Circuit::measure, py::return_value_policy::reference_internal)
      .def("__len__", [](const Circuit& c) { return c.gates().size(); })
      .def("to_text", [](const Circuit& c) { return to_text(c); });
  m.def("parse_circuit", [](const std::string& text) { return parse_circuit(text); });
  m.def("load_circuit", &load_circuit, py::arg("path"));

  py::class_<NoiseParams>(m, "NoiseParams")
      .def_static("from_device", &NoiseParams::from_device)
      .def_property(
          "j_khz", [](const NoiseParams& p) { return p.shared_j / 1e3; },
          [](NoiseParams& p, double v) { p.shared_j = v * 1e3; })
      .def_property(
          "coupling_mode",
          [](const NoiseParams& p) { return std::string(coupling_mode_name(p.coupling_mode)); },
          [](NoiseParams& p, const std::string& v) { p.coupling_mode = coupling_mode_from_name(v); })
      .def("set_cz_fidelity",
           [](NoiseParams& p, int u, int v, double f) { p.cz_fidelity[make_edge(u, v)] = f; })
      .def("set_pair_j_khz",
           [](NoiseParams& p, int u, int v, double j) { p.pair_j[make_edge(u, v)] = j * 1e3; })
      .def_property(
          "toggles", [](const NoiseParams& p) { return to_string(p.toggles); },
          [](NoiseParams& p, const std::string& t) { p.toggles = parse_toggles(t); })
      .def("to_toml", [](const NoiseParams& p) { return params_to_toml(p); });
  m.def("load_params", &load_params, py::arg("path"), py::arg("device"));

  m.def(
      "emulate",
      [](const Circuit& c, const DeviceModel& d, std::optional<NoiseParams> params,
         std::optional<std::uint64_t> shots, std::uint64_t seed) {
        EmulationOptions opts;
        opts.shots = shots;
        opts.seed = seed;
        const auto r = emulate(c, d, params ? *params : NoiseParams::from_device(d), opts);
        py::dict out;
        out["exact"] = as_dict(r.exact);
        if (r.sampled) out["counts"] = as_dict(*r.sampled);
        out["schedule"] = to_text(r.noisy);
        return out;
      },
      py::arg("circuit"), py::arg("device"), py::arg("params") = py::none(),
      py::arg("shots") = py::none(), py::arg("seed") = 42,
      "Schedule, transpile and simulate a circuit. Returns exact probabilities, "
      "optional sampled counts and the annotated noisy schedule.");

  m.def(
      "benchmark_suite",
      [](const DeviceModel& d) {
        py::list out;
        for (const auto& s : benchmark_suite(d)) {
          py::dict item;
          item["label"] = s.label;
          item["family"] = std::string(benchmark_family_name(s.family));
          item["qubits"] = s.qubits;
          item["trainable"] = s.trainable;
          item["circuit"] = benchmark_circuit(s, d);
          item["ideal"] = as_dict(ideal_distribution(s));
          out.append(item);
        }
        return out;
      },
      py::arg("device"));

  m.def(
      "tvd",
      [](const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
        return tvd(from_dict(p), from_dict(q));
      },
      "Total variation distance between two bitstring -> weight maps (normalised).");

  m.def("gamp", [](double g, double p) { return gamp(g, p).kraus(); });
  m.def("deph", [](double d) { return deph(d).kraus(); });
  m.def("deph2", [](double d) { return deph2(d).kraus(); });
  m.def("decay_channel", [](double t1, double t2, double p, double dt) {
    return decay_channel(t1, t2, p, dt).kraus();
  });
  m.def("delta1_from_fidelity", &delta1_from_fidelity);
  m.def("delta2_from_fidelity", &delta2_from_fidelity);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
