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

#include "twin/device.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "toml_util.hpp"
#include "twin/errors.hpp"

namespace twin {

using detail::format_double;
using detail::parse_fail;
using detail::reject_unknown_keys;
using detail::require_number;

namespace {

constexpr double kGHz = 1e9;
constexpr double kMHz = 1e6;
constexpr double kKHz = 1e3;
constexpr double kNs = 1e-9;
constexpr double kStochasticTol = 1e-9;

std::string qubit_tag(int q) { return "qubit " + std::to_string(q); }

std::string pair_tag(int a, int b) {
  return "coupling " + std::to_string(a) + "_" + std::to_string(b);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void validate_qubit(const QubitCalibration& q) {
  const auto tag = qubit_tag(q.index);
  if (!(q.frequency > 0.0) || !std::isfinite(q.frequency)) {
    throw ValidationError(tag + ": frequency must be positive and finite");
  }
  if (!std::isfinite(q.anharmonicity)) {
    throw ValidationError(tag + ": anharmonicity must be finite");
  }
  if (!(q.t1 > 0.0)) throw ValidationError(tag + ": t1 must be positive");
  if (!(q.t2 > 0.0)) throw ValidationError(tag + ": t2 must be positive");
  if (q.t2 > 2.0 * q.t1) {
    throw ValidationError(tag + ": t2 exceeds 2·t1");
  }
  if (!is_probability(q.p_excited)) {
    throw ValidationError(tag + ": p_excited must lie in [0, 1]");
  }
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      if (!is_probability(q.confusion[k][l])) {
        throw ValidationError(tag + ": confusion entries must lie in [0, 1]");
      }
    }
  }
  for (int l = 0; l < 2; ++l) {
    const double col = q.confusion[0][l] + q.confusion[1][l];
    if (std::abs(col - 1.0) > kStochasticTol) {
      std::ostringstream msg;
      msg << tag << ": confusion column " << l << " sums to " << col
          << ", expected 1";
      throw ValidationError(msg.str());
    }
  }
  if (!(q.single_qubit_fidelity >= 2.0 / 3.0 &&
        q.single_qubit_fidelity <= 1.0)) {
    throw ValidationError(tag +
                          ": single_qubit_fidelity must lie in [2/3, 1]");
  }
}

}  // namespace

std::string edge_key(const Edge& edge) {
  return std::to_string(edge.first) + "_" + std::to_string(edge.second);
}

std::optional<Edge> parse_edge_key(std::string_view key) {
  const auto sep = key.find('_');
  if (sep == std::string_view::npos) return std::nullopt;
  int a = 0;
  int b = 0;
  const auto lhs = key.substr(0, sep);
  const auto rhs = key.substr(sep + 1);
  auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), a);
  auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), b);
  if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() ||
      r2.ec != std::errc{} || r2.ptr != rhs.data() + rhs.size()) {
    return std::nullopt;
  }
  return make_edge(a, b);
}

DeviceModel::DeviceModel(std::string name, std::vector<QubitCalibration> qubits,
                         std::vector<CouplingCalibration> couplings,
                         std::map<GateKind, double> durations,
                         std::vector<int> active_qubits)
    : name_(std::move(name)),
      qubits_(std::move(qubits)),
      couplings_(std::move(couplings)),
      durations_(std::move(durations)),
      active_(std::move(active_qubits)) {
  std::sort(qubits_.begin(), qubits_.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t i = 0; i < qubits_.size(); ++i) {
    if (qubits_[i].index != static_cast<int>(i)) {
      throw ValidationError("qubit indices must be contiguous from 0; found " +
                            qubit_tag(qubits_[i].index));
    }
    validate_qubit(qubits_[i]);
  }

  std::set<Edge> seen;
  for (auto& c : couplings_) {
    const auto tag = pair_tag(c.high, c.low);
    if (c.high == c.low) throw ValidationError(tag + ": self-loop");
    if (c.high < 0 || c.low < 0 || c.high >= num_qubits() ||
        c.low >= num_qubits()) {
      throw ValidationError(tag + ": endpoint is not a device qubit");
    }
    if (!seen.insert(c.edge()).second) {
      throw ValidationError(tag + ": duplicate edge");
    }
    const double fa = qubits_[c.high].frequency;
    const double fb = qubits_[c.low].frequency;
    if (fa == fb) {
      throw ValidationError(tag + ": endpoints have equal frequencies");
    }
    if (fa < fb) std::swap(c.high, c.low);
    if (!(c.coupling_j >= 0.0) || !std::isfinite(c.coupling_j)) {
      throw ValidationError(tag + ": coupling J must be finite and >= 0");
    }
    if (c.cz_fidelity && !(*c.cz_fidelity >= 0.4 && *c.cz_fidelity <= 1.0)) {
      throw ValidationError(tag + ": cz_fidelity must lie in [0.4, 1]");
    }
  }
  std::sort(couplings_.begin(), couplings_.end(),
            [](const auto& a, const auto& b) { return a.edge() < b.edge(); });

  for (const auto& [kind, seconds] : durations_) {
    if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
      throw ValidationError("duration of " +
                            std::string(gate_kind_name(kind)) +
                            " must be finite and >= 0");
    }
  }
  if (auto it = durations_.find(GateKind::rz);
      it != durations_.end() && it->second != 0.0) {
    throw ValidationError("rz is a virtual gate; its duration must be 0");
  }

  std::sort(active_.begin(), active_.end());
  if (std::adjacent_find(active_.begin(), active_.end()) != active_.end()) {
    throw ValidationError("active_qubits contains duplicates");
  }
  for (int q : active_) {
    if (q < 0 || q >= num_qubits()) {
      throw ValidationError("active qubit " + std::to_string(q) +
                            " is not a device qubit");
    }
  }
}

const QubitCalibration& DeviceModel::qubit(int index) const {
  if (index < 0 || index >= num_qubits()) {
    throw ValidationError("no such qubit: " + std::to_string(index));
  }
  return qubits_[index];
}

std::vector<Edge> DeviceModel::edges() const {
  std::vector<Edge> out;
  out.reserve(couplings_.size());
  for (const auto& c : couplings_) out.push_back(c.edge());
  return out;
}

bool DeviceModel::has_edge(int a, int b) const {
  const Edge e = make_edge(a, b);
  return std::any_of(couplings_.begin(), couplings_.end(),
                     [&](const auto& c) { return c.edge() == e; });
}

const CouplingCalibration& DeviceModel::coupling(const Edge& edge) const {
  const Edge e = make_edge(edge.first, edge.second);
  for (const auto& c : couplings_) {
    if (c.edge() == e) return c;
  }
  throw ValidationError("no coupling between qubits " +
                        std::to_string(e.first) + " and " +
                        std::to_string(e.second));
}

std::vector<int> DeviceModel::neighbors(int q) const {
  std::vector<int> out;
  for (const auto& c : couplings_) {
    if (c.high == q) out.push_back(c.low);
    if (c.low == q) out.push_back(c.high);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool DeviceModel::is_active(int q) const {
  return std::binary_search(active_.begin(), active_.end(), q);
}

double DeviceModel::duration(GateKind kind) const {
  if (auto it = durations_.find(kind); it != durations_.end()) {
    return it->second;
  }
  throw ValidationError("unknown gate duration for '" +
                        std::string(gate_kind_name(kind)) + "'");
}

double beta(double coupling_j, double detuning, double alpha_u,
            double alpha_v) {
  const double du = detuning - alpha_u;
  const double dv = detuning - alpha_v;
  const double scale = std::max({std::abs(detuning), std::abs(alpha_u),
                                 std::abs(alpha_v), 1.0});
  if (std::abs(du) <= 1e-12 * scale || std::abs(dv) <= 1e-12 * scale) {
    throw ValidationError("crosstalk pole: detuning equals anharmonicity");
  }
  if (coupling_j == 0.0 || alpha_u == alpha_v) return 0.0;
  return 2.0 * std::numbers::pi * coupling_j * coupling_j *
         (1.0 / du - 1.0 / dv);
}

double beta(const DeviceModel& device, const Edge& edge) {
  return beta(device, edge, device.coupling(edge).coupling_j);
}

double beta(const DeviceModel& device, const Edge& edge, double coupling_j) {
  const auto& c = device.coupling(edge);
  const auto& u = device.qubit(c.high);
  const auto& v = device.qubit(c.low);
  return beta(coupling_j, u.frequency - v.frequency, u.anharmonicity,
              v.anharmonicity);
}

// ---------------------------------------------------------------------------
// Calibration file I/O

namespace {

int parse_index(std::string_view key, std::string_view source) {
  int value = 0;
  auto res = std::from_chars(key.data(), key.data() + key.size(), value);
  if (res.ec != std::errc{} || res.ptr != key.data() + key.size() || value < 0) {
    parse_fail(source, "invalid qubit section name 'qubit." + std::string(key) + "'");
  }
  return value;
}

ConfusionMatrix parse_confusion(const toml::table& table,
                                std::string_view source,
                                const std::string& where) {
  const auto* arr = table.get_as<toml::array>("confusion");
  if (arr == nullptr || arr->size() != 2) {
    parse_fail(source, where + ": 'confusion' must be a 2x2 array");
  }
  ConfusionMatrix m{};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto* row = (*arr)[k].as_array();
    if (row == nullptr || row->size() != 2) {
      parse_fail(source, where + ": 'confusion' must be a 2x2 array");
    }
    for (std::size_t l = 0; l < 2; ++l) {
      auto v = (*row)[l].value<double>();
      if (!v) parse_fail(source, where + ": 'confusion' entries must be numbers");
      m[k][l] = *v;
    }
  }
  return m;
}

}  // namespace

DeviceModel parse_device(std::string_view toml_text, std::string_view source) {
  toml::table root = detail::parse_toml(toml_text, source);
  reject_unknown_keys(root, {"device", "durations", "qubit", "coupling"},
                      source, "top level");

  std::string name = "device";
  std::vector<int> active;
  bool have_active = false;
  if (const auto* dev = root.get_as<toml::table>("device")) {
    reject_unknown_keys(*dev, {"name", "active_qubits"}, source, "[device]");
    if (auto n = (*dev)["name"].value<std::string>()) name = *n;
    if (const auto* arr = dev->get_as<toml::array>("active_qubits")) {
      have_active = true;
      for (const auto& item : *arr) {
        auto v = item.value<int64_t>();
        if (!v) parse_fail(source, "[device]: active_qubits must be integers");
        active.push_back(static_cast<int>(*v));
      }
    }
  }

  const auto* qubit_tables = root.get_as<toml::table>("qubit");
  if (qubit_tables == nullptr || qubit_tables->empty()) {
    parse_fail(source, "no [qubit.N] sections");
  }
  std::vector<QubitCalibration> qubits;
  for (const auto& [key, node] : *qubit_tables) {
    const auto where = "[qubit." + std::string(key.str()) + "]";
    const auto* t = node.as_table();
    if (t == nullptr) parse_fail(source, where + " must be a table");
    reject_unknown_keys(*t,
                        {"frequency_ghz", "anharmonicity_mhz", "t1_ns", "t2_ns",
                         "p_excited", "confusion", "single_qubit_fidelity"},
                        source, where);
    QubitCalibration q;
    q.index = parse_index(key.str(), source);
    q.frequency = require_number(*t, "frequency_ghz", source, where) * kGHz;
    q.anharmonicity =
        require_number(*t, "anharmonicity_mhz", source, where) * kMHz;
    q.t1 = require_number(*t, "t1_ns", source, where) * kNs;
    q.t2 = require_number(*t, "t2_ns", source, where) * kNs;
    q.p_excited = require_number(*t, "p_excited", source, where);
    q.confusion = parse_confusion(*t, source, where);
    q.single_qubit_fidelity =
        require_number(*t, "single_qubit_fidelity", source, where);
    qubits.push_back(q);
  }

  std::vector<CouplingCalibration> couplings;
  if (const auto* coupling_tables = root.get_as<toml::table>("coupling")) {
    for (const auto& [key, node] : *coupling_tables) {
      const auto where = "[coupling." + std::string(key.str()) + "]";
      const auto* t = node.as_table();
      if (t == nullptr) parse_fail(source, where + " must be a table");
      reject_unknown_keys(*t, {"j_khz", "cz_fidelity"}, source, where);
      // Keys are parsed without normalising so that self-loops surface as
      // validation errors rather than being silently reordered.
      const auto k = key.str();
      const auto sep = k.find('_');
      if (sep == std::string_view::npos) {
        parse_fail(source, "invalid coupling section name " + where);
      }
      CouplingCalibration c;
      c.high = parse_index(k.substr(0, sep), source);
      c.low = parse_index(k.substr(sep + 1), source);
      c.coupling_j = require_number(*t, "j_khz", source, where) * kKHz;
      if (t->contains("cz_fidelity")) {
        c.cz_fidelity = require_number(*t, "cz_fidelity", source, where);
      }
      couplings.push_back(c);
    }
  }

  std::map<GateKind, double> durations;
  const auto* dur = root.get_as<toml::table>("durations");
  if (dur == nullptr) parse_fail(source, "missing [durations] section");
  for (const auto& [key, node] : *dur) {
    auto kind = gate_kind_from_name(key.str());
    if (!kind || *kind == GateKind::barrier) {
      parse_fail(source, "[durations]: unknown gate kind '" +
                             std::string(key.str()) + "'");
    }
    auto v = node.value<double>();
    if (!v) parse_fail(source, "[durations]: values must be numbers (ns)");
    durations[*kind] = *v * kNs;
  }
  for (GateKind k : {GateKind::rx, GateKind::ry, GateKind::rz, GateKind::cz,
                     GateKind::measure}) {
    if (!durations.count(k)) {
      parse_fail(source, "[durations]: missing '" +
                             std::string(gate_kind_name(k)) + "'");
    }
  }

  if (!have_active) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      active.push_back(static_cast<int>(i));
    }
  }
  return DeviceModel(std::move(name), std::move(qubits), std::move(couplings),
                     std::move(durations), std::move(active));
}

DeviceModel load_device(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open device file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_device(buf.str(), path.string());
}

std::string to_toml(const DeviceModel& device) {
  std::ostringstream out;
  out << "[device]\n";
  out << "name = \"" << device.name() << "\"\n";
  out << "active_qubits = [";
  for (std::size_t i = 0; i < device.active_qubits().size(); ++i) {
    out << (i ? ", " : "") << device.active_qubits()[i];
  }
  out << "]\n\n[durations]\n";
  for (const auto& [kind, seconds] : device.durations()) {
    out << gate_kind_name(kind) << " = " << format_double(seconds / kNs)
        << "\n";
  }
  for (const auto& q : device.qubits()) {
    out << "\n[qubit." << q.index << "]\n";
    out << "frequency_ghz = " << format_double(q.frequency / kGHz) << "\n";
    out << "anharmonicity_mhz = " << format_double(q.anharmonicity / kMHz)
        << "\n";
    out << "t1_ns = " << format_double(q.t1 / kNs) << "\n";
    out << "t2_ns = " << format_double(q.t2 / kNs) << "\n";
    out << "p_excited = " << format_double(q.p_excited) << "\n";
    out << "confusion = [[" << format_double(q.confusion[0][0]) << ", "
        << format_double(q.confusion[0][1]) << "], ["
        << format_double(q.confusion[1][0]) << ", "
        << format_double(q.confusion[1][1]) << "]]\n";
    out << "single_qubit_fidelity = " << format_double(q.single_qubit_fidelity)
        << "\n";
  }
  for (const auto& c : device.couplings()) {
    out << "\n[coupling." << edge_key(c.edge()) << "]\n";
    out << "j_khz = " << format_double(c.coupling_j / kKHz) << "\n";
    if (c.cz_fidelity) {
      out << "cz_fidelity = " << format_double(*c.cz_fidelity) << "\n";
    }
  }
  return out.str();
}

void save_device(const DeviceModel& device, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write device file: " + path.string());
  out << to_toml(device);
}

std::string device_hash(const DeviceModel& device) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_toml(device)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twin
