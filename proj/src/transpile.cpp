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

#include "twin/transpile.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "twin/errors.hpp"

namespace twin {

namespace {

struct ToggleName {
  std::string_view name;
  bool NoiseToggles::*field;
};

constexpr ToggleName kToggleNames[] = {
    {"1q", &NoiseToggles::single_qubit_gate_error},
    {"2q", &NoiseToggles::two_qubit_gate_error},
    {"spam", &NoiseToggles::spam_error},
    {"passive", &NoiseToggles::passive_decay},
    {"crosstalk", &NoiseToggles::crosstalk},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string qubit_list(const std::vector<int>& qubits) {
  std::string out;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (i) out += ' ';
    out += 'q' + std::to_string(qubits[i]);
  }
  return out;
}

}  // namespace

bool NoiseToggles::any() const {
  return single_qubit_gate_error || two_qubit_gate_error || spam_error ||
         passive_decay || crosstalk;
}

NoiseToggles parse_toggles(std::string_view text) {
  NoiseToggles t;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const std::string item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) {
      if (comma == std::string_view::npos) break;
      continue;
    }
    if (item == "all") {
      t = NoiseToggles::all_on();
    } else if (item == "none") {
      t = NoiseToggles::all_off();
    } else {
      const bool off = item.starts_with("no_");
      const std::string_view name = off ? std::string_view(item).substr(3) : item;
      bool found = false;
      for (const auto& entry : kToggleNames) {
        if (entry.name == name) {
          t.*entry.field = !off;
          found = true;
        }
      }
      if (!found) throw ValidationError("unknown noise toggle '" + item + "'");
    }
    if (comma == std::string_view::npos) break;
  }
  return t;
}

std::string to_string(const NoiseToggles& toggles) {
  std::string out;
  for (const auto& entry : kToggleNames) {
    if (!out.empty()) out += ',';
    if (!(toggles.*entry.field)) out += "no_";
    out += entry.name;
  }
  return out;
}

std::string_view coupling_mode_name(CouplingMode mode) {
  return mode == CouplingMode::shared ? "shared" : "per_pair";
}

CouplingMode coupling_mode_from_name(std::string_view name) {
  if (name == "shared") return CouplingMode::shared;
  if (name == "per_pair") return CouplingMode::per_pair;
  throw ValidationError("unknown coupling mode '" + std::string(name) + "'");
}

NoiseParams NoiseParams::from_device(const DeviceModel& device) {
  NoiseParams p;
  double total = 0.0;
  for (const auto& c : device.couplings()) {
    p.pair_j[c.edge()] = c.coupling_j;
    total += c.coupling_j;
    if (c.cz_fidelity) p.cz_fidelity[c.edge()] = *c.cz_fidelity;
  }
  if (!device.couplings().empty()) {
    p.shared_j = total / static_cast<double>(device.couplings().size());
  }
  return p;
}

double NoiseParams::j_for(const DeviceModel& device, const Edge& edge) const {
  if (coupling_mode == CouplingMode::shared) return shared_j;
  if (auto it = pair_j.find(edge); it != pair_j.end()) return it->second;
  return device.coupling(edge).coupling_j;
}

double NoiseParams::cz_fidelity_for(const DeviceModel& device,
                                    const Edge& edge) const {
  if (auto it = cz_fidelity.find(edge); it != cz_fidelity.end()) return it->second;
  const auto& c = device.coupling(edge);
  if (!c.cz_fidelity) {
    throw ValidationError("no CZ fidelity for pair " + edge_key(edge));
  }
  return *c.cz_fidelity;
}

void NoiseParams::validate() const {
  if (!(shared_j >= 0.0) || !std::isfinite(shared_j)) {
    throw ValidationError("shared J must be finite and >= 0");
  }
  for (const auto& [e, j] : pair_j) {
    if (!(j >= 0.0) || !std::isfinite(j)) {
      throw ValidationError("J for pair " + edge_key(e) + " must be finite and >= 0");
    }
  }
  for (const auto& [e, f] : cz_fidelity) {
    if (!(f >= 0.4 && f <= 1.0)) {
      throw ValidationError("CZ fidelity for pair " + edge_key(e) +
                            " outside [0.4, 1]");
    }
  }
}

std::string_view noise_rule_name(NoiseRule rule) {
  switch (rule) {
    case NoiseRule::gate: return "gate";
    case NoiseRule::measure: return "measure";
    case NoiseRule::state_prep: return "state_prep";
    case NoiseRule::gate_error_1q: return "gate_error_1q";
    case NoiseRule::gate_error_2q: return "gate_error_2q";
    case NoiseRule::idle_decay: return "idle_decay";
    case NoiseRule::crosstalk: return "crosstalk";
  }
  return "?";
}

std::string NoisyInstruction::label() const {
  if (gate) return std::string(gate_kind_name(gate->kind)) +
                   (gate->kind == GateKind::rx || gate->kind == GateKind::ry ||
                            gate->kind == GateKind::rz
                        ? "(" + format_value(gate->angle) + ")"
                        : "");
  if (rule == NoiseRule::crosstalk) return "CT(" + format_duration(duration) + ")";
  return channel ? channel->label() : std::string(noise_rule_name(rule));
}

int NoisyCircuit::position_of(int qubit) const {
  auto it = std::lower_bound(register_qubits.begin(), register_qubits.end(), qubit);
  if (it == register_qubits.end() || *it != qubit) {
    throw ValidationError("qubit " + std::to_string(qubit) + " is not in the register");
  }
  return static_cast<int>(it - register_qubits.begin());
}

std::vector<std::vector<Gate>> NoisyCircuit::strip() const {
  std::vector<std::vector<Gate>> out;
  for (const auto& layer : layers) {
    auto& gates = out.emplace_back();
    for (const auto& ins : layer.instructions) {
      if (ins.rule == NoiseRule::gate || ins.rule == NoiseRule::measure) {
        gates.push_back(*ins.gate);
      }
    }
  }
  return out;
}

std::size_t NoisyCircuit::instruction_count() const {
  std::size_t n = prologue.size();
  for (const auto& layer : layers) n += layer.instructions.size();
  return n;
}

std::vector<Edge> crosstalk_edges(const DeviceModel& device,
                                  const std::vector<int>& qubits) {
  const std::set<int> members(qubits.begin(), qubits.end());
  std::vector<Edge> out;
  for (const auto& e : device.edges()) {
    if (members.count(e.first) || members.count(e.second)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NoisyCircuit transpile_noise(const ScheduledCircuit& scheduled,
                             const DeviceModel& device, const NoiseParams& params,
                             const TranspileOptions& options) {
  params.validate();
  const auto& toggles = params.toggles;

  std::vector<int> circuit_qubits = scheduled.used_qubits;
  for (int q : scheduled.measured_qubits) circuit_qubits.push_back(q);
  std::sort(circuit_qubits.begin(), circuit_qubits.end());
  circuit_qubits.erase(std::unique(circuit_qubits.begin(), circuit_qubits.end()),
                       circuit_qubits.end());
  for (int q : circuit_qubits) {
    if (q < 0 || q >= device.num_qubits()) {
      throw ValidationError("circuit qubit " + std::to_string(q) +
                            " does not exist on device '" + device.name() + "'");
    }
  }

  std::vector<Edge> ct_edges;
  if (toggles.crosstalk) ct_edges = crosstalk_edges(device, circuit_qubits);

  NoisyCircuit out;
  out.label = scheduled.label;
  out.measured_qubits = scheduled.measured_qubits;
  std::set<int> reg(circuit_qubits.begin(), circuit_qubits.end());
  if (options.include_neighbors) {
    for (const auto& e : ct_edges) {
      reg.insert(e.first);
      reg.insert(e.second);
    }
  }
  out.register_qubits.assign(reg.begin(), reg.end());

  std::map<Edge, double> ct_beta;
  for (const auto& e : ct_edges) {
    // Without neighbour expansion only edges inside the register are kept.
    if (!reg.count(e.first) || !reg.count(e.second)) continue;
    ct_beta[e] = beta(device, e, params.j_for(device, e));
  }

  if (toggles.spam_error) {
    for (int q : out.register_qubits) {
      NoisyInstruction ins;
      ins.rule = NoiseRule::state_prep;
      ins.qubits = {q};
      ins.channel = std::make_shared<QuantumChannel>(gamp(1.0, device.qubit(q).p_excited));
      out.prologue.push_back(std::move(ins));
    }
    for (int q : out.measured_qubits) out.readout.push_back(device.qubit(q).confusion);
  }

  std::map<Edge, std::shared_ptr<const QuantumChannel>> deph2_cache;
  std::map<int, std::shared_ptr<const QuantumChannel>> deph_cache;

  auto decay = [&](int q, double dt) {
    const auto& qc = device.qubit(q);
    NoisyInstruction ins;
    ins.rule = NoiseRule::idle_decay;
    ins.qubits = {q};
    ins.duration = dt;
    ins.channel = std::make_shared<QuantumChannel>(
        decay_channel(qc.t1, qc.t2, qc.p_excited, dt));
    return ins;
  };

  for (const auto& layer : scheduled.layers) {
    NoisyLayer nl;
    nl.start = layer.start;
    nl.duration = layer.duration;
    nl.measurement = layer.measurement;
    const bool decay_here =
        toggles.passive_decay && (!layer.measurement || options.decay_during_measurement);

    auto slot_of = [&](int q) -> QubitSlot {
      if (q < static_cast<int>(layer.slots.size())) return layer.slots[q];
      return QubitSlot{0.0, 0.0, layer.duration};
    };

    if (decay_here) {
      for (int q : out.register_qubits) {
        const QubitSlot s = slot_of(q);
        const double lead = s.busy > 0.0 ? s.idle_before : s.idle();
        if (lead > 0.0) nl.instructions.push_back(decay(q, lead));
      }
    }

    for (const auto& op : layer.ops) {
      NoisyInstruction g;
      g.rule = op.gate.kind == GateKind::measure ? NoiseRule::measure : NoiseRule::gate;
      g.qubits = op.gate.qubits;
      g.gate = op.gate;
      g.duration = op.duration;
      nl.instructions.push_back(g);

      const GateKind k = op.gate.kind;
      if ((k == GateKind::rx || k == GateKind::ry) && toggles.single_qubit_gate_error) {
        const int q = op.gate.qubits[0];
        auto& ch = deph_cache[q];
        if (!ch) {
          ch = std::make_shared<QuantumChannel>(
              deph(delta1_from_fidelity(device.qubit(q).single_qubit_fidelity)));
        }
        NoisyInstruction e;
        e.rule = NoiseRule::gate_error_1q;
        e.qubits = {q};
        e.channel = ch;
        nl.instructions.push_back(std::move(e));
      } else if (k == GateKind::cz) {
        const Edge edge = make_edge(op.gate.qubits[0], op.gate.qubits[1]);
        if (!device.has_edge(edge.first, edge.second)) {
          throw ValidationError("cz on " + qubit_list(op.gate.qubits) +
                                " is not a coupling edge of device '" +
                                device.name() + "'");
        }
        if (toggles.two_qubit_gate_error) {
          auto& ch = deph2_cache[edge];
          if (!ch) {
            ch = std::make_shared<QuantumChannel>(
                deph2(delta2_from_fidelity(params.cz_fidelity_for(device, edge))));
          }
          NoisyInstruction e;
          e.rule = NoiseRule::gate_error_2q;
          e.qubits = op.gate.qubits;
          e.channel = ch;
          nl.instructions.push_back(std::move(e));
        }
      }
    }

    if (decay_here) {
      for (int q : out.register_qubits) {
        const QubitSlot s = slot_of(q);
        if (s.busy > 0.0 && s.idle_after > 0.0) {
          nl.instructions.push_back(decay(q, s.idle_after));
        }
      }
    }

    for (const auto& [edge, b] : ct_beta) {
      const double d = std::max(slot_of(edge.first).busy, slot_of(edge.second).busy);
      NoisyInstruction ct;
      ct.rule = NoiseRule::crosstalk;
      ct.qubits = {edge.first, edge.second};
      ct.duration = d;
      ct.phase = b * d;
      nl.instructions.push_back(std::move(ct));
    }
    out.layers.push_back(std::move(nl));
  }
  return out;
}

std::string to_text(const NoisyCircuit& noisy) {
  std::ostringstream os;
  auto line = [&](const NoisyInstruction& ins) {
    std::string text = "  " + ins.label() + " " + qubit_list(ins.qubits);
    if (text.size() < 28) text.resize(28, ' ');
    os << text << " [" << noise_rule_name(ins.rule) << "]\n";
  };
  os << "circuit " << noisy.label << "\n";
  os << "register " << qubit_list(noisy.register_qubits) << "\n";
  os << "measured "
     << (noisy.measured_qubits.empty() ? "-" : qubit_list(noisy.measured_qubits))
     << "\n";
  os << "prologue\n";
  for (const auto& ins : noisy.prologue) line(ins);
  for (std::size_t i = 0; i < noisy.layers.size(); ++i) {
    const auto& l = noisy.layers[i];
    os << "layer " << i << " start=" << format_duration(l.start)
       << " duration=" << format_duration(l.duration)
       << (l.measurement ? " measurement" : "") << "\n";
    for (const auto& ins : l.instructions) line(ins);
  }
  if (!noisy.readout.empty()) {
    os << "readout\n";
    for (std::size_t i = 0; i < noisy.readout.size(); ++i) {
      const auto& m = noisy.readout[i];
      os << "  q" << noisy.measured_qubits[i] << " P(1|0)=" << format_value(m[1][0])
         << " P(0|1)=" << format_value(m[0][1]) << "\n";
    }
  }
  return os.str();
}

}  // namespace twin
