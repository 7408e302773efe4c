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

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twin/channels.hpp"
#include "twin/device.hpp"
#include "twin/schedule.hpp"

namespace twin {

/// Switches for the five error families of the model.
struct NoiseToggles {
  bool single_qubit_gate_error = true;
  bool two_qubit_gate_error = true;
  bool spam_error = true;  // state preparation and readout
  bool passive_decay = true;
  bool crosstalk = true;

  static NoiseToggles all_on() { return {}; }
  static NoiseToggles all_off() { return {false, false, false, false, false}; }
  bool any() const;

  friend bool operator==(const NoiseToggles&, const NoiseToggles&) = default;
};

/// Parses a comma-separated toggle list. Items are `all`, `none`, a toggle
/// name (`1q`, `2q`, `spam`, `passive`, `crosstalk`) to switch it on, or the
/// same name prefixed with `no_` to switch it off. Items apply left to right
/// starting from all-on.
NoiseToggles parse_toggles(std::string_view text);
std::string to_string(const NoiseToggles& toggles);

enum class CouplingMode { shared, per_pair };

std::string_view coupling_mode_name(CouplingMode mode);
CouplingMode coupling_mode_from_name(std::string_view name);

/// Free parameters of the noise model plus the toggles. J values in Hz.
struct NoiseParams {
  CouplingMode coupling_mode = CouplingMode::shared;
  double shared_j = 0.0;
  std::map<Edge, double> pair_j;
  std::map<Edge, double> cz_fidelity;
  NoiseToggles toggles;

  /// Calibration defaults: shared J is the mean of the device couplings.
  static NoiseParams from_device(const DeviceModel& device);

  /// Coupling used for an edge's crosstalk; per-pair mode falls back to the
  /// device value for edges without an entry.
  double j_for(const DeviceModel& device, const Edge& edge) const;
  /// CZ fidelity of an edge, falling back to the device calibration.
  /// Throws ValidationError when neither has one.
  double cz_fidelity_for(const DeviceModel& device, const Edge& edge) const;

  /// Throws ValidationError for negative J or fidelities outside [0.4, 1].
  void validate() const;

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// Why an instruction is in the noisy circuit.
enum class NoiseRule {
  gate,           // original circuit gate
  measure,        // original measurement
  state_prep,     // gamp(1, p) before the first layer
  gate_error_1q,  // deph after rx/ry
  gate_error_2q,  // deph2 after cz
  idle_decay,     // E_{T1,T2} over an idle span
  crosstalk,      // always-on ZZ at the end of a layer
};

std::string_view noise_rule_name(NoiseRule rule);

struct NoisyInstruction {
  NoiseRule rule = NoiseRule::gate;
  std::vector<int> qubits;  // device qubit labels
  std::optional<Gate> gate;                       // gate and measure rules
  std::shared_ptr<const QuantumChannel> channel;  // channel rules
  double duration = 0.0;  // idle span or crosstalk duration, seconds
  double phase = 0.0;     // crosstalk beta * duration, radians

  std::string label() const;
};

struct NoisyLayer {
  double start = 0.0;
  double duration = 0.0;
  bool measurement = false;
  std::vector<NoisyInstruction> instructions;
};

struct NoisyCircuit {
  std::string label;
  /// Simulated qubits in ascending label order; position i of the density
  /// matrix holds register[i].
  std::vector<int> register_qubits;
  std::vector<int> measured_qubits;
  std::vector<NoisyInstruction> prologue;
  std::vector<NoisyLayer> layers;
  /// One matrix per measured qubit when readout error is on, else empty.
  std::vector<ConfusionMatrix> readout;

  int position_of(int qubit) const;
  /// Original gates and measurements per layer with every inserted
  /// instruction removed.
  std::vector<std::vector<Gate>> strip() const;
  std::size_t instruction_count() const;
};

struct TranspileOptions {
  /// Idle decay on unmeasured register qubits during the measurement layer.
  bool decay_during_measurement = true;
  /// Add inactive neighbours to the register when crosstalk is on.
  bool include_neighbors = true;
};

/// Coupling edges with at least one endpoint in `qubits`, ordered by
/// (lower label, higher label).
std::vector<Edge> crosstalk_edges(const DeviceModel& device,
                                  const std::vector<int>& qubits);

/// Inserts state preparation, gate errors, idle decay, crosstalk and
/// readout metadata into a scheduled circuit.
///
/// Within each layer the order is: decay of fully idle qubits and leading
/// gaps, each gate followed by its error, trailing-gap decay, crosstalk.
NoisyCircuit transpile_noise(const ScheduledCircuit& scheduled,
                             const DeviceModel& device, const NoiseParams& params,
                             const TranspileOptions& options = {});

/// Annotated listing, one block per layer, each instruction tagged with its
/// rule.
std::string to_text(const NoisyCircuit& noisy);

}  // namespace twin
