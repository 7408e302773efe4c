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

#include <string>
#include <vector>

#include "twin/circuit.hpp"
#include "twin/device.hpp"

namespace twin {

/// Which layer a gate lands in. `asap` exists for tests only.
enum class LayerPolicy { alap, asap };

/// Where a gate shorter than its layer sits inside the layer.
/// `start` leaves a trailing idle gap, `end` a leading one.
enum class IntraLayerAlignment { start, end };

struct ScheduleOptions {
  LayerPolicy policy = LayerPolicy::alap;
  IntraLayerAlignment alignment = IntraLayerAlignment::start;
};

struct ScheduledOp {
  Gate gate;
  int source_index = -1;  // index into Circuit::gates(); -1 for measurement
  double start = 0.0;     // seconds from circuit start
  double duration = 0.0;
};

/// Timeline of one qubit inside one layer: busy + idle_before + idle_after
/// equals the layer duration.
struct QubitSlot {
  double busy = 0.0;
  double idle_before = 0.0;
  double idle_after = 0.0;

  double idle() const { return idle_before + idle_after; }
};

struct Layer {
  double start = 0.0;
  double duration = 0.0;
  bool measurement = false;
  std::vector<ScheduledOp> ops;  // execution order
  std::vector<QubitSlot> slots;  // indexed by qubit
};

struct ScheduledCircuit {
  int num_qubits = 0;
  std::string label;
  std::vector<int> used_qubits;
  std::vector<int> measured_qubits;
  std::vector<Layer> layers;

  double makespan() const;
  /// Unitary gates in execution order (measurements excluded).
  std::vector<Gate> gate_sequence() const;
};

/// Packs the circuit into layers holding at most one timed gate per qubit.
///
/// rx/ry/cz are timed; each lands in the latest layer its successors allow.
/// rz gates take no time and ride along with the next timed gate on their
/// qubit (or the previous one when none follows). Barriers are fences with
/// no duration. A final layer holds all measurements. Layer duration is the
/// longest gate in it.
ScheduledCircuit schedule_alap(const Circuit& circuit, const DeviceModel& device,
                               ScheduleOptions options = {});

}  // namespace twin
