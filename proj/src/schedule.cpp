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

#include "twin/schedule.hpp"

#include <algorithm>
#include <numeric>

#include "twin/errors.hpp"

namespace twin {

namespace {

bool is_timed(GateKind kind) {
  return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::cz;
}

// Layer index per timed gate; -1 for others. Returns the layer count.
int assign_layers(const Circuit& circuit, LayerPolicy policy,
                  std::vector<int>& layer_of) {
  const auto& gates = circuit.gates();
  const int n = static_cast<int>(gates.size());
  layer_of.assign(n, -1);
  std::vector<int> level(circuit.num_qubits(), 0);
  std::vector<int> rank(n, -1);
  int depth = 0;

  auto visit = [&](int i) {
    const auto& g = gates[i];
    if (g.kind == GateKind::rz) return;
    int m = 0;
    for (int q : g.qubits) m = std::max(m, level[q]);
    if (g.kind == GateKind::barrier) {
      for (int q : g.qubits) level[q] = m;
      return;
    }
    rank[i] = m + 1;
    for (int q : g.qubits) level[q] = rank[i];
    depth = std::max(depth, rank[i]);
  };

  if (policy == LayerPolicy::alap) {
    // rank = longest chain of timed gates from here to the end.
    for (int i = n - 1; i >= 0; --i) visit(i);
    for (int i = 0; i < n; ++i) {
      if (rank[i] > 0) layer_of[i] = depth - rank[i];
    }
  } else {
    for (int i = 0; i < n; ++i) visit(i);
    for (int i = 0; i < n; ++i) {
      if (rank[i] > 0) layer_of[i] = rank[i] - 1;
    }
  }
  return depth;
}

}  // namespace

double ScheduledCircuit::makespan() const {
  double total = 0.0;
  for (const auto& layer : layers) total += layer.duration;
  return total;
}

std::vector<Gate> ScheduledCircuit::gate_sequence() const {
  std::vector<Gate> out;
  for (const auto& layer : layers) {
    for (const auto& op : layer.ops) {
      if (op.gate.kind != GateKind::measure) out.push_back(op.gate);
    }
  }
  return out;
}

ScheduledCircuit schedule_alap(const Circuit& circuit, const DeviceModel& device,
                               ScheduleOptions options) {
  const auto& gates = circuit.gates();
  const int n = static_cast<int>(gates.size());
  const int nq = circuit.num_qubits();

  std::vector<double> duration(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (is_timed(gates[i].kind)) duration[i] = device.duration(gates[i].kind);
  }
  if (!circuit.measured_qubits().empty()) device.duration(GateKind::measure);

  std::vector<int> layer_of;
  int depth = assign_layers(circuit, options.policy, layer_of);

  // Attach each rz to a neighbouring timed gate on its wire.
  enum class Placement { pre, post };
  std::vector<Placement> placement(n, Placement::post);
  bool has_rz = false;
  for (int i = 0; i < n; ++i) {
    if (gates[i].kind != GateKind::rz) continue;
    has_rz = true;
    const int q = gates[i].qubits[0];
    auto touches = [&](int j) {
      return is_timed(gates[j].kind) &&
             std::find(gates[j].qubits.begin(), gates[j].qubits.end(), q) !=
                 gates[j].qubits.end();
    };
    int target = -1;
    for (int j = i + 1; j < n && target < 0; ++j) {
      if (touches(j)) {
        target = j;
        placement[i] = Placement::pre;
      }
    }
    for (int j = i - 1; j >= 0 && target < 0; --j) {
      if (touches(j)) target = j;
    }
    if (target >= 0) {
      layer_of[i] = layer_of[target];
    } else {
      if (depth == 0) depth = 1;
      layer_of[i] = depth - 1;
    }
  }
  if (depth == 0 && has_rz) depth = 1;

  ScheduledCircuit out;
  out.num_qubits = nq;
  out.label = circuit.label();
  out.used_qubits = circuit.used_qubits();
  out.measured_qubits = circuit.measured_qubits();
  out.layers.resize(depth);

  std::vector<std::vector<int>> pre(depth), timed(depth), post(depth);
  for (int i = 0; i < n; ++i) {
    const int l = layer_of[i];
    if (l < 0) continue;
    if (is_timed(gates[i].kind)) {
      timed[l].push_back(i);
    } else if (placement[i] == Placement::pre) {
      pre[l].push_back(i);
    } else {
      post[l].push_back(i);
    }
  }

  double clock = 0.0;
  for (int l = 0; l < depth; ++l) {
    auto& layer = out.layers[l];
    layer.start = clock;
    layer.slots.assign(nq, QubitSlot{});
    for (int i : timed[l]) layer.duration = std::max(layer.duration, duration[i]);

    std::vector<double> gate_start(nq, clock);
    std::vector<double> gate_end(nq, clock);
    std::vector<bool> occupied(nq, false);
    for (int i : timed[l]) {
      const double slack = layer.duration - duration[i];
      const double offset =
          options.alignment == IntraLayerAlignment::end ? slack : 0.0;
      for (int q : gates[i].qubits) {
        auto& slot = layer.slots[q];
        if (occupied[q]) {
          throw SimulationError("internal: two timed gates on one qubit in a layer");
        }
        occupied[q] = true;
        slot.busy = duration[i];
        slot.idle_before = offset;
        slot.idle_after = slack - offset;
        gate_start[q] = clock + offset;
        gate_end[q] = clock + offset + duration[i];
      }
    }
    for (int q = 0; q < nq; ++q) {
      if (!occupied[q]) layer.slots[q].idle_after = layer.duration;
    }
    for (int i : pre[l]) {
      layer.ops.push_back({gates[i], i, gate_start[gates[i].qubits[0]], 0.0});
    }
    for (int i : timed[l]) {
      layer.ops.push_back({gates[i], i, gate_start[gates[i].qubits[0]], duration[i]});
    }
    for (int i : post[l]) {
      layer.ops.push_back({gates[i], i, gate_end[gates[i].qubits[0]], 0.0});
    }
    clock += layer.duration;
  }

  if (!circuit.measured_qubits().empty()) {
    Layer m;
    m.start = clock;
    m.duration = device.duration(GateKind::measure);
    m.measurement = true;
    m.slots.assign(nq, QubitSlot{0.0, 0.0, m.duration});
    for (int q : circuit.measured_qubits()) {
      m.slots[q] = QubitSlot{m.duration, 0.0, 0.0};
      m.ops.push_back({Gate{GateKind::measure, {q}, 0.0}, -1, clock, m.duration});
    }
    out.layers.push_back(std::move(m));
  }
  return out;
}

}  // namespace twin
