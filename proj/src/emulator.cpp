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

#include "twin/emulator.hpp"

#include <array>

#include "twin/errors.hpp"

namespace twin {

DensityMatrix run(const NoisyCircuit& noisy, const RunOptions& options) {
  const int n = static_cast<int>(noisy.register_qubits.size());
  if (n > options.max_qubits) {
    throw SimulationError("circuit '" + noisy.label + "' needs " + std::to_string(n) +
                          " simulated qubits, above the cap of " +
                          std::to_string(options.max_qubits));
  }
  DensityMatrix state(n);
  std::vector<int> pos;

  auto step = [&](const NoisyInstruction& ins) {
    pos.clear();
    for (int q : ins.qubits) pos.push_back(noisy.position_of(q));
    switch (ins.rule) {
      case NoiseRule::measure:
        return;
      case NoiseRule::gate:
        if (ins.gate->kind == GateKind::barrier) return;
        state.apply_unitary(gate_unitary(*ins.gate), pos);
        break;
      case NoiseRule::crosstalk: {
        const Complex m = std::polar(1.0, -ins.phase);
        const Complex p = std::polar(1.0, ins.phase);
        state.apply_diagonal(std::array<Complex, 4>{m, p, p, m}, pos);
        break;
      }
      default:
        state.apply_channel(*ins.channel, pos);
        break;
    }
    if (options.check_steps) {
      try {
        state.check_valid(1e-9, 1e-9, -1.0);
      } catch (const SimulationError& err) {
        throw SimulationError("circuit '" + noisy.label + "' after " + ins.label() +
                              ": " + err.what());
      }
    }
  };

  for (const auto& ins : noisy.prologue) step(ins);
  for (const auto& layer : noisy.layers) {
    for (const auto& ins : layer.instructions) step(ins);
  }
  return state;
}

ShotDistribution measured_distribution(const NoisyCircuit& noisy,
                                       const DensityMatrix& state) {
  if (noisy.measured_qubits.empty()) {
    throw ValidationError("circuit '" + noisy.label + "' measures no qubits");
  }
  std::vector<int> pos;
  for (int q : noisy.measured_qubits) pos.push_back(noisy.position_of(q));
  ShotDistribution dist = probabilities(state, pos);
  if (!noisy.readout.empty()) dist = apply_confusion(dist, noisy.readout);
  dist.circuit_id = noisy.label;
  return dist;
}

ShotDistribution emulate_exact(const ScheduledCircuit& scheduled,
                               const DeviceModel& device, const NoiseParams& params,
                               const TranspileOptions& transpile,
                               const RunOptions& run_options) {
  const NoisyCircuit noisy = transpile_noise(scheduled, device, params, transpile);
  return measured_distribution(noisy, run(noisy, run_options));
}

EmulationResult emulate(const Circuit& circuit, const DeviceModel& device,
                        const NoiseParams& params, const EmulationOptions& options) {
  EmulationResult r;
  r.scheduled = schedule_alap(circuit, device, options.schedule);
  r.noisy = transpile_noise(r.scheduled, device, params, options.transpile);
  r.exact = measured_distribution(r.noisy, run(r.noisy, options.run));
  if (options.shots) r.sampled = sample(r.exact, *options.shots, options.seed);
  return r;
}

}  // namespace twin
