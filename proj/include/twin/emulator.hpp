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

#include <cstdint>
#include <optional>

#include "twin/circuit.hpp"
#include "twin/density.hpp"
#include "twin/distribution.hpp"
#include "twin/schedule.hpp"
#include "twin/transpile.hpp"

namespace twin {

struct RunOptions {
  /// Largest register the dense engine accepts.
  int max_qubits = 6;
  /// Check trace and Hermiticity after every instruction.
  bool check_steps = false;
};

/// Evolves |0...0> through the prologue and every layer of a noisy circuit.
/// Measurement instructions are skipped; readout is handled by
/// measured_distribution.
DensityMatrix run(const NoisyCircuit& noisy, const RunOptions& options = {});

/// Exact distribution over the measured qubits of a final state, with the
/// circuit's readout confusion applied.
ShotDistribution measured_distribution(const NoisyCircuit& noisy,
                                       const DensityMatrix& state);

/// Schedule (already done), transpile, run and measure without sampling.
ShotDistribution emulate_exact(const ScheduledCircuit& scheduled,
                               const DeviceModel& device, const NoiseParams& params,
                               const TranspileOptions& transpile = {},
                               const RunOptions& run_options = {});

struct EmulationOptions {
  ScheduleOptions schedule;
  TranspileOptions transpile;
  RunOptions run;
  std::optional<std::uint64_t> shots;  // sample when set
  std::uint64_t seed = 42;
};

struct EmulationResult {
  ScheduledCircuit scheduled;
  NoisyCircuit noisy;
  ShotDistribution exact;
  std::optional<ShotDistribution> sampled;
};

/// Full pipeline for one circuit.
EmulationResult emulate(const Circuit& circuit, const DeviceModel& device,
                        const NoiseParams& params,
                        const EmulationOptions& options = {});

}  // namespace twin
