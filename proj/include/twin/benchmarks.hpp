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
#include "twin/distribution.hpp"

namespace twin {

enum class BenchmarkFamily { ghz, w };

std::string_view benchmark_family_name(BenchmarkFamily family);

struct BenchmarkSpec {
  BenchmarkFamily family = BenchmarkFamily::ghz;
  std::vector<int> qubits;  // ascending device labels
  std::string label;
  bool trainable = false;
};

/// Qubit of `subset` coupled to every other member, preferring the one with
/// the most device neighbours. Throws ValidationError when none exists.
int center_qubit(const DeviceModel& device, const std::vector<int>& subset);

/// (|0..0> + |1..1>)/sqrt(2) on the subset using rx/ry/rz/cz only.
Circuit ghz_circuit(const BenchmarkSpec& spec, const DeviceModel& device);
/// Equal superposition of the single-excitation states of the subset.
Circuit w_circuit(const BenchmarkSpec& spec, const DeviceModel& device);
Circuit benchmark_circuit(const BenchmarkSpec& spec, const DeviceModel& device);

/// Eight circuits: GHZ and W on every 3-qubit subset made of the hub and two
/// of its first three active leaves (trainable), plus GHZ and W on all four
/// (test only).
std::vector<BenchmarkSpec> benchmark_suite(const DeviceModel& device);

/// Analytic target distribution over the spec's qubits.
ShotDistribution ideal_distribution(const BenchmarkSpec& spec);

}  // namespace twin
