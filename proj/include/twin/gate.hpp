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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace twin {

enum class GateKind { rx, ry, rz, cz, measure, barrier };

std::string_view gate_kind_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// True for rx, ry, rz and cz.
bool is_unitary_kind(GateKind kind);

struct Gate {
  GateKind kind = GateKind::rx;
  std::vector<int> qubits;
  double angle = 0.0;  // radians; rotations only

  static Gate rx(int q, double theta) { return {GateKind::rx, {q}, theta}; }
  static Gate ry(int q, double theta) { return {GateKind::ry, {q}, theta}; }
  static Gate rz(int q, double theta) { return {GateKind::rz, {q}, theta}; }
  static Gate cz(int a, int b) { return {GateKind::cz, {a, b}, 0.0}; }
  static Gate barrier(std::vector<int> qs) {
    return {GateKind::barrier, std::move(qs), 0.0};
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Short human-readable form, e.g. "rx(1.5708) q1" or "cz q2 q3".
std::string describe(const Gate& gate);

}  // namespace twin
