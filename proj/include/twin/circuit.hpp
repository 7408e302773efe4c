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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "twin/gate.hpp"

namespace twin {

/// Gate list over physical qubit indices plus a terminal measurement.
///
/// Gates are rx, ry, rz, cz and barrier; measurement is not a gate here but
/// the sorted `measured_qubits` set, always executed after every gate.
class Circuit {
 public:
  explicit Circuit(int num_qubits, std::string label = {});

  int num_qubits() const { return num_qubits_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<int>& measured_qubits() const { return measured_; }

  /// Throws ValidationError on bad indices, non-finite angles, repeated cz
  /// endpoints, or any gate appended after measurement.
  Circuit& add(Gate gate);
  Circuit& rx(int q, double theta) { return add(Gate::rx(q, theta)); }
  Circuit& ry(int q, double theta) { return add(Gate::ry(q, theta)); }
  Circuit& rz(int q, double theta) { return add(Gate::rz(q, theta)); }
  Circuit& cz(int a, int b) { return add(Gate::cz(a, b)); }
  Circuit& barrier(std::vector<int> qubits = {});
  Circuit& measure(const std::vector<int>& qubits);

  /// Qubits touched by a gate or measured, ascending.
  std::vector<int> used_qubits() const;

 private:
  int num_qubits_;
  std::string label_;
  std::vector<Gate> gates_;
  std::vector<int> measured_;
};

/// Parses the line-oriented circuit text format (see docs/formats.md).
Circuit parse_circuit(std::string_view text, std::string_view source = "<string>");
Circuit load_circuit(const std::filesystem::path& path);
std::string to_text(const Circuit& circuit);

/// Gate dependency graph. Node i is circuit.gates()[i]; an edge joins
/// consecutive gates that share a qubit (barriers included).
struct Dag {
  std::vector<std::vector<int>> successors;
  std::vector<std::vector<int>> predecessors;

  std::size_t size() const { return successors.size(); }
  /// Number of nodes on the longest path.
  int longest_path() const;
  std::vector<int> topological_order() const;
};

Dag build_dag(const Circuit& circuit);

}  // namespace twin
