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

#include "twin/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "twin/errors.hpp"

namespace twin {

Circuit::Circuit(int num_qubits, std::string label)
    : num_qubits_(num_qubits), label_(std::move(label)) {
  if (num_qubits < 0) throw ValidationError("num_qubits must be >= 0");
}

Circuit& Circuit::add(Gate gate) {
  const auto what = describe(gate);
  if (!measured_.empty()) {
    throw ValidationError("gate '" + what + "' appears after measurement");
  }
  for (int q : gate.qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw ValidationError("gate '" + what + "': qubit index out of range");
    }
  }
  switch (gate.kind) {
    case GateKind::rx:
    case GateKind::ry:
    case GateKind::rz:
      if (gate.qubits.size() != 1) {
        throw ValidationError("rotation '" + what + "' needs exactly one qubit");
      }
      if (!std::isfinite(gate.angle)) {
        throw ValidationError("rotation '" + what + "' has a non-finite angle");
      }
      break;
    case GateKind::cz:
      if (gate.qubits.size() != 2 || gate.qubits[0] == gate.qubits[1]) {
        throw ValidationError("cz needs two distinct qubits");
      }
      break;
    case GateKind::barrier: {
      auto qs = gate.qubits;
      std::sort(qs.begin(), qs.end());
      if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) {
        throw ValidationError("barrier lists a qubit twice");
      }
      break;
    }
    case GateKind::measure:
      throw ValidationError("use Circuit::measure for measurements");
  }
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::barrier(std::vector<int> qubits) {
  if (qubits.empty()) {
    for (int q = 0; q < num_qubits_; ++q) qubits.push_back(q);
  }
  return add(Gate::barrier(std::move(qubits)));
}

Circuit& Circuit::measure(const std::vector<int>& qubits) {
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits_) {
      throw ValidationError("measure: qubit index out of range");
    }
    if (std::find(measured_.begin(), measured_.end(), q) != measured_.end()) {
      throw ValidationError("qubit " + std::to_string(q) +
                            " is measured more than once");
    }
    measured_.push_back(q);
  }
  std::sort(measured_.begin(), measured_.end());
  return *this;
}

std::vector<int> Circuit::used_qubits() const {
  std::vector<int> out = measured_;
  for (const auto& g : gates_) {
    if (g.kind == GateKind::barrier) continue;
    out.insert(out.end(), g.qubits.begin(), g.qubits.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

[[noreturn]] void fail(std::string_view source, int line, const std::string& what) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// number | [-][k*]pi[/d]
std::optional<double> parse_angle(std::string_view s) {
  if (auto v = parse_number(s)) return v;
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    sign = s[0] == '-' ? -1.0 : 1.0;
    s.remove_prefix(1);
  }
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos) return std::nullopt;
  double factor = 1.0;
  if (pi_pos > 0) {
    if (s[pi_pos - 1] != '*') return std::nullopt;
    auto k = parse_number(s.substr(0, pi_pos - 1));
    if (!k) return std::nullopt;
    factor = *k;
  }
  auto rest = s.substr(pi_pos + 2);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') return std::nullopt;
    auto d = parse_number(rest.substr(1));
    if (!d || *d == 0.0) return std::nullopt;
    divisor = *d;
  }
  return sign * factor * std::numbers::pi / divisor;
}

std::optional<int> parse_qubit(std::string_view s) {
  if (s.size() < 2 || s[0] != 'q') return std::nullopt;
  int v = 0;
  auto res = std::from_chars(s.data() + 1, s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 0) {
    return std::nullopt;
  }
  return v;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

}  // namespace

Circuit parse_circuit(std::string_view text, std::string_view source) {
  std::vector<Line> lines;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      std::istringstream words(raw);
      Line line{number, {}};
      for (std::string w; words >> w;) line.tokens.push_back(w);
      if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
  }

  int declared = -1;
  int max_index = -1;
  std::string label;
  for (const auto& line : lines) {
    const auto& head = line.tokens[0];
    if (head == "qubits") {
      if (line.tokens.size() != 2) fail(source, line.number, "expected 'qubits N'");
      auto n = parse_number(line.tokens[1]);
      if (!n || *n < 0 || *n != std::floor(*n)) {
        fail(source, line.number, "invalid qubit count");
      }
      declared = static_cast<int>(*n);
    } else if (head == "label") {
      if (line.tokens.size() != 2) fail(source, line.number, "expected 'label NAME'");
      label = line.tokens[1];
    } else {
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        if (auto q = parse_qubit(line.tokens[i])) max_index = std::max(max_index, *q);
      }
    }
  }
  Circuit circuit(declared >= 0 ? declared : max_index + 1, label);

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const auto& head = t[0];
    if (head == "qubits" || head == "label") continue;
    auto qubit_at = [&](std::size_t i) {
      auto q = parse_qubit(t[i]);
      if (!q) fail(source, line.number, "expected qubit like 'q0', got '" + t[i] + "'");
      return *q;
    };
    try {
      if (head == "rx" || head == "ry" || head == "rz") {
        if (t.size() != 3) fail(source, line.number, "expected '" + head + " qN ANGLE'");
        auto angle = parse_angle(t[2]);
        if (!angle) fail(source, line.number, "invalid angle '" + t[2] + "'");
        const auto kind = *gate_kind_from_name(head);
        circuit.add(Gate{kind, {qubit_at(1)}, *angle});
      } else if (head == "cz") {
        if (t.size() != 3) fail(source, line.number, "expected 'cz qA qB'");
        circuit.cz(qubit_at(1), qubit_at(2));
      } else if (head == "barrier") {
        std::vector<int> qs;
        for (std::size_t i = 1; i < t.size(); ++i) qs.push_back(qubit_at(i));
        circuit.barrier(std::move(qs));
      } else if (head == "measure") {
        if (t.size() < 2) fail(source, line.number, "measure needs at least one qubit");
        std::vector<int> qs;
        for (std::size_t i = 1; i < t.size(); ++i) qs.push_back(qubit_at(i));
        circuit.measure(qs);
      } else {
        fail(source, line.number, "unknown instruction '" + head + "'");
      }
    } catch (const ValidationError& err) {
      fail(source, line.number, err.what());
    }
  }
  return circuit;
}

Circuit load_circuit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open circuit file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto circuit = parse_circuit(buf.str(), path.string());
  if (circuit.label().empty()) circuit.set_label(path.stem().string());
  return circuit;
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream out;
  out.precision(17);
  out << "qubits " << circuit.num_qubits() << "\n";
  if (!circuit.label().empty()) out << "label " << circuit.label() << "\n";
  for (const auto& g : circuit.gates()) {
    out << gate_kind_name(g.kind);
    for (int q : g.qubits) out << " q" << q;
    if (g.kind == GateKind::rx || g.kind == GateKind::ry || g.kind == GateKind::rz) {
      out << " " << g.angle;
    }
    out << "\n";
  }
  if (!circuit.measured_qubits().empty()) {
    out << "measure";
    for (int q : circuit.measured_qubits()) out << " q" << q;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// DAG

Dag build_dag(const Circuit& circuit) {
  const auto& gates = circuit.gates();
  Dag dag;
  dag.successors.resize(gates.size());
  dag.predecessors.resize(gates.size());
  std::vector<int> last(circuit.num_qubits(), -1);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    for (int q : gates[i].qubits) {
      const int prev = last[q];
      if (prev >= 0) {
        auto& succ = dag.successors[prev];
        if (std::find(succ.begin(), succ.end(), static_cast<int>(i)) == succ.end()) {
          succ.push_back(static_cast<int>(i));
          dag.predecessors[i].push_back(prev);
        }
      }
      last[q] = static_cast<int>(i);
    }
  }
  return dag;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indegree(size());
  for (std::size_t i = 0; i < size(); ++i) {
    indegree[i] = static_cast<int>(predecessors[i].size());
  }
  std::vector<int> ready;
  for (std::size_t i = size(); i-- > 0;) {
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  }
  std::vector<int> order;
  // Smallest index first keeps each wire in input order.
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    const int n = *it;
    ready.erase(it);
    order.push_back(n);
    for (int s : successors[n]) {
      if (--indegree[s] == 0) ready.push_back(s);
    }
  }
  return order;
}

int Dag::longest_path() const {
  std::vector<int> depth(size(), 1);
  int best = 0;
  for (int n : topological_order()) {
    for (int p : predecessors[n]) depth[n] = std::max(depth[n], depth[p] + 1);
    best = std::max(best, depth[n]);
  }
  return best;
}

}  // namespace twin
