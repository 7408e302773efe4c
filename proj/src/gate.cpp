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

#include "twin/gate.hpp"

#include <sstream>

namespace twin {

std::string_view gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::rx: return "rx";
    case GateKind::ry: return "ry";
    case GateKind::rz: return "rz";
    case GateKind::cz: return "cz";
    case GateKind::measure: return "measure";
    case GateKind::barrier: return "barrier";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  for (GateKind k : {GateKind::rx, GateKind::ry, GateKind::rz, GateKind::cz,
                     GateKind::measure, GateKind::barrier}) {
    if (gate_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_unitary_kind(GateKind kind) {
  return kind == GateKind::rx || kind == GateKind::ry ||
         kind == GateKind::rz || kind == GateKind::cz;
}

std::string describe(const Gate& gate) {
  std::ostringstream out;
  out << gate_kind_name(gate.kind);
  if (gate.kind == GateKind::rx || gate.kind == GateKind::ry ||
      gate.kind == GateKind::rz) {
    out << "(" << gate.angle << ")";
  }
  for (int q : gate.qubits) out << " q" << q;
  return out.str();
}

}  // namespace twin
