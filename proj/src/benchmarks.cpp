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

#include "twin/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twin/errors.hpp"

namespace twin {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spec(const BenchmarkSpec& spec, const DeviceModel& device) {
  if (spec.qubits.size() < 2) {
    throw ValidationError("benchmark '" + spec.label + "' needs at least 2 qubits");
  }
  for (std::size_t i = 0; i < spec.qubits.size(); ++i) {
    const int q = spec.qubits[i];
    if (q < 0 || q >= device.num_qubits() || !device.is_active(q)) {
      throw ValidationError("benchmark '" + spec.label + "': qubit " +
                            std::to_string(q) + " is not active");
    }
    if (i > 0 && spec.qubits[i - 1] >= q) {
      throw ValidationError("benchmark '" + spec.label +
                            "': qubits must be strictly ascending");
    }
  }
}

std::vector<int> leaves_of(const std::vector<int>& subset, int center) {
  std::vector<int> out;
  for (int q : subset) {
    if (q != center) out.push_back(q);
  }
  return out;
}

// CNOT control -> target written with cz and target basis changes.
void cnot(Circuit& c, int control, int target) {
  c.ry(target, -kPi / 2);
  c.cz(control, target);
  c.ry(target, kPi / 2);
}

std::string subset_tag(const std::vector<int>& qubits) {
  std::string s;
  for (int q : qubits) s += std::to_string(q);
  return s;
}

}  // namespace

std::string_view benchmark_family_name(BenchmarkFamily family) {
  return family == BenchmarkFamily::ghz ? "ghz" : "w";
}

int center_qubit(const DeviceModel& device, const std::vector<int>& subset) {
  int best = -1;
  std::size_t best_degree = 0;
  for (int c : subset) {
    bool adjacent_to_all = true;
    for (int q : subset) {
      if (q != c && !device.has_edge(c, q)) adjacent_to_all = false;
    }
    if (!adjacent_to_all) continue;
    const std::size_t degree = device.neighbors(c).size();
    if (best < 0 || degree > best_degree) {
      best = c;
      best_degree = degree;
    }
  }
  if (best < 0) {
    throw ValidationError("qubit subset " + subset_tag(subset) +
                          " has no member coupled to all others");
  }
  return best;
}

Circuit ghz_circuit(const BenchmarkSpec& spec, const DeviceModel& device) {
  check_spec(spec, device);
  const int center = center_qubit(device, spec.qubits);
  Circuit c(device.num_qubits(), spec.label);
  // Hadamard on |0> up to phase.
  c.rz(center, kPi);
  c.ry(center, kPi / 2);
  for (int leaf : leaves_of(spec.qubits, center)) cnot(c, center, leaf);
  c.measure(spec.qubits);
  return c;
}

Circuit w_circuit(const BenchmarkSpec& spec, const DeviceModel& device) {
  check_spec(spec, device);
  const int center = center_qubit(device, spec.qubits);
  const int n = static_cast<int>(spec.qubits.size());
  Circuit c(device.num_qubits(), spec.label);
  c.rx(center, kPi);
  const auto leaves = leaves_of(spec.qubits, center);
  for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
    const int leaf = leaves[i];
    // Move 1/(n-i) of the remaining excitation onto the leaf: controlled
    // Ry(2 theta) with sin^2(theta) = 1/(n-i), then clear the centre.
    const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n - i)));
    c.cz(center, leaf);
    c.ry(leaf, -theta);
    c.cz(center, leaf);
    c.ry(leaf, theta);
    cnot(c, leaf, center);
  }
  c.measure(spec.qubits);
  return c;
}

Circuit benchmark_circuit(const BenchmarkSpec& spec, const DeviceModel& device) {
  return spec.family == BenchmarkFamily::ghz ? ghz_circuit(spec, device)
                                             : w_circuit(spec, device);
}

std::vector<BenchmarkSpec> benchmark_suite(const DeviceModel& device) {
  const auto& active = device.active_qubits();
  if (active.size() < 4) {
    throw ValidationError("benchmark suite needs at least 4 active qubits");
  }
  int hub = -1;
  std::vector<int> hub_leaves;
  for (int q : active) {
    std::vector<int> leaves;
    for (int r : device.neighbors(q)) {
      if (device.is_active(r)) leaves.push_back(r);
    }
    if (leaves.size() > hub_leaves.size()) {
      hub = q;
      hub_leaves = leaves;
    }
  }
  if (hub_leaves.size() < 3) {
    throw ValidationError("benchmark suite needs an active qubit with 3 active neighbours");
  }
  std::sort(hub_leaves.begin(), hub_leaves.end());
  hub_leaves.resize(3);

  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  std::vector<std::vector<int>> subsets;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      subsets.push_back(sorted({hub, hub_leaves[a], hub_leaves[b]}));
    }
  }
  std::sort(subsets.begin(), subsets.end());
  subsets.push_back(sorted({hub, hub_leaves[0], hub_leaves[1], hub_leaves[2]}));

  std::vector<BenchmarkSpec> suite;
  for (const auto& s : subsets) {
    for (auto family : {BenchmarkFamily::ghz, BenchmarkFamily::w}) {
      suite.push_back({family, s,
                       std::string(benchmark_family_name(family)) + "_" + subset_tag(s),
                       s.size() == 3});
    }
  }
  return suite;
}

ShotDistribution ideal_distribution(const BenchmarkSpec& spec) {
  const int n = static_cast<int>(spec.qubits.size());
  std::vector<double> p(std::size_t{1} << n, 0.0);
  if (spec.family == BenchmarkFamily::ghz) {
    p.front() = 0.5;
    p.back() = 0.5;
  } else {
    for (int b = 0; b < n; ++b) p[std::size_t{1} << b] = 1.0 / n;
  }
  auto d = ShotDistribution::exact(n, std::move(p));
  d.circuit_id = spec.label;
  return d;
}

}  // namespace twin
