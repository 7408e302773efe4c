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

#include <algorithm>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "twin/circuit.hpp"
#include "twin/errors.hpp"

using namespace twin;

namespace {

// Longest chain by exhaustive search over all increasing index sequences
// linked by predecessor relations.
int brute_longest(const Dag& dag) {
  const int n = static_cast<int>(dag.size());
  int best = 0;
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> nodes;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) nodes.push_back(i);
    bool chain = true;
    for (std::size_t k = 1; k < nodes.size() && chain; ++k) {
      const auto& pred = dag.predecessors[nodes[k]];
      chain = std::find(pred.begin(), pred.end(), nodes[k - 1]) != pred.end();
    }
    if (chain) best = std::max(best, static_cast<int>(nodes.size()));
  }
  return best;
}

}  // namespace

TEST_CASE("builder validates gates") {
  Circuit c(3, "demo");
  c.rx(0, 0.5).cz(0, 1).rz(2, 1.0);
  CHECK(c.gates().size() == 3);
  CHECK_THROWS_AS(c.rx(3, 0.1), ValidationError);
  CHECK_THROWS_AS(c.cz(1, 1), ValidationError);
  CHECK_THROWS_AS(c.ry(0, std::nan("")), ValidationError);
  c.measure({2, 0});
  CHECK(c.measured_qubits() == std::vector<int>{0, 2});
  CHECK_THROWS_AS(c.rx(0, 0.1), ValidationError);
  CHECK(c.used_qubits() == std::vector<int>{0, 1, 2});
}

TEST_CASE("text format round-trips") {
  Circuit c(5, "ghz_012");
  c.rz(2, std::numbers::pi).ry(2, std::numbers::pi / 2).barrier({0, 2}).cz(2, 0);
  c.measure({0, 2});
  const auto text = to_text(c);
  const auto back = parse_circuit(text);
  CHECK(back.label() == "ghz_012");
  CHECK(back.num_qubits() == 5);
  CHECK(back.gates() == c.gates());
  CHECK(back.measured_qubits() == c.measured_qubits());
  CHECK(to_text(back) == text);
}

TEST_CASE("text format errors carry line numbers") {
  CHECK_THROWS_AS(parse_circuit("qubits 2\nfoo q0\n"), ParseError);
  CHECK_THROWS_WITH(parse_circuit("qubits 2\nrx q0 0.1\nrx q1 abc\n", "c.txt"),
                    Catch::Matchers::ContainsSubstring("c.txt:3"));
  CHECK_THROWS_WITH(parse_circuit("qubits 2\n\nrx q5 0.1\n", "c.txt"),
                    Catch::Matchers::ContainsSubstring("c.txt:3"));
  CHECK_THROWS_AS(parse_circuit("qubits 2\nmeasure q0\nrx q0 1\n"), ParseError);
}

TEST_CASE("angles accept multiples of pi") {
  const auto c = parse_circuit("rx q0 pi/2\nry q0 -2*pi/3\nrz q1 0.25\n");
  CHECK(c.num_qubits() == 2);
  CHECK(c.gates()[0].angle == Catch::Approx(std::numbers::pi / 2));
  CHECK(c.gates()[1].angle == Catch::Approx(-2 * std::numbers::pi / 3));
  CHECK(c.gates()[2].angle == 0.25);
}

TEST_CASE("dag of a small example") {
  // q0: rx, cz(0,1), ry ; q1: cz(0,1), rx ; q2: rz
  Circuit c(3);
  c.rx(0, 1).cz(0, 1).ry(0, 1).rx(1, 1).rz(2, 1);
  const auto dag = build_dag(c);
  CHECK(dag.successors[0] == std::vector<int>{1});
  CHECK(dag.predecessors[1] == std::vector<int>{0});
  CHECK(dag.successors[1] == std::vector<int>{2, 3});
  CHECK(dag.predecessors[4].empty());
  CHECK(dag.longest_path() == 3);
  const auto order = dag.topological_order();
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  for (std::size_t u = 0; u < dag.size(); ++u)
    for (int v : dag.successors[u]) CHECK(pos[u] < pos[v]);
}

TEST_CASE("longest path agrees with exhaustive search") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Circuit c(4);
    std::uniform_int_distribution<int> q(0, 3);
    for (int g = 0; g < 12; ++g) {
      const int a = q(rng);
      int b = q(rng);
      if (rng() % 3 == 0 && a != b) {
        c.cz(a, b);
      } else {
        c.rx(a, 0.3);
      }
    }
    const auto dag = build_dag(c);
    CHECK(dag.longest_path() == brute_longest(dag));
  }
}
