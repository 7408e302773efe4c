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

#include <cmath>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"
#include "twin/benchmarks.hpp"
#include "twin/emulator.hpp"
#include "twin/errors.hpp"

using namespace twin;
using Catch::Matchers::WithinAbs;

TEST_CASE("suite composition and order") {
  const auto d = testing::reference_device();
  const auto suite = benchmark_suite(d);
  std::vector<std::string> labels;
  for (const auto& s : suite) labels.push_back(s.label);
  CHECK(labels == std::vector<std::string>{"ghz_012", "w_012", "ghz_023", "w_023", "ghz_123",
                                           "w_123", "ghz_0123", "w_0123"});
  for (const auto& s : suite) CHECK(s.trainable == (s.qubits.size() == 3));
  CHECK(center_qubit(d, {0, 1, 2, 3}) == 2);
  CHECK_THROWS_AS(center_qubit(d, {0, 1}), ValidationError);
}

TEST_CASE("benchmark circuits use native gates on coupling edges only") {
  const auto d = testing::reference_device();
  for (const auto& spec : benchmark_suite(d)) {
    INFO(spec.label);
    const auto c = benchmark_circuit(spec, d);
    CHECK(c.label() == spec.label);
    CHECK(c.measured_qubits() == spec.qubits);
    for (const auto& g : c.gates()) {
      for (int q : g.qubits)
        CHECK(std::find(spec.qubits.begin(), spec.qubits.end(), q) != spec.qubits.end());
      if (g.kind == GateKind::cz) CHECK(d.has_edge(g.qubits[0], g.qubits[1]));
      CHECK((g.kind == GateKind::rx || g.kind == GateKind::ry || g.kind == GateKind::rz ||
             g.kind == GateKind::cz));
    }
  }
}

TEST_CASE("ideal distributions") {
  const BenchmarkSpec ghz{BenchmarkFamily::ghz, {0, 1, 2, 3}, "ghz_0123", false};
  const auto g = ideal_distribution(ghz);
  CHECK(g.probability("0000") == 0.5);
  CHECK(g.probability("1111") == 0.5);
  const BenchmarkSpec w{BenchmarkFamily::w, {0, 2, 3}, "w_023", true};
  const auto p = ideal_distribution(w);
  for (const char* bits : {"100", "010", "001"}) CHECK_THAT(p.probability(bits), WithinAbs(1.0 / 3, 1e-15));
  CHECK(p.probability("000") == 0.0);
}

TEST_CASE("noiseless emulation prepares the target states") {
  const auto d = testing::noiseless_device(testing::reference_device());
  auto params = NoiseParams::from_device(d);
  params.shared_j = 0.0;
  for (const auto& spec : benchmark_suite(d)) {
    INFO(spec.label);
    const auto r = emulate(benchmark_circuit(spec, d), d, params);
    CHECK(tvd(r.exact, ideal_distribution(spec)) <= 1e-12);
  }
}
