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

#include <random>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"
#include "twin/emulator.hpp"
#include "twin/errors.hpp"

using namespace twin;
using Catch::Matchers::WithinAbs;

TEST_CASE("layered engine matches the superoperator chain oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const auto d = testing::small_device(n);
    const auto c = testing::random_line_circuit(rng, n, 8);
    const auto noisy =
        transpile_noise(schedule_alap(c, d), d, NoiseParams::from_device(d));
    RunOptions opts;
    opts.check_steps = true;
    const auto rho = run(noisy, opts);
    CHECK((rho.matrix() - testing::oracle_run(noisy)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("empty noiseless circuit stays in the ground state") {
  const auto d = testing::small_device(2);
  Circuit c(2, "empty");
  c.measure({0, 1});
  auto params = NoiseParams::from_device(d);
  params.toggles = NoiseToggles::all_off();
  const auto r = emulate(c, d, params);
  CHECK(r.exact.probability("00") == 1.0);
}

TEST_CASE("readout confusion is applied before sampling") {
  const auto d = testing::small_device(1);
  Circuit c(1, "ro");
  c.measure({0});
  auto params = NoiseParams::from_device(d);
  params.toggles = parse_toggles("none,spam");
  EmulationOptions opts;
  opts.shots = 100000;
  const auto r = emulate(c, d, params, opts);
  // Prepared population p, then P(1|0) = 0.03 and P(1|1) = 0.95.
  const double p = 0.03;
  CHECK_THAT(r.exact.probability("1"), WithinAbs((1 - p) * 0.03 + p * 0.95, 1e-15));
  REQUIRE(r.sampled.has_value());
  CHECK(r.sampled->shots() == 100000);
  CHECK(tvd(*r.sampled, r.exact) < 0.01);
  CHECK(emulate(c, d, params, opts).sampled->counts() == r.sampled->counts());
}

TEST_CASE("register capacity is enforced") {
  const auto d = testing::small_device(4);
  Circuit c(4, "wide");
  c.measure({0, 1, 2, 3});
  EmulationOptions opts;
  opts.run.max_qubits = 3;
  CHECK_THROWS_AS(emulate(c, d, NoiseParams::from_device(d), opts), SimulationError);
}
