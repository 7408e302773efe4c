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

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"
#include "twin/errors.hpp"
#include "twin/transpile.hpp"

using namespace twin;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Expected {
  std::string label;
  std::vector<int> qubits;
  NoiseRule rule;
};

Circuit single_layer_example() {
  Circuit c(5, "single_layer");
  c.rx(1, 1.0).cz(2, 3);
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("single-layer example inserts the expected instructions") {
  const auto d = testing::reference_device();
  const auto s = schedule_alap(single_layer_example(), d);
  const auto noisy = transpile_noise(s, d, NoiseParams::from_device(d));

  CHECK(noisy.register_qubits == std::vector<int>{0, 1, 2, 3, 4});
  REQUIRE(noisy.prologue.size() == 5);
  CHECK(noisy.prologue[4].label() == "gamp(1,0.06)");
  REQUIRE(noisy.layers.size() == 1);

  const std::vector<Expected> expected{
      {"E(45ns)", {0}, NoiseRule::idle_decay},
      {"E(45ns)", {4}, NoiseRule::idle_decay},
      {"rx(1)", {1}, NoiseRule::gate},
      {"deph(0.006)", {1}, NoiseRule::gate_error_1q},
      {"cz", {2, 3}, NoiseRule::gate},
      {"deph2(0.10375)", {2, 3}, NoiseRule::gate_error_2q},
      {"E(13ns)", {1}, NoiseRule::idle_decay},
      {"CT(45ns)", {0, 2}, NoiseRule::crosstalk},
      {"CT(45ns)", {1, 2}, NoiseRule::crosstalk},
      {"CT(45ns)", {2, 3}, NoiseRule::crosstalk},
      {"CT(45ns)", {2, 4}, NoiseRule::crosstalk},
  };
  const auto& got = noisy.layers[0].instructions;
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    INFO("instruction " << i);
    CHECK(got[i].label() == expected[i].label);
    CHECK(got[i].qubits == expected[i].qubits);
    CHECK(got[i].rule == expected[i].rule);
  }
  // Crosstalk phase = beta(shared J) * 45 ns.
  const double j = NoiseParams::from_device(d).shared_j;
  CHECK_THAT(got[9].phase, WithinRel(beta(d, {2, 3}, j) * 45e-9, 1e-12));
}

TEST_CASE("single-layer listing matches the golden file") {
  const auto d = testing::reference_device();
  const auto s = schedule_alap(single_layer_example(), d);
  const auto text = to_text(transpile_noise(s, d, NoiseParams::from_device(d)));
  CHECK(text == read_file(testing::source_dir() / "tests" / "golden" / "single_layer.txt"));
}

TEST_CASE("stripping inserted instructions recovers the schedule") {
  const auto d = testing::reference_device();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c(5, "r");
    for (int g = 0; g < 10; ++g) {
      const auto edges = d.edges();
      const auto& e = edges[rng() % 3];
      if (rng() % 3 == 0) {
        c.cz(e.first, e.second);
      } else {
        c.ry(static_cast<int>(rng() % 4), 0.3 * g);
      }
    }
    c.measure({0, 1, 2, 3});
    const auto s = schedule_alap(c, d);
    const auto noisy = transpile_noise(s, d, NoiseParams::from_device(d));
    const auto stripped = noisy.strip();
    REQUIRE(stripped.size() == s.layers.size());
    for (std::size_t l = 0; l < s.layers.size(); ++l) {
      std::vector<Gate> expected;
      for (const auto& op : s.layers[l].ops) expected.push_back(op.gate);
      CHECK(stripped[l] == expected);
    }
  }
}

TEST_CASE("all toggles off inserts nothing") {
  const auto d = testing::reference_device();
  Circuit c(5, "ghz");
  c.ry(2, 1.5).cz(2, 0).ry(0, 1.5).measure({0, 2});
  auto params = NoiseParams::from_device(d);
  params.toggles = NoiseToggles::all_off();
  const auto s = schedule_alap(c, d);
  const auto noisy = transpile_noise(s, d, params);
  CHECK(noisy.prologue.empty());
  CHECK(noisy.readout.empty());
  CHECK(noisy.register_qubits == std::vector<int>{0, 2});
  std::size_t ops = 0;
  for (const auto& l : s.layers) ops += l.ops.size();
  CHECK(noisy.instruction_count() == ops);
}

TEST_CASE("idle decay covers exactly the idle time of each register qubit") {
  const auto d = testing::reference_device();
  Circuit c(5, "w");
  c.rx(2, 3.14).ry(0, 0.5).cz(2, 0).ry(0, -0.5).cz(2, 1).rx(1, 1.0).measure({0, 1, 2});
  auto params = NoiseParams::from_device(d);
  params.toggles = parse_toggles("none,passive");
  for (bool in_measurement : {true, false}) {
    TranspileOptions opts;
    opts.decay_during_measurement = in_measurement;
    const auto s = schedule_alap(c, d);
    const auto noisy = transpile_noise(s, d, params, opts);
    CHECK(noisy.register_qubits == std::vector<int>{0, 1, 2});
    std::map<int, double> decay, busy;
    for (std::size_t l = 0; l < s.layers.size(); ++l) {
      for (const auto& ins : noisy.layers[l].instructions) {
        if (ins.rule == NoiseRule::idle_decay) decay[ins.qubits[0]] += ins.duration;
      }
      for (int q : noisy.register_qubits) busy[q] += s.layers[l].slots[q].busy;
    }
    for (int q : noisy.register_qubits) {
      INFO("qubit " << q);
      const double expected = s.makespan() - busy[q];
      CHECK_THAT(decay[q], WithinAbs(expected, 1e-15));
    }
  }
}

TEST_CASE("decay in the measurement layer is optional for unmeasured qubits") {
  const auto d = testing::reference_device();
  Circuit c(5, "m");
  c.rx(1, 1.0).measure({2});
  auto params = NoiseParams::from_device(d);
  params.toggles = parse_toggles("none,passive");
  const auto s = schedule_alap(c, d);
  auto count_meas_decay = [&](bool flag) {
    TranspileOptions opts;
    opts.decay_during_measurement = flag;
    const auto noisy = transpile_noise(s, d, params, opts);
    int n = 0;
    for (const auto& ins : noisy.layers.back().instructions)
      n += ins.rule == NoiseRule::idle_decay;
    return n;
  };
  CHECK(count_meas_decay(true) == 1);
  CHECK(count_meas_decay(false) == 0);
}

TEST_CASE("one crosstalk instruction per edge touching the circuit per layer") {
  const auto d = testing::reference_device();
  Circuit c(5, "x");
  c.ry(0, 1.0).cz(0, 2).ry(0, 1.0).measure({0});
  const auto s = schedule_alap(c, d);
  auto params = NoiseParams::from_device(d);
  params.toggles = parse_toggles("none,crosstalk");
  const auto noisy = transpile_noise(s, d, params);
  CHECK(noisy.register_qubits == std::vector<int>{0, 1, 2, 3, 4});
  for (const auto& layer : noisy.layers) {
    std::vector<std::vector<int>> edges;
    for (const auto& ins : layer.instructions)
      if (ins.rule == NoiseRule::crosstalk) edges.push_back(ins.qubits);
    CHECK(edges == std::vector<std::vector<int>>{{0, 2}, {1, 2}, {2, 3}, {2, 4}});
  }
  // Duration is the longer busy time of the two endpoints.
  const auto& first = noisy.layers[0].instructions;
  for (const auto& ins : first) {
    if (ins.rule == NoiseRule::crosstalk && ins.qubits == std::vector<int>{1, 2}) {
      CHECK(ins.duration == 0.0);
    }
    if (ins.rule == NoiseRule::crosstalk && ins.qubits == std::vector<int>{0, 2}) {
      CHECK_THAT(ins.duration, WithinAbs(32e-9, 1e-18));
    }
  }
  TranspileOptions narrow;
  narrow.include_neighbors = false;
  const auto small = transpile_noise(s, d, params, narrow);
  CHECK(small.register_qubits == std::vector<int>{0, 2});
}

TEST_CASE("J follows the coupling mode") {
  const auto d = testing::reference_device();
  auto p = NoiseParams::from_device(d);
  CHECK_THAT(p.shared_j, WithinRel((15.0 + 22.2 + 19.2 + 65.7) / 4 * 1e3, 1e-12));
  CHECK(p.j_for(d, {0, 2}) == p.shared_j);
  p.coupling_mode = CouplingMode::per_pair;
  CHECK_THAT(p.j_for(d, {0, 2}), WithinRel(15e3, 1e-12));
  p.pair_j[{0, 2}] = 1e3;
  CHECK(p.j_for(d, {0, 2}) == 1e3);
  CHECK_THROWS_AS(p.cz_fidelity_for(d, {2, 4}), ValidationError);
  p.cz_fidelity[{0, 2}] = 0.3;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("cz off the coupling graph is rejected") {
  const auto d = testing::reference_device();
  Circuit c(5);
  c.cz(0, 1);
  const auto s = schedule_alap(c, d);
  CHECK_THROWS_AS(transpile_noise(s, d, NoiseParams::from_device(d)), ValidationError);
}

TEST_CASE("toggle lists") {
  CHECK(parse_toggles("all") == NoiseToggles::all_on());
  CHECK(parse_toggles("none") == NoiseToggles::all_off());
  const auto t = parse_toggles("no_spam,no_crosstalk");
  CHECK_FALSE(t.spam_error);
  CHECK_FALSE(t.crosstalk);
  CHECK(t.passive_decay);
  CHECK(parse_toggles(to_string(t)) == t);
  CHECK(to_string(NoiseToggles::all_on()) == "1q,2q,spam,passive,crosstalk");
  CHECK_THROWS_AS(parse_toggles("no_magic"), ValidationError);
  CHECK_FALSE(NoiseToggles::all_off().any());
}
