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
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"
#include "twin/channels.hpp"
#include "twin/errors.hpp"

using namespace twin;
using testing::Cd;
using testing::Mat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Mat ket_bra(int dim, int a, int b) {
  Mat m = Mat::Zero(dim, dim);
  m(a, b) = 1.0;
  return m;
}

Mat plus_state() { return Mat::Constant(2, 2, 0.5); }

void check_cptp(const QuantumChannel& ch, std::mt19937_64& rng) {
  INFO(ch.label());
  CHECK(testing::completeness_error(ch.kraus()) <= 1e-12);
  for (int i = 0; i < 20; ++i) {
    const Mat out = ch.apply(testing::random_density(ch.arity(), rng));
    CHECK(std::abs(out.trace() - Cd(1.0)) <= 1e-12);
    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(testing::min_eigenvalue(out) >= -1e-10);
  }
}

}  // namespace

TEST_CASE("constructors are CPTP across their parameter ranges") {
  std::mt19937_64 rng(3);
  for (double g : {0.0, 0.2, 0.7, 1.0})
    for (double p : {0.0, 0.048, 0.5, 1.0}) check_cptp(gamp(g, p), rng);
  for (double d : {0.0, 0.006, 0.25, 0.5}) check_cptp(deph(d), rng);
  for (double d : {0.0, 0.01625, 0.10375, 0.75}) check_cptp(deph2(d), rng);
  for (double dt : {0.0, 13e-9, 45e-9, 1.5e-6, 1e-3})
    check_cptp(decay_channel(40e-6, 18e-6, 0.05, dt), rng);
  check_cptp(deph(0.1).then(gamp(0.3, 0.1)).then(deph(0.2)), rng);
}

TEST_CASE("out-of-range parameters are rejected") {
  CHECK_THROWS_AS(gamp(1.1, 0.0), ValidationError);
  CHECK_THROWS_AS(gamp(0.5, -0.1), ValidationError);
  CHECK_THROWS_AS(deph(0.51), ValidationError);
  CHECK_THROWS_AS(deph2(0.76), ValidationError);
  CHECK_THROWS_AS(decay_channel(1e-5, 1e-5, 0.0, -1e-9), ValidationError);
  CHECK_THROWS_AS(delta1_from_fidelity(0.6), ValidationError);
  CHECK_THROWS_AS(delta2_from_fidelity(0.3), ValidationError);
  CHECK_THROWS_AS(QuantumChannel("bad", {Mat::Identity(2, 2) * 0.9}), ValidationError);
}

TEST_CASE("gamp examples") {
  std::mt19937_64 rng(9);
  const Mat rho = testing::random_density(1, rng);
  CHECK((gamp(0.0, 0.3).apply(rho) - rho).cwiseAbs().maxCoeff() <= 1e-15);

  Mat thermal = Mat::Zero(2, 2);
  thermal(0, 0) = 0.952;
  thermal(1, 1) = 0.048;
  CHECK(testing::trace_distance(gamp(1.0, 0.048).apply(rho), thermal) <= 1e-12);

  // Excited population: (1 - p)(1 - gamma) + p.
  const Mat out = gamp(0.5, 0.048).apply(ket_bra(2, 1, 1));
  CHECK_THAT(out(1, 1).real(), WithinAbs(0.524, 1e-15));
  CHECK_THAT(out(0, 0).real(), WithinAbs(0.476, 1e-15));
}

TEST_CASE("deph examples") {
  CHECK_THAT(deph(0.006).apply(plus_state())(0, 1).real(), WithinAbs(0.494, 1e-15));
  CHECK((deph(0.5).apply(plus_state()) - Mat::Identity(2, 2) / 2).cwiseAbs().maxCoeff() <=
        1e-15);
  CHECK((deph(0.0).apply(plus_state()) - plus_state()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("deph2 examples") {
  Mat bell = Mat::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const Mat out = deph2(0.75).apply(bell);
  CHECK(std::abs(out(0, 3)) <= 1e-15);
  CHECK_THAT(out(0, 0).real(), WithinAbs(0.5, 1e-15));
  // Coherence between |01> and |10> picks up 1 - 4/3 delta2 too.
  Mat psi = Mat::Zero(4, 4);
  psi(1, 1) = psi(1, 2) = psi(2, 1) = psi(2, 2) = 0.5;
  CHECK_THAT(deph2(0.3).apply(psi)(1, 2).real(), WithinAbs(0.5 * (1 - 0.4), 1e-15));
  CHECK(deph2(0.1).kraus().size() == 4);
}

TEST_CASE("fidelity conversions") {
  CHECK(delta1_from_fidelity(1.0) == 0.0);
  CHECK_THAT(delta1_from_fidelity(0.996), WithinAbs(0.006, 1e-15));
  CHECK_THAT(delta1_from_fidelity(2.0 / 3.0), WithinAbs(0.5, 1e-15));
  CHECK(delta2_from_fidelity(1.0) == 0.0);
  CHECK_THAT(delta2_from_fidelity(0.917), WithinAbs(0.10375, 1e-15));
  CHECK_THAT(delta2_from_fidelity(0.987), WithinAbs(0.01625, 1e-15));
  CHECK_THAT(delta2_from_fidelity(0.4), WithinAbs(0.75, 1e-15));
}

TEST_CASE("decay examples") {
  const Mat one = ket_bra(2, 1, 1);
  const Mat out = decay_channel(40e-6, 18e-6, 0.0, 13e-9).apply(one);
  CHECK_THAT(out(1, 1).real(), WithinRel(std::exp(-13e-9 / 40e-6), 1e-14));

  std::mt19937_64 rng(1);
  const Mat rho = testing::random_density(1, rng);
  CHECK((decay_channel(40e-6, 18e-6, 0.05, 0.0).apply(rho) - rho).cwiseAbs().maxCoeff() <=
        1e-15);

  // Coherence of |+>: gamp scales it by sqrt(1-gamma), deph by (1 - 2 delta) = e^{-dt/T2}.
  const double dt = 2e-6;
  const Mat plus = decay_channel(40e-6, 18e-6, 0.0, dt).apply(plus_state());
  CHECK_THAT(std::abs(plus(0, 1)),
             WithinRel(0.5 * std::exp(-dt / 80e-6) * std::exp(-dt / 18e-6), 1e-12));
  CHECK(decay_channel(40e-6, 18e-6, 0.0, 13e-9).label() == "E(13ns)");
}

TEST_CASE("decay composes additively in time") {
  const double t1 = 38e-6, t2 = 18e-6, p = 0.041;
  const auto a = decay_channel(t1, t2, p, 45e-9);
  const auto b = decay_channel(t1, t2, p, 1.2e-6);
  const auto ab = decay_channel(t1, t2, p, 45e-9 + 1.2e-6);
  const auto composed = a.then(b);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Mat basis = ket_bra(2, i, j);
      CHECK((composed.apply(basis) - ab.apply(basis)).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("composition order: gamp first, then deph") {
  const auto e = decay_channel(30e-6, 20e-6, 0.1, 5e-6);
  const double gamma = 1 - std::exp(-5e-6 / 30e-6);
  const double delta = 0.5 * (1 - std::exp(-5e-6 / 20e-6));
  std::mt19937_64 rng(2);
  const Mat rho = testing::random_density(1, rng);
  const Mat expected = deph(delta).apply(gamp(gamma, 0.1).apply(rho));
  CHECK((e.apply(rho) - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(e.kraus().size() <= 8);
}

TEST_CASE("superoperator acts on the row-major vectorisation") {
  std::mt19937_64 rng(4);
  const auto ch = decay_channel(30e-6, 20e-6, 0.1, 5e-6).then(deph(0.05));
  const Mat rho = testing::random_density(1, rng);
  Eigen::VectorXcd v(4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) v(r * 2 + c) = rho(r, c);
  const Eigen::VectorXcd w = ch.superoperator() * v;
  const Mat out = ch.apply(rho);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(std::abs(w(r * 2 + c) - out(r, c)) <= 1e-14);
}

TEST_CASE("crosstalk unitary") {
  CHECK((crosstalk_unitary(0.0, 45e-9) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  const Mat u = crosstalk_unitary(std::numbers::pi / 2, 1.0);
  const Cd i(0, 1);
  CHECK(std::abs(u(0, 0) + i) <= 1e-15);
  CHECK(std::abs(u(1, 1) - i) <= 1e-15);
  CHECK(std::abs(u(2, 2) - i) <= 1e-15);
  CHECK(std::abs(u(3, 3) + i) <= 1e-15);
  CHECK((u * u.adjoint() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);

  // Equals exp(-i phase Z(x)Z) and commutes with ZZ and deph2.
  const double phase = 0.314514 * 45e-9;
  const Mat ct = crosstalk_unitary(0.314514, 45e-9);
  const Mat zz = testing::kron(testing::pauli('z'), testing::pauli('z'));
  const Mat expected = std::cos(phase) * Mat::Identity(4, 4) - i * std::sin(phase) * zz;
  CHECK((ct - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((ct * zz - zz * ct).cwiseAbs().maxCoeff() <= 1e-15);
  std::mt19937_64 rng(6);
  const Mat rho = testing::random_density(2, rng);
  const auto d2 = deph2(0.2);
  const Mat a = d2.apply(ct * rho * ct.adjoint());
  const Mat b = ct * d2.apply(rho) * ct.adjoint();
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("gate unitaries") {
  const Mat rx = gate_unitary(Gate::rx(0, 0.7));
  CHECK((rx - testing::rotation('x', 0.7)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((gate_unitary(Gate::ry(0, -1.1)) - testing::rotation('y', -1.1)).cwiseAbs().maxCoeff() <=
        1e-15);
  CHECK((gate_unitary(Gate::rz(0, 2.0)) - testing::rotation('z', 2.0)).cwiseAbs().maxCoeff() <=
        1e-15);
  const Mat cz = gate_unitary(Gate::cz(0, 1));
  CHECK(cz.isApprox(Mat(Eigen::Vector4cd(1, 1, 1, -1).asDiagonal())));
}

TEST_CASE("confusion matrices are validated") {
  CHECK_NOTHROW(validate_confusion(kIdentityConfusion));
  CHECK_THROWS_AS(validate_confusion({{{0.9, 0.1}, {0.0, 0.9}}}), ValidationError);
  CHECK_THROWS_AS(validate_confusion({{{1.2, 0.0}, {-0.2, 1.0}}}), ValidationError);
}

TEST_CASE("labels") {
  CHECK(deph(0.006).label() == "deph(0.006)");
  CHECK(deph2(0.10375).label() == "deph2(0.10375)");
  CHECK(format_duration(45e-9) == "45ns");
}
