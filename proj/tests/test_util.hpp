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

// Helpers shared by the unit and acceptance tests. The dense helpers here
// deliberately avoid the library's own kernels so they can serve as oracles.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "twin/circuit.hpp"
#include "twin/device.hpp"
#include "twin/transpile.hpp"

namespace twin::testing {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline std::filesystem::path source_dir() { return TWIN_SOURCE_DIR; }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("twin_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline DeviceModel reference_device() {
  return load_device(source_dir() / "data" / "soprano_d.toml");
}

/// Same topology and frequencies with every error source removed.
inline DeviceModel noiseless_device(const DeviceModel& d) {
  auto qubits = d.qubits();
  for (auto& q : qubits) {
    q.t1 = std::numeric_limits<double>::infinity();
    q.t2 = std::numeric_limits<double>::infinity();
    q.p_excited = 0.0;
    q.confusion = kIdentityConfusion;
    q.single_qubit_fidelity = 1.0;
  }
  auto couplings = d.couplings();
  for (auto& c : couplings) {
    c.coupling_j = 0.0;
    if (c.cz_fidelity) c.cz_fidelity = 1.0;
  }
  return DeviceModel(d.name(), qubits, couplings, d.durations(), d.active_qubits());
}

/// Random mixed state of `n` qubits from a Ginibre matrix.
inline Mat random_density(int n, std::mt19937_64& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Cd(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Eigen::VectorXcd random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(Eigen::Index{1} << n);
  for (auto& v : psi) v = Cd(g(rng), g(rng));
  return psi.normalized();
}

/// Full-register matrix of a k-qubit operator acting on `positions`
/// (position 0 = most significant bit), built entry by entry.
inline Mat embed(const Mat& op, const std::vector<int>& positions, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  const int k = static_cast<int>(positions.size());
  auto bit = [n](Eigen::Index i, int p) { return (i >> (n - 1 - p)) & 1; };
  auto local = [&](Eigen::Index i) {
    Eigen::Index a = 0;
    for (int t = 0; t < k; ++t) a = (a << 1) | bit(i, positions[t]);
    return a;
  };
  auto rest_equal = [&](Eigen::Index i, Eigen::Index j) {
    for (int p = 0; p < n; ++p) {
      bool target = false;
      for (int t : positions) target = target || t == p;
      if (!target && bit(i, p) != bit(j, p)) return false;
    }
    return true;
  };
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (rest_equal(i, j)) out(i, j) = op(local(i), local(j));
  return out;
}

inline Mat pauli(char which) {
  Mat m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Cd(0, -1), Cd(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

/// exp(-i theta/2 P) for a Pauli axis.
inline Mat rotation(char axis, double theta) {
  return std::cos(theta / 2) * Mat::Identity(2, 2) -
         Cd(0, 1) * std::sin(theta / 2) * pauli(axis);
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Half the trace norm of a Hermitian difference.
inline double trace_distance(const Mat& a, const Mat& b) {
  const Mat diff = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline Mat kraus_apply(const std::vector<Mat>& ks, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

inline double completeness_error(const std::vector<Mat>& ks) {
  Mat sum = Mat::Zero(ks.front().cols(), ks.front().cols());
  for (const auto& k : ks) sum += k.adjoint() * k;
  return (sum - Mat::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

/// Line device 0 - 1 - ... - (n-1) with strong couplings so that every
/// noise family leaves a visible trace in a short circuit.
inline DeviceModel small_device(int n) {
  std::vector<QubitCalibration> qubits;
  for (int q = 0; q < n; ++q) {
    QubitCalibration c;
    c.index = q;
    c.frequency = 4.6e9 + 0.43e9 * q;
    c.anharmonicity = 190e6 + 7e6 * q;
    c.t1 = 2e-6 + 0.5e-6 * q;
    c.t2 = 1.5e-6 + 0.3e-6 * q;
    c.p_excited = 0.03 + 0.01 * q;
    c.confusion = {{{0.97 - 0.01 * q, 0.05}, {0.03 + 0.01 * q, 0.95}}};
    c.single_qubit_fidelity = 0.99 - 0.002 * q;
    qubits.push_back(c);
  }
  std::vector<CouplingCalibration> couplings;
  for (int q = 0; q + 1 < n; ++q) {
    couplings.push_back({q + 1, q, 20e6 + 5e6 * q, 0.95 - 0.02 * q});
  }
  std::map<GateKind, double> durations{{GateKind::rx, 32e-9}, {GateKind::ry, 32e-9},
                                       {GateKind::rz, 0.0},    {GateKind::cz, 45e-9},
                                       {GateKind::measure, 300e-9}};
  std::vector<int> active;
  for (int q = 0; q < n; ++q) active.push_back(q);
  return DeviceModel("line" + std::to_string(n), qubits, couplings, durations, active);
}

/// Random rotations and nearest-neighbour cz on a line device, every qubit
/// measured.
inline Circuit random_line_circuit(std::mt19937_64& rng, int n, int gates) {
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  Circuit c(n, "random");
  for (int g = 0; g < gates; ++g) {
    const int q = static_cast<int>(rng() % n);
    switch (rng() % 5) {
      case 0: c.rx(q, angle(rng)); break;
      case 1: c.ry(q, angle(rng)); break;
      case 2: c.rz(q, angle(rng)); break;
      default:
        if (n > 1) {
          const int a = static_cast<int>(rng() % (n - 1));
          c.cz(a, a + 1);
        }
    }
  }
  std::vector<int> all;
  for (int q = 0; q < n; ++q) all.push_back(q);
  c.measure(all);
  return c;
}

inline Mat oracle_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::rx: return rotation('x', g.angle);
    case GateKind::ry: return rotation('y', g.angle);
    case GateKind::rz: return rotation('z', g.angle);
    default: {
      Mat cz = Mat::Identity(4, 4);
      cz(3, 3) = -1.0;
      return cz;
    }
  }
}

/// Final state of a noisy circuit by multiplying full-register
/// superoperators S = sum_k K (x) conj(K) onto vec(rho), one per instruction.
inline Mat oracle_run(const NoisyCircuit& noisy) {
  const int n = static_cast<int>(noisy.register_qubits.size());
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
  v(0) = 1.0;
  auto positions = [&](const std::vector<int>& qubits) {
    std::vector<int> out;
    for (int q : qubits) {
      for (int i = 0; i < n; ++i)
        if (noisy.register_qubits[i] == q) out.push_back(i);
    }
    return out;
  };
  auto step = [&](const NoisyInstruction& ins) {
    std::vector<Mat> ks;
    switch (ins.rule) {
      case NoiseRule::measure: return;
      case NoiseRule::gate:
        if (ins.gate->kind == GateKind::barrier) return;
        ks.push_back(oracle_gate(*ins.gate));
        break;
      case NoiseRule::crosstalk: {
        const Mat zz = kron(pauli('z'), pauli('z'));
        ks.push_back(std::cos(ins.phase) * Mat::Identity(4, 4) -
                     Cd(0, 1) * std::sin(ins.phase) * zz);
        break;
      }
      default: ks = ins.channel->kraus();
    }
    const auto pos = positions(ins.qubits);
    Mat s = Mat::Zero(d * d, d * d);
    for (const auto& k : ks) {
      const Mat full = embed(k, pos, n);
      s += kron(full, full.conjugate());
    }
    v = s * v;
  };
  for (const auto& ins : noisy.prologue) step(ins);
  for (const auto& layer : noisy.layers)
    for (const auto& ins : layer.instructions) step(ins);
  Mat rho(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) rho(r, c) = v(r * d + c);
  return rho;
}

}  // namespace twin::testing
