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

#include "twin/density.hpp"

#include <cmath>
#include <sstream>

#include "twin/errors.hpp"

namespace twin {

namespace {

constexpr int kMaxRegister = 14;

// Basis-index offsets of the 2^k local states of the target positions.
std::vector<Eigen::Index> local_offsets(int num_qubits,
                                        std::span<const int> positions) {
  const int k = static_cast<int>(positions.size());
  std::vector<Eigen::Index> off(std::size_t{1} << k, 0);
  for (std::size_t a = 0; a < off.size(); ++a) {
    for (int t = 0; t < k; ++t) {
      if ((a >> (k - 1 - t)) & 1U) {
        off[a] |= Eigen::Index{1} << (num_qubits - 1 - positions[t]);
      }
    }
  }
  return off;
}

void check_positions(int num_qubits, std::span<const int> positions, int arity) {
  if (static_cast<int>(positions.size()) != arity) {
    throw ValidationError("operator arity " + std::to_string(arity) +
                          " does not match " + std::to_string(positions.size()) +
                          " target qubit(s)");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= num_qubits) {
      throw ValidationError("qubit position " + std::to_string(positions[i]) +
                            " out of range for a " + std::to_string(num_qubits) +
                            "-qubit register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (positions[i] == positions[j]) {
        throw ValidationError("repeated target qubit position");
      }
    }
  }
}

}  // namespace

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxRegister) {
    throw SimulationError("register of " + std::to_string(num_qubits) +
                          " qubits is not supported");
  }
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  rho_ = Matrix::Zero(d, d);
  rho_(0, 0) = 1.0;
}

DensityMatrix DensityMatrix::from_matrix(Matrix rho) {
  const auto d = rho.rows();
  if (d != rho.cols() || d == 0 || (d & (d - 1)) != 0) {
    throw ValidationError("density matrix must be square with power-of-two size");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  DensityMatrix out(n);
  out.rho_ = std::move(rho);
  return out;
}

DensityMatrix DensityMatrix::from_state(const Eigen::VectorXcd& psi) {
  return from_matrix(psi * psi.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_valid(double trace_tol, double hermitian_tol,
                                double eigen_floor) const {
  const Complex tr = trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > trace_tol) {
    std::ostringstream msg;
    msg << "density matrix trace drifted to " << tr;
    throw SimulationError(msg.str());
  }
  if (const double h = hermiticity_error(); h > hermitian_tol) {
    throw SimulationError("density matrix lost Hermiticity (" + std::to_string(h) + ")");
  }
  if (const double e = min_eigenvalue(); e < eigen_floor) {
    throw SimulationError("density matrix has negative eigenvalue " + std::to_string(e));
  }
}

namespace {

// Applies a D^2 x D^2 superoperator to every D x D block of rho picked out
// by the target offsets.
template <int D>
void superoperator_kernel(Matrix& rho, const Matrix& superop,
                          const std::vector<Eigen::Index>& off) {
  constexpr int D2 = D * D;
  Complex s[D2][D2];
  for (int i = 0; i < D2; ++i) {
    for (int j = 0; j < D2; ++j) s[i][j] = superop(i, j);
  }
  Eigen::Index mask = 0;
  for (auto o : off) mask |= o;
  const Eigen::Index n = rho.rows();
  Complex in[D2];
  for (Eigen::Index c = 0; c < n; ++c) {
    if (c & mask) continue;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r & mask) continue;
      for (int a = 0; a < D; ++a) {
        for (int b = 0; b < D; ++b) in[a * D + b] = rho(r + off[a], c + off[b]);
      }
      for (int a = 0; a < D; ++a) {
        for (int b = 0; b < D; ++b) {
          Complex acc{0.0, 0.0};
          for (int j = 0; j < D2; ++j) acc += s[a * D + b][j] * in[j];
          rho(r + off[a], c + off[b]) = acc;
        }
      }
    }
  }
}

}  // namespace

void DensityMatrix::apply_superoperator(const Matrix& superop,
                                        std::span<const int> positions) {
  const auto off = local_offsets(num_qubits_, positions);
  if (off.size() == 2) {
    superoperator_kernel<2>(rho_, superop, off);
  } else {
    superoperator_kernel<4>(rho_, superop, off);
  }
}

void DensityMatrix::apply_unitary(const Matrix& u, std::span<const int> positions) {
  const int arity = u.rows() == 2 ? 1 : u.rows() == 4 ? 2 : -1;
  if (arity < 0 || u.cols() != u.rows()) {
    throw ValidationError("unitary must be 2x2 or 4x4");
  }
  check_positions(num_qubits_, positions, arity);
  const auto& ch = QuantumChannel::unitary("u", u);
  apply_superoperator(ch.superoperator(), positions);
}

void DensityMatrix::apply_channel(const QuantumChannel& channel,
                                  std::span<const int> positions) {
  check_positions(num_qubits_, positions, channel.arity());
  apply_superoperator(channel.superoperator(), positions);
}

void DensityMatrix::apply_diagonal(const std::array<Complex, 4>& phases,
                                   std::span<const int> positions) {
  check_positions(num_qubits_, positions, 2);
  const int su = num_qubits_ - 1 - positions[0];
  const int sv = num_qubits_ - 1 - positions[1];
  const Eigen::Index n = dim();
  std::vector<Complex> phase(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phase[i] = phases[((i >> su) & 1) * 2 + ((i >> sv) & 1)];
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    const Complex pc = std::conj(phase[c]);
    for (Eigen::Index r = 0; r < n; ++r) rho_(r, c) *= phase[r] * pc;
  }
}

DensityMatrix apply_gate(DensityMatrix state, const Gate& gate) {
  if (!is_unitary_kind(gate.kind)) {
    throw ValidationError("apply_gate: '" + describe(gate) + "' is not unitary");
  }
  state.apply_unitary(gate_unitary(gate), gate.qubits);
  return state;
}

DensityMatrix apply_channel(DensityMatrix state, const QuantumChannel& channel,
                            std::span<const int> positions) {
  state.apply_channel(channel, positions);
  return state;
}

ShotDistribution probabilities(const DensityMatrix& state,
                               std::span<const int> positions) {
  const int n = state.num_qubits();
  for (int p : positions) {
    if (p < 0 || p >= n) throw ValidationError("measured position out of range");
  }
  const int w = static_cast<int>(positions.size());
  std::vector<double> probs(std::size_t{1} << w, 0.0);
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    std::size_t x = 0;
    for (int b = 0; b < w; ++b) {
      x = (x << 1) | static_cast<std::size_t>((i >> (n - 1 - positions[b])) & 1);
    }
    probs[x] += state.matrix()(i, i).real();
  }
  double total = 0.0;
  for (double& p : probs) {
    if (p < 0.0) p = 0.0;
    total += p;
  }
  for (double& p : probs) p /= total;
  return ShotDistribution::exact(w, std::move(probs));
}

}  // namespace twin
