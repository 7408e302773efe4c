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

#include <span>
#include <vector>

#include "twin/channels.hpp"
#include "twin/distribution.hpp"
#include "twin/gate.hpp"

namespace twin {

/// Dense 2^n x 2^n density matrix. Register position 0 is the most
/// significant bit of the basis index.
class DensityMatrix {
 public:
  /// |0...0><0...0|.
  explicit DensityMatrix(int num_qubits);
  static DensityMatrix from_matrix(Matrix rho);
  /// |psi><psi| for a normalised state vector.
  static DensityMatrix from_state(const Eigen::VectorXcd& psi);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return rho_.rows(); }
  const Matrix& matrix() const { return rho_; }

  Complex trace() const { return rho_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Throws SimulationError if trace, Hermiticity or positivity drift past
  /// the given tolerances.
  void check_valid(double trace_tol = 1e-9, double hermitian_tol = 1e-9,
                   double eigen_floor = -1e-9) const;

  /// rho -> U rho U^dagger with U on the listed register positions.
  void apply_unitary(const Matrix& u, std::span<const int> positions);
  /// rho -> sum_k K rho K^dagger on the listed register positions.
  void apply_channel(const QuantumChannel& channel, std::span<const int> positions);
  /// Diagonal two-qubit unitary; `phases` are its four diagonal entries.
  void apply_diagonal(const std::array<Complex, 4>& phases,
                      std::span<const int> positions);

 private:
  void apply_superoperator(const Matrix& superop, std::span<const int> positions);

  int num_qubits_ = 0;
  Matrix rho_;
};

/// Applies a rotation or cz gate whose qubits are register positions.
DensityMatrix apply_gate(DensityMatrix state, const Gate& gate);

/// Applies a channel to the listed register positions.
DensityMatrix apply_channel(DensityMatrix state, const QuantumChannel& channel,
                            std::span<const int> positions);

/// Exact marginal distribution over the listed register positions; bit
/// order follows the order of `positions`.
ShotDistribution probabilities(const DensityMatrix& state,
                               std::span<const int> positions);

}  // namespace twin
