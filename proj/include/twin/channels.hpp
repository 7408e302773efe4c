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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twin/device.hpp"

namespace twin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kCompletenessTol = 1e-12;

/// A CPTP map on one or two qubits given by its Kraus operators.
///
/// Operators act on the computational basis of the listed qubits with the
/// first qubit as the most significant bit. The constructor checks
/// sum_k K^dagger K = I elementwise within kCompletenessTol.
class QuantumChannel {
 public:
  QuantumChannel(std::string label, std::vector<Matrix> kraus);

  /// Single-operator channel U rho U^dagger. U must be unitary.
  static QuantumChannel unitary(std::string label, Matrix u);
  static QuantumChannel identity(int arity);

  int arity() const { return arity_; }
  int dim() const { return 1 << arity_; }
  const std::string& label() const { return label_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  /// Row-major vectorised action: vec(rho') = S vec(rho) with
  /// S = sum_k K (x) conj(K).
  const Matrix& superoperator() const { return superop_; }

  /// Channel applying `this` first and then `next` (next o this).
  QuantumChannel then(const QuantumChannel& next, std::string label = {}) const;

  /// rho -> sum_k K rho K^dagger on a dim x dim matrix.
  Matrix apply(const Matrix& rho) const;

 private:
  std::string label_;
  int arity_ = 1;
  std::vector<Matrix> kraus_;
  Matrix superop_;
};

/// Generalized amplitude damping toward (1-p)|0><0| + p|1><1|.
QuantumChannel gamp(double gamma, double p_excited);
/// Phase flip: (1-delta) rho + delta Z rho Z, delta in [0, 1/2].
QuantumChannel deph(double delta);
/// Two-qubit dephasing with Z(x)I, I(x)Z, Z(x)Z each at delta2/3.
QuantumChannel deph2(double delta2);
/// Idle relaxation for `dt` seconds: deph((1-e^{-dt/T2})/2) o gamp(1-e^{-dt/T1}).
QuantumChannel decay_channel(double t1, double t2, double p_excited, double dt);
/// exp(-i beta d Z(x)Z) = diag(e^{-i beta d}, e^{i beta d}, e^{i beta d}, e^{-i beta d}).
Matrix crosstalk_unitary(double beta, double duration);

double delta1_from_fidelity(double fidelity);
double delta2_from_fidelity(double fidelity);

/// Throws ValidationError unless entries are in [0,1] and columns sum to 1.
void validate_confusion(const ConfusionMatrix& matrix);

/// Unitary of a single rotation or cz gate (2x2 or 4x4).
Matrix gate_unitary(const Gate& gate);

/// Compact numeric text used inside channel labels.
std::string format_value(double value);
/// "13ns"-style duration text.
std::string format_duration(double seconds);

}  // namespace twin
