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

#include "twin/channels.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "twin/errors.hpp"

namespace twin {

namespace {

const Complex kI{0.0, 1.0};

void require_range(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream msg;
    msg << what << " = " << value << " outside [" << lo << ", " << hi << "]";
    throw ValidationError(msg.str());
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix pauli_z() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

}  // namespace

std::string format_value(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_duration(double seconds) {
  return format_value(seconds * 1e9) + "ns";
}

QuantumChannel::QuantumChannel(std::string label, std::vector<Matrix> kraus)
    : label_(std::move(label)), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError(label_ + ": empty Kraus set");
  const auto d = kraus_.front().rows();
  if (d == 2) {
    arity_ = 1;
  } else if (d == 4) {
    arity_ = 2;
  } else {
    throw ValidationError(label_ + ": Kraus operators must be 2x2 or 4x4");
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) {
      throw ValidationError(label_ + ": Kraus operators differ in shape");
    }
    sum += k.adjoint() * k;
  }
  const double err = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > kCompletenessTol) {
    std::ostringstream msg;
    msg << label_ << ": Kraus completeness violated by " << err;
    throw ValidationError(msg.str());
  }
  superop_ = Matrix::Zero(d * d, d * d);
  for (const auto& k : kraus_) superop_ += kron(k, k.conjugate());
}

QuantumChannel QuantumChannel::unitary(std::string label, Matrix u) {
  return QuantumChannel(std::move(label), {std::move(u)});
}

QuantumChannel QuantumChannel::identity(int arity) {
  const int d = 1 << arity;
  return QuantumChannel("id", {Matrix::Identity(d, d)});
}

QuantumChannel QuantumChannel::then(const QuantumChannel& next,
                                    std::string label) const {
  if (next.arity() != arity()) {
    throw ValidationError("cannot compose channels of different arity");
  }
  std::vector<Matrix> product;
  for (const auto& b : next.kraus()) {
    for (const auto& a : kraus_) {
      Matrix k = b * a;
      if (k.cwiseAbs().maxCoeff() > 0.0) product.push_back(std::move(k));
    }
  }
  if (label.empty()) label = next.label() + "∘" + label_;
  return QuantumChannel(std::move(label), std::move(product));
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

QuantumChannel gamp(double gamma, double p_excited) {
  require_range(gamma, 0.0, 1.0, "gamp gamma");
  require_range(p_excited, 0.0, 1.0, "gamp p_excited");
  const double g = std::sqrt(gamma);
  const double r = std::sqrt(1.0 - gamma);
  const double s0 = std::sqrt(1.0 - p_excited);
  const double s1 = std::sqrt(p_excited);
  std::vector<Matrix> ops(4, Matrix::Zero(2, 2));
  ops[0](0, 0) = s0;
  ops[0](1, 1) = s0 * r;
  ops[1](0, 1) = s0 * g;
  ops[2](0, 0) = s1 * r;
  ops[2](1, 1) = s1;
  ops[3](1, 0) = s1 * g;
  std::vector<Matrix> kept;
  for (auto& k : ops) {
    if (k.cwiseAbs().maxCoeff() > 0.0) kept.push_back(std::move(k));
  }
  return QuantumChannel("gamp(" + format_value(gamma) + "," +
                            format_value(p_excited) + ")",
                        std::move(kept));
}

QuantumChannel deph(double delta) {
  require_range(delta, 0.0, 0.5, "deph delta");
  std::vector<Matrix> ops{std::sqrt(1.0 - delta) * Matrix::Identity(2, 2)};
  if (delta > 0.0) ops.push_back(std::sqrt(delta) * pauli_z());
  return QuantumChannel("deph(" + format_value(delta) + ")", std::move(ops));
}

QuantumChannel deph2(double delta2) {
  require_range(delta2, 0.0, 0.75, "deph2 delta2");
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix z = pauli_z();
  std::vector<Matrix> ops{std::sqrt(1.0 - delta2) * Matrix::Identity(4, 4)};
  if (delta2 > 0.0) {
    const double w = std::sqrt(delta2 / 3.0);
    ops.push_back(w * kron(z, id));
    ops.push_back(w * kron(id, z));
    ops.push_back(w * kron(z, z));
  }
  return QuantumChannel("deph2(" + format_value(delta2) + ")", std::move(ops));
}

QuantumChannel decay_channel(double t1, double t2, double p_excited, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("decay duration must be >= 0");
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    throw ValidationError("decay needs positive t1 and t2");
  }
  const double gamma = 1.0 - std::exp(-dt / t1);
  const double delta = 0.5 * (1.0 - std::exp(-dt / t2));
  return gamp(gamma, p_excited)
      .then(deph(delta), "E(" + format_duration(dt) + ")");
}

Matrix crosstalk_unitary(double beta, double duration) {
  if (!(duration >= 0.0)) throw ValidationError("crosstalk duration must be >= 0");
  const double phase = beta * duration;
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = std::exp(-kI * phase);
  u(1, 1) = std::exp(kI * phase);
  u(2, 2) = std::exp(kI * phase);
  u(3, 3) = std::exp(-kI * phase);
  return u;
}

double delta1_from_fidelity(double fidelity) {
  require_range(fidelity, 2.0 / 3.0, 1.0, "single-qubit fidelity");
  return 1.5 * (1.0 - fidelity);
}

double delta2_from_fidelity(double fidelity) {
  require_range(fidelity, 0.4, 1.0, "cz fidelity");
  return 1.25 * (1.0 - fidelity);
}

void validate_confusion(const ConfusionMatrix& m) {
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      if (!(m[k][l] >= 0.0 && m[k][l] <= 1.0)) {
        throw ValidationError("confusion entries must lie in [0, 1]");
      }
    }
  }
  for (int l = 0; l < 2; ++l) {
    if (std::abs(m[0][l] + m[1][l] - 1.0) > 1e-9) {
      throw ValidationError("confusion column " + std::to_string(l) +
                            " does not sum to 1");
    }
  }
}

Matrix gate_unitary(const Gate& gate) {
  const double h = gate.angle / 2.0;
  Matrix u = Matrix::Zero(2, 2);
  switch (gate.kind) {
    case GateKind::rx:
      u(0, 0) = std::cos(h);
      u(0, 1) = -kI * std::sin(h);
      u(1, 0) = -kI * std::sin(h);
      u(1, 1) = std::cos(h);
      return u;
    case GateKind::ry:
      u(0, 0) = std::cos(h);
      u(0, 1) = -std::sin(h);
      u(1, 0) = std::sin(h);
      u(1, 1) = std::cos(h);
      return u;
    case GateKind::rz:
      u(0, 0) = std::exp(-kI * h);
      u(1, 1) = std::exp(kI * h);
      return u;
    case GateKind::cz: {
      Matrix cz = Matrix::Identity(4, 4);
      cz(3, 3) = -1.0;
      return cz;
    }
    default:
      throw ValidationError("gate '" + describe(gate) + "' has no unitary");
  }
}

}  // namespace twin
