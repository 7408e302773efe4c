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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twin/gate.hpp"

namespace twin {

/// Readout confusion matrix, indexed [observed][prepared]: entry (k, l) is
/// the probability of reading k when l was prepared. Columns sum to one.
using ConfusionMatrix = std::array<std::array<double, 2>, 2>;

inline constexpr ConfusionMatrix kIdentityConfusion{{{1.0, 0.0}, {0.0, 1.0}}};

/// Undirected topology edge, stored with the smaller label first.
using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// "u_v" with u < v; the key used in calibration and parameter files.
std::string edge_key(const Edge& edge);
std::optional<Edge> parse_edge_key(std::string_view key);

// All quantities in SI units: Hz, seconds.
struct QubitCalibration {
  int index = 0;
  double frequency = 0.0;
  double anharmonicity = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double p_excited = 0.0;
  ConfusionMatrix confusion = kIdentityConfusion;
  double single_qubit_fidelity = 1.0;

  friend bool operator==(const QubitCalibration&, const QubitCalibration&) = default;
};

struct CouplingCalibration {
  int high = 0;  // higher-frequency endpoint (u)
  int low = 0;   // lower-frequency endpoint (v)
  double coupling_j = 0.0;  // Hz
  std::optional<double> cz_fidelity;

  Edge edge() const { return make_edge(high, low); }

  friend bool operator==(const CouplingCalibration&, const CouplingCalibration&) = default;
};

/// Immutable calibration snapshot of a fixed-coupling transmon device.
///
/// Construction validates every invariant and throws ValidationError naming
/// the offending qubit or pair. Coupling endpoints are reordered so that
/// `high` is the higher-frequency qubit.
class DeviceModel {
 public:
  DeviceModel(std::string name, std::vector<QubitCalibration> qubits,
              std::vector<CouplingCalibration> couplings,
              std::map<GateKind, double> durations,
              std::vector<int> active_qubits);

  const std::string& name() const { return name_; }
  int num_qubits() const { return static_cast<int>(qubits_.size()); }
  const std::vector<QubitCalibration>& qubits() const { return qubits_; }
  const QubitCalibration& qubit(int index) const;
  const std::vector<CouplingCalibration>& couplings() const {
    return couplings_;
  }
  /// Sorted by edge label.
  std::vector<Edge> edges() const;
  bool has_edge(int a, int b) const;
  const CouplingCalibration& coupling(const Edge& edge) const;
  std::vector<int> neighbors(int q) const;
  const std::vector<int>& active_qubits() const { return active_; }
  bool is_active(int q) const;

  const std::map<GateKind, double>& durations() const { return durations_; }
  /// Throws ValidationError for a gate kind without a calibrated duration.
  double duration(GateKind kind) const;

  friend bool operator==(const DeviceModel&, const DeviceModel&) = default;

 private:
  std::string name_;
  std::vector<QubitCalibration> qubits_;
  std::vector<CouplingCalibration> couplings_;
  std::map<GateKind, double> durations_;
  std::vector<int> active_;
};

/// Always-on ZZ rate in rad/s for detuning and anharmonicities in Hz:
/// 2*pi * J^2 * (1/(delta - alpha_u) - 1/(delta - alpha_v)).
double beta(double coupling_j, double detuning, double alpha_u,
            double alpha_v);

/// ZZ rate of a coupling edge using the calibrated J.
double beta(const DeviceModel& device, const Edge& edge);

/// ZZ rate of a coupling edge with J overridden.
double beta(const DeviceModel& device, const Edge& edge, double coupling_j);

DeviceModel parse_device(std::string_view toml_text,
                         std::string_view source = "<string>");
DeviceModel load_device(const std::filesystem::path& path);

/// Calibration-file text for a model; parse_device(to_toml(m)) == m up to
/// unit-conversion rounding.
std::string to_toml(const DeviceModel& device);
void save_device(const DeviceModel& device, const std::filesystem::path& path);

/// 16 hex digits of a 64-bit FNV-1a digest over to_toml(device).
std::string device_hash(const DeviceModel& device);

}  // namespace twin
