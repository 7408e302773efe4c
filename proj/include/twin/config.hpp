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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twin/circuit.hpp"
#include "twin/fitter.hpp"

namespace twin {

/// Noise parameters file:
///
///   [noise]
///   coupling_mode = "shared"     # or "per_pair"
///   j_khz = 15.0                 # shared J
///   [noise.pair_j_khz]           # per-pair J, keys "u_v"
///   [noise.cz_fidelity]          # keys "u_v"
///   [noise.toggles]              # single_qubit_gate_error, ... = true/false
///
/// Missing entries keep the calibration defaults of `device`.
NoiseParams parse_params(std::string_view text, const DeviceModel& device,
                         std::string_view source = "<string>");
NoiseParams load_params(const std::filesystem::path& path, const DeviceModel& device);
std::string params_to_toml(const NoiseParams& params);
void save_params(const NoiseParams& params, const std::filesystem::path& path);

/// Settings of the `fit` command. Relative paths are resolved against the
/// directory of the config file.
struct FitConfig {
  std::filesystem::path device;
  std::filesystem::path references;
  std::optional<std::filesystem::path> circuits;
  std::optional<std::filesystem::path> base_params;
  std::filesystem::path output = "fit_out";
  std::uint64_t seed = 42;
  CouplingMode coupling_mode = CouplingMode::shared;
  NoiseToggles toggles;
  std::optional<std::uint64_t> shots_per_eval;
  double train_fraction = 0.125;
  int train_max_qubits = 3;
  ParameterBounds bounds;
  DeConfig de;
};

FitConfig parse_fit_config(std::string_view text, const std::filesystem::path& base_dir,
                           std::string_view source = "<string>");
FitConfig load_fit_config(const std::filesystem::path& path);

/// Reference distributions measured in one time window.
struct ReferenceCluster {
  std::string name;
  std::map<std::string, ShotDistribution> circuits;  // by circuit label
};

/// A directory with subdirectories holds one cluster per subdirectory, in
/// name order; otherwise the directory itself is a single cluster. Each
/// `*.json` file except summary.json is a distribution whose label is the
/// file stem without a `.shots` or `.exact` suffix. When several files give
/// the same label, the plain name wins over `.shots`, which wins over `.exact`.
std::vector<ReferenceCluster> load_reference_clusters(const std::filesystem::path& dir);

/// Circuits known by label: the device's benchmark suite plus every circuit
/// file in `circuits_dir` (which may override suite labels).
std::map<std::string, Circuit> resolve_circuits(
    const DeviceModel& device, const std::optional<std::filesystem::path>& circuits_dir);

struct DatasetSplit {
  std::vector<std::string> train_clusters;
  std::vector<std::string> train;  // "cluster/circuit"
  std::vector<std::string> test;
};

/// Train on circuits measuring at most `train_max_qubits` qubits from the
/// first ceil(train_fraction * clusters) clusters (at least one); all other
/// entries form the test set.
FitProblem build_fit_problem(const DeviceModel& device, const NoiseParams& base,
                             const std::vector<ParameterSpec>& parameters,
                             const std::vector<ReferenceCluster>& clusters,
                             const std::map<std::string, Circuit>& circuits,
                             double train_fraction, int train_max_qubits,
                             DatasetSplit* split = nullptr);

}  // namespace twin
