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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twin/distribution.hpp"
#include "twin/schedule.hpp"
#include "twin/transpile.hpp"

namespace twin {

/// One free parameter of a fit and its search interval.
struct ParameterSpec {
  enum class Kind { shared_j, pair_j, cz_fidelity };

  Kind kind = Kind::shared_j;
  Edge edge{};  // pair_j and cz_fidelity only
  double lower = 0.0;
  double upper = 0.0;
  double prior = 0.0;  // calibration value used to break ties

  std::string name() const;
};

struct ParameterBounds {
  double j_max = 60e6;  // Hz
  double cz_lower = 0.8;
  double cz_upper = 1.0;
};

/// Shared mode: one J plus the CZ fidelity of every edge between active
/// qubits. Per-pair mode: one J per coupling edge instead of the shared one.
std::vector<ParameterSpec> default_parameters(const DeviceModel& device,
                                              CouplingMode mode,
                                              const ParameterBounds& bounds = {});

/// Reference data for one circuit, scheduled once up front.
struct FitEntry {
  std::string label;
  ScheduledCircuit scheduled;
  ShotDistribution reference;
};

struct FitProblem {
  DeviceModel device;
  /// Values of everything not being fitted, plus the toggles.
  NoiseParams base;
  std::vector<ParameterSpec> parameters;
  std::vector<FitEntry> train;
  std::vector<FitEntry> test;
  /// Sample the emulated distribution with this many shots; exact when unset.
  std::optional<std::uint64_t> shots_per_eval;
  std::uint64_t eval_seed = 0;
  TranspileOptions transpile;

  /// base with the free parameters overwritten by `x`.
  NoiseParams params_at(std::span<const double> x) const;
  /// Bounds finite and ordered, train/test disjoint by label.
  void validate() const;
};

/// Mean TVD between emulated and reference distributions of `entries`.
/// The sum runs over sorted terms so the result ignores entry order.
double mean_tvd(const NoiseParams& params, const FitProblem& problem,
                const std::vector<FitEntry>& entries);

/// Mean train-set TVD.
double cost(const NoiseParams& params, const FitProblem& problem);

struct DeConfig {
  int population = 0;  // 0 means 15 per free parameter
  double weight = 0.7;     // differential weight F
  double crossover = 0.9;  // CR
  int generations = 200;
  int threads = 0;  // 0 means hardware concurrency
};

struct FitResult {
  NoiseParams best_params;
  std::vector<double> best_x;
  double train_cost = 0.0;
  double test_cost = 0.0;
  /// Best train cost after initialisation and after each generation.
  std::vector<double> history;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
};

/// DE/rand/1/bin with clipping to bounds. Deterministic for a given seed and
/// independent of the thread count. The pick among equally good members is
/// the one closest to the priors (distance normalised by bound width).
FitResult fit(const FitProblem& problem, const DeConfig& config, std::uint64_t seed);

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct AblationRow {
  std::string name;
  NoiseToggles toggles;
  double mean_tvd = 0.0;
};

/// Mean test TVD for the full model and with each error family switched off.
std::vector<AblationRow> ablation_report(const NoiseParams& params,
                                         const FitProblem& problem);

/// Per-edge table of CZ fidelity and always-on strength in kHz.
std::string parameter_table(const NoiseParams& params, const DeviceModel& device);

}  // namespace twin
