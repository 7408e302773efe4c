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

#include "twin/fitter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "twin/emulator.hpp"
#include "twin/errors.hpp"

namespace twin {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace

std::string ParameterSpec::name() const {
  switch (kind) {
    case Kind::shared_j: return "j";
    case Kind::pair_j: return "j_" + edge_key(edge);
    case Kind::cz_fidelity: return "cz_fidelity_" + edge_key(edge);
  }
  return "?";
}

std::vector<ParameterSpec> default_parameters(const DeviceModel& device,
                                              CouplingMode mode,
                                              const ParameterBounds& bounds) {
  const NoiseParams calib = NoiseParams::from_device(device);
  std::vector<ParameterSpec> out;
  if (mode == CouplingMode::shared) {
    out.push_back({ParameterSpec::Kind::shared_j, {}, 0.0, bounds.j_max,
                   std::min(calib.shared_j, bounds.j_max)});
  } else {
    for (const auto& e : device.edges()) {
      out.push_back({ParameterSpec::Kind::pair_j, e, 0.0, bounds.j_max,
                     std::min(calib.pair_j.at(e), bounds.j_max)});
    }
  }
  for (const auto& e : device.edges()) {
    if (!device.is_active(e.first) || !device.is_active(e.second)) continue;
    const auto& c = device.coupling(e);
    const double prior =
        std::clamp(c.cz_fidelity.value_or(bounds.cz_upper), bounds.cz_lower, bounds.cz_upper);
    out.push_back({ParameterSpec::Kind::cz_fidelity, e, bounds.cz_lower,
                   bounds.cz_upper, prior});
  }
  return out;
}

NoiseParams FitProblem::params_at(std::span<const double> x) const {
  if (x.size() != parameters.size()) {
    throw ValidationError("parameter vector has " + std::to_string(x.size()) +
                          " entries, expected " + std::to_string(parameters.size()));
  }
  NoiseParams p = base;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& spec = parameters[i];
    switch (spec.kind) {
      case ParameterSpec::Kind::shared_j:
        p.coupling_mode = CouplingMode::shared;
        p.shared_j = x[i];
        break;
      case ParameterSpec::Kind::pair_j:
        p.coupling_mode = CouplingMode::per_pair;
        p.pair_j[spec.edge] = x[i];
        break;
      case ParameterSpec::Kind::cz_fidelity:
        p.cz_fidelity[spec.edge] = x[i];
        break;
    }
  }
  return p;
}

void FitProblem::validate() const {
  if (parameters.empty()) throw ValidationError("fit has no free parameters");
  for (const auto& spec : parameters) {
    if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) ||
        spec.lower > spec.upper) {
      throw ValidationError("bounds of " + spec.name() + " must be finite and ordered");
    }
    if (spec.kind == ParameterSpec::Kind::cz_fidelity &&
        (spec.lower < 0.4 || spec.upper > 1.0)) {
      throw ValidationError("bounds of " + spec.name() + " must lie in [0.4, 1]");
    }
    if (spec.kind != ParameterSpec::Kind::cz_fidelity && spec.lower < 0.0) {
      throw ValidationError("bounds of " + spec.name() + " must be >= 0");
    }
  }
  if (train.empty()) throw ValidationError("fit has an empty training set");
  std::set<std::string> labels;
  for (const auto& e : train) labels.insert(e.label);
  for (const auto& e : test) {
    if (labels.count(e.label)) {
      throw ValidationError("circuit '" + e.label + "' is in both train and test sets");
    }
  }
}

double mean_tvd(const NoiseParams& params, const FitProblem& problem,
                const std::vector<FitEntry>& entries) {
  if (entries.empty()) return 0.0;
  std::vector<double> terms;
  terms.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    try {
      ShotDistribution d =
          emulate_exact(e.scheduled, problem.device, params, problem.transpile);
      if (problem.shots_per_eval) {
        d = sample(d, *problem.shots_per_eval, problem.eval_seed + i);
      }
      terms.push_back(tvd(d, e.reference));
    } catch (const std::exception& err) {
      throw SimulationError("circuit '" + e.label + "': " + err.what());
    }
  }
  return sorted_sum(terms) / static_cast<double>(terms.size());
}

double cost(const NoiseParams& params, const FitProblem& problem) {
  return mean_tvd(params, problem, problem.train);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

FitResult fit(const FitProblem& problem, const DeConfig& config, std::uint64_t seed) {
  problem.validate();
  const std::size_t dim = problem.parameters.size();
  const std::size_t np =
      config.population > 0 ? static_cast<std::size_t>(config.population) : 15 * dim;
  if (np < 4) throw ValidationError("differential evolution needs a population of >= 4");
  if (config.generations < 0) throw ValidationError("generations must be >= 0");
  if (!(config.weight > 0.0 && config.weight <= 2.0)) {
    throw ValidationError("differential weight must lie in (0, 2]");
  }
  if (!(config.crossover >= 0.0 && config.crossover <= 1.0)) {
    throw ValidationError("crossover rate must lie in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  const auto& specs = problem.parameters;
  std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
  for (auto& member : pop) {
    for (std::size_t j = 0; j < dim; ++j) {
      member[j] = specs[j].lower + uniform01(rng) * (specs[j].upper - specs[j].lower);
    }
  }

  FitResult result;
  result.seed = seed;
  std::vector<double> costs(np);
  auto evaluate = [&](const std::vector<std::vector<double>>& xs, std::vector<double>& out) {
    parallel_for(xs.size(), config.threads,
                 [&](std::size_t i) { out[i] = cost(problem.params_at(xs[i]), problem); });
    result.evaluations += xs.size();
  };
  evaluate(pop, costs);
  result.history.push_back(*std::min_element(costs.begin(), costs.end()));

  std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
  std::vector<double> trial_costs(np);
  for (int g = 0; g < config.generations; ++g) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r1, r2, r3;
      do { r1 = pick(rng, np); } while (r1 == i);
      do { r2 = pick(rng, np); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng, np); } while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t jrand = pick(rng, dim);
      for (std::size_t j = 0; j < dim; ++j) {
        const bool cross = uniform01(rng) < config.crossover || j == jrand;
        double v = pop[i][j];
        if (cross) {
          v = pop[r1][j] + config.weight * (pop[r2][j] - pop[r3][j]);
          v = std::clamp(v, specs[j].lower, specs[j].upper);
        }
        trials[i][j] = v;
      }
    }
    evaluate(trials, trial_costs);
    for (std::size_t i = 0; i < np; ++i) {
      if (trial_costs[i] <= costs[i]) {
        pop[i] = trials[i];
        costs[i] = trial_costs[i];
      }
    }
    result.history.push_back(*std::min_element(costs.begin(), costs.end()));
  }

  // Lowest cost; among members tied with it, the one nearest the priors.
  const double best = *std::min_element(costs.begin(), costs.end());
  const double tie = best + 1e-12 * std::max(1.0, std::abs(best));
  auto prior_distance = [&](const std::vector<double>& x) {
    double d = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double width = specs[j].upper - specs[j].lower;
      const double z = width > 0.0 ? (x[j] - specs[j].prior) / width : 0.0;
      d += z * z;
    }
    return d;
  };
  std::size_t chosen = np;
  for (std::size_t i = 0; i < np; ++i) {
    if (costs[i] > tie) continue;
    if (chosen == np || prior_distance(pop[i]) < prior_distance(pop[chosen])) chosen = i;
  }

  result.best_x = pop[chosen];
  result.best_params = problem.params_at(result.best_x);
  result.train_cost = costs[chosen];
  result.test_cost = mean_tvd(result.best_params, problem, problem.test);
  return result;
}

std::vector<AblationRow> ablation_report(const NoiseParams& params,
                                         const FitProblem& problem) {
  struct Variant {
    const char* name;
    bool NoiseToggles::*off;
  };
  const Variant variants[] = {
      {"full", nullptr},
      {"no_passive", &NoiseToggles::passive_decay},
      {"no_spam", &NoiseToggles::spam_error},
      {"no_2q", &NoiseToggles::two_qubit_gate_error},
      {"no_1q", &NoiseToggles::single_qubit_gate_error},
      {"no_always_on", &NoiseToggles::crosstalk},
  };
  std::vector<AblationRow> rows;
  for (const auto& v : variants) {
    NoiseParams p = params;
    if (v.off) p.toggles.*v.off = false;
    rows.push_back({v.name, p.toggles, mean_tvd(p, problem, problem.test)});
  }
  return rows;
}

std::string parameter_table(const NoiseParams& params, const DeviceModel& device) {
  const auto edges = device.edges();
  std::ostringstream os;
  auto row = [&](const std::string& head, auto cell) {
    os << std::left << std::setw(38) << head;
    for (const auto& e : edges) os << std::setw(10) << cell(e);
    os << "\n";
  };
  row("pair", [](const Edge& e) { return edge_key(e); });
  row("CZ fidelity", [&](const Edge& e) -> std::string {
    if (params.cz_fidelity.count(e)) return format_value(params.cz_fidelity.at(e));
    const auto& c = device.coupling(e);
    return c.cz_fidelity ? format_value(*c.cz_fidelity) : "--";
  });
  row("Always-on interaction strength [kHz]", [&](const Edge& e) {
    return format_value(params.j_for(device, e) / 1e3);
  });
  return os.str();
}

}  // namespace twin
