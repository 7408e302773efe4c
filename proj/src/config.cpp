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

#include "twin/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "toml_util.hpp"
#include "twin/benchmarks.hpp"
#include "twin/errors.hpp"

namespace twin {

namespace fs = std::filesystem;
using detail::format_double;
using detail::parse_fail;
using detail::reject_unknown_keys;

namespace {

constexpr double kKHz = 1e3;

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(std::string("cannot open ") + what + ": " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Edge require_edge(const DeviceModel& device, std::string_view key,
                  std::string_view source, const std::string& where) {
  auto e = parse_edge_key(key);
  if (!e || !device.has_edge(e->first, e->second)) {
    parse_fail(source, where + ": '" + std::string(key) + "' is not a coupling edge");
  }
  return *e;
}

double number(const toml::node& node, std::string_view source, const std::string& where) {
  if (auto v = node.value<double>()) return *v;
  parse_fail(source, where + " must be a number");
}

std::pair<double, double> number_pair(const toml::table& t, std::string_view key,
                                      std::string_view source, const std::string& where) {
  const auto* arr = t.get_as<toml::array>(key);
  if (arr == nullptr || arr->size() != 2) {
    parse_fail(source, where + "." + std::string(key) + " must be [lower, upper]");
  }
  const double lo = number((*arr)[0], source, where + "." + std::string(key));
  const double hi = number((*arr)[1], source, where + "." + std::string(key));
  return {lo, hi};
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Label of a reference file and its preference rank (lower wins).
std::pair<std::string, int> reference_label(const fs::path& file) {
  std::string stem = file.stem().string();
  for (auto [suffix, rank] : {std::pair{".shots", 1}, std::pair{".exact", 2}}) {
    const std::string s = suffix;
    if (stem.size() > s.size() && stem.ends_with(s)) {
      return {stem.substr(0, stem.size() - s.size()), rank};
    }
  }
  return {stem, 0};
}

ReferenceCluster load_cluster(const fs::path& dir, std::string name) {
  ReferenceCluster cluster{std::move(name), {}};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& p = entry.path();
    if (p.extension() != ".json" || p.filename() == "summary.json") continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, int> rank;
  for (const auto& p : files) {
    auto [label, r] = reference_label(p);
    auto it = rank.find(label);
    if (it != rank.end() && it->second <= r) continue;
    rank[label] = r;
    cluster.circuits[label] = load_distribution(p);
  }
  return cluster;
}

}  // namespace

NoiseParams parse_params(std::string_view text, const DeviceModel& device,
                         std::string_view source) {
  const toml::table root = detail::parse_toml(text, source);
  reject_unknown_keys(root, {"noise"}, source, "top level");
  NoiseParams p = NoiseParams::from_device(device);
  const auto* noise = root.get_as<toml::table>("noise");
  if (noise == nullptr) parse_fail(source, "missing [noise] section");
  reject_unknown_keys(*noise,
                      {"coupling_mode", "j_khz", "pair_j_khz", "cz_fidelity", "toggles"},
                      source, "[noise]");
  if (const auto* mode = noise->get("coupling_mode")) {
    auto s = mode->value<std::string>();
    if (!s) parse_fail(source, "[noise].coupling_mode must be a string");
    try {
      p.coupling_mode = coupling_mode_from_name(*s);
    } catch (const ValidationError& err) {
      parse_fail(source, err.what());
    }
  }
  if (const auto* j = noise->get("j_khz")) {
    p.shared_j = number(*j, source, "[noise].j_khz") * kKHz;
  }
  if (const auto* t = noise->get_as<toml::table>("pair_j_khz")) {
    for (const auto& [key, node] : *t) {
      const std::string where = "[noise.pair_j_khz]." + std::string(key.str());
      p.pair_j[require_edge(device, key.str(), source, where)] =
          number(node, source, where) * kKHz;
    }
  }
  if (const auto* t = noise->get_as<toml::table>("cz_fidelity")) {
    for (const auto& [key, node] : *t) {
      const std::string where = "[noise.cz_fidelity]." + std::string(key.str());
      p.cz_fidelity[require_edge(device, key.str(), source, where)] =
          number(node, source, where);
    }
  }
  if (const auto* t = noise->get_as<toml::table>("toggles")) {
    const std::pair<std::string_view, bool NoiseToggles::*> names[] = {
        {"single_qubit_gate_error", &NoiseToggles::single_qubit_gate_error},
        {"two_qubit_gate_error", &NoiseToggles::two_qubit_gate_error},
        {"spam_error", &NoiseToggles::spam_error},
        {"passive_decay", &NoiseToggles::passive_decay},
        {"crosstalk", &NoiseToggles::crosstalk},
    };
    for (const auto& [key, node] : *t) {
      auto it = std::find_if(std::begin(names), std::end(names),
                             [&](const auto& n) { return n.first == key.str(); });
      if (it == std::end(names)) {
        parse_fail(source, "[noise.toggles]: unknown toggle '" + std::string(key.str()) + "'");
      }
      auto v = node.value<bool>();
      if (!v) parse_fail(source, "[noise.toggles]." + std::string(key.str()) + " must be a boolean");
      p.toggles.*(it->second) = *v;
    }
  }
  p.validate();
  return p;
}

NoiseParams load_params(const fs::path& path, const DeviceModel& device) {
  return parse_params(read_file(path, "parameter file"), device, path.string());
}

std::string params_to_toml(const NoiseParams& params) {
  std::ostringstream os;
  os << "[noise]\n";
  os << "coupling_mode = \"" << coupling_mode_name(params.coupling_mode) << "\"\n";
  os << "j_khz = " << format_double(params.shared_j / kKHz) << "\n";
  os << "\n[noise.pair_j_khz]\n";
  for (const auto& [e, j] : params.pair_j) {
    os << "\"" << edge_key(e) << "\" = " << format_double(j / kKHz) << "\n";
  }
  os << "\n[noise.cz_fidelity]\n";
  for (const auto& [e, f] : params.cz_fidelity) {
    os << "\"" << edge_key(e) << "\" = " << format_double(f) << "\n";
  }
  const auto& t = params.toggles;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "\n[noise.toggles]\n"
     << "single_qubit_gate_error = " << b(t.single_qubit_gate_error) << "\n"
     << "two_qubit_gate_error = " << b(t.two_qubit_gate_error) << "\n"
     << "spam_error = " << b(t.spam_error) << "\n"
     << "passive_decay = " << b(t.passive_decay) << "\n"
     << "crosstalk = " << b(t.crosstalk) << "\n";
  return os.str();
}

void save_params(const NoiseParams& params, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write parameter file: " + path.string());
  out << params_to_toml(params);
}

FitConfig parse_fit_config(std::string_view text, const fs::path& base_dir,
                           std::string_view source) {
  const toml::table root = detail::parse_toml(text, source);
  reject_unknown_keys(root,
                      {"device", "references", "circuits", "base_params", "output",
                       "seed", "coupling_mode", "toggles", "shots_per_eval", "split",
                       "bounds", "de"},
                      source, "top level");
  FitConfig c;
  auto str = [&](std::string_view key) -> std::optional<std::string> {
    const auto* node = root.get(key);
    if (node == nullptr) return std::nullopt;
    auto v = node->value<std::string>();
    if (!v) parse_fail(source, std::string(key) + " must be a string");
    return v;
  };
  auto dev = str("device");
  auto refs = str("references");
  if (!dev) parse_fail(source, "missing key 'device'");
  if (!refs) parse_fail(source, "missing key 'references'");
  c.device = resolve(base_dir, *dev);
  c.references = resolve(base_dir, *refs);
  if (auto v = str("circuits")) c.circuits = resolve(base_dir, *v);
  if (auto v = str("base_params")) c.base_params = resolve(base_dir, *v);
  c.output = resolve(base_dir, str("output").value_or(c.output.string()));
  if (const auto* node = root.get("seed")) {
    auto v = node->value<std::int64_t>();
    if (!v || *v < 0) parse_fail(source, "seed must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(*v);
  }
  try {
    if (auto v = str("coupling_mode")) c.coupling_mode = coupling_mode_from_name(*v);
    if (auto v = str("toggles")) c.toggles = parse_toggles(*v);
  } catch (const ValidationError& err) {
    parse_fail(source, err.what());
  }
  if (const auto* node = root.get("shots_per_eval")) {
    if (auto s = node->value<std::string>()) {
      if (*s != "exact") parse_fail(source, "shots_per_eval must be \"exact\" or a count");
    } else if (auto n = node->value<std::int64_t>(); n && *n >= 1) {
      c.shots_per_eval = static_cast<std::uint64_t>(*n);
    } else {
      parse_fail(source, "shots_per_eval must be \"exact\" or a count >= 1");
    }
  }
  if (const auto* t = root.get_as<toml::table>("split")) {
    reject_unknown_keys(*t, {"train_fraction", "train_max_qubits"}, source, "[split]");
    if (const auto* n = t->get("train_fraction")) {
      c.train_fraction = number(*n, source, "[split].train_fraction");
    }
    if (const auto* n = t->get("train_max_qubits")) {
      auto v = n->value<std::int64_t>();
      if (!v) parse_fail(source, "[split].train_max_qubits must be an integer");
      c.train_max_qubits = static_cast<int>(*v);
    }
  }
  if (const auto* t = root.get_as<toml::table>("bounds")) {
    reject_unknown_keys(*t, {"j_khz", "cz_fidelity"}, source, "[bounds]");
    if (t->contains("j_khz")) {
      auto [lo, hi] = number_pair(*t, "j_khz", source, "[bounds]");
      if (lo != 0.0) parse_fail(source, "[bounds].j_khz lower bound must be 0");
      c.bounds.j_max = hi * kKHz;
    }
    if (t->contains("cz_fidelity")) {
      auto [lo, hi] = number_pair(*t, "cz_fidelity", source, "[bounds]");
      c.bounds.cz_lower = lo;
      c.bounds.cz_upper = hi;
    }
  }
  if (const auto* t = root.get_as<toml::table>("de")) {
    reject_unknown_keys(*t, {"population", "weight", "crossover", "generations", "threads"},
                        source, "[de]");
    auto integer = [&](std::string_view key, int& out) {
      if (const auto* n = t->get(key)) {
        auto v = n->value<std::int64_t>();
        if (!v) parse_fail(source, "[de]." + std::string(key) + " must be an integer");
        out = static_cast<int>(*v);
      }
    };
    integer("population", c.de.population);
    integer("generations", c.de.generations);
    integer("threads", c.de.threads);
    if (const auto* n = t->get("weight")) c.de.weight = number(*n, source, "[de].weight");
    if (const auto* n = t->get("crossover")) {
      c.de.crossover = number(*n, source, "[de].crossover");
    }
  }

  if (!(c.train_fraction > 0.0 && c.train_fraction <= 1.0)) {
    throw ValidationError("train_fraction must lie in (0, 1]");
  }
  if (c.train_max_qubits < 1) throw ValidationError("train_max_qubits must be >= 1");
  if (!(c.bounds.j_max >= 0.0) || !std::isfinite(c.bounds.j_max)) {
    throw ValidationError("J upper bound must be finite and >= 0");
  }
  if (!(c.bounds.cz_lower >= 0.4 && c.bounds.cz_lower <= c.bounds.cz_upper &&
        c.bounds.cz_upper <= 1.0)) {
    throw ValidationError("CZ fidelity bounds must satisfy 0.4 <= lower <= upper <= 1");
  }
  if (c.de.population != 0 && c.de.population < 4) {
    throw ValidationError("DE population must be 0 (automatic) or >= 4");
  }
  if (c.de.generations < 0) throw ValidationError("DE generations must be >= 0");
  if (!(c.de.weight > 0.0 && c.de.weight <= 2.0)) {
    throw ValidationError("DE weight must lie in (0, 2]");
  }
  if (!(c.de.crossover >= 0.0 && c.de.crossover <= 1.0)) {
    throw ValidationError("DE crossover must lie in [0, 1]");
  }
  return c;
}

FitConfig load_fit_config(const fs::path& path) {
  return parse_fit_config(read_file(path, "fit config"), path.parent_path(), path.string());
}

std::vector<ReferenceCluster> load_reference_clusters(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ParseError("reference directory not found: " + dir.string());
  }
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<ReferenceCluster> clusters;
  if (subdirs.empty()) {
    clusters.push_back(load_cluster(dir, fs::absolute(dir).lexically_normal().filename().string()));
  } else {
    for (const auto& d : subdirs) clusters.push_back(load_cluster(d, d.filename().string()));
  }
  std::erase_if(clusters, [](const ReferenceCluster& c) { return c.circuits.empty(); });
  if (clusters.empty()) {
    throw ValidationError("no reference distributions under " + dir.string());
  }
  return clusters;
}

std::map<std::string, Circuit> resolve_circuits(
    const DeviceModel& device, const std::optional<fs::path>& circuits_dir) {
  std::map<std::string, Circuit> out;
  if (device.active_qubits().size() >= 4) {
    try {
      for (const auto& spec : benchmark_suite(device)) {
        out.emplace(spec.label, benchmark_circuit(spec, device));
      }
    } catch (const ValidationError&) {
      // Devices without a star of four active qubits only use circuit files.
    }
  }
  if (circuits_dir) {
    if (!fs::is_directory(*circuits_dir)) {
      throw ParseError("circuit directory not found: " + circuits_dir->string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(*circuits_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      Circuit c = load_circuit(p);
      const std::string label = c.label();
      out.insert_or_assign(label, std::move(c));
    }
  }
  return out;
}

FitProblem build_fit_problem(const DeviceModel& device, const NoiseParams& base,
                             const std::vector<ParameterSpec>& parameters,
                             const std::vector<ReferenceCluster>& clusters,
                             const std::map<std::string, Circuit>& circuits,
                             double train_fraction, int train_max_qubits,
                             DatasetSplit* split) {
  if (clusters.empty()) throw ValidationError("no reference clusters");
  FitProblem problem{device, base, parameters, {}, {}, std::nullopt, 0, {}};
  const auto n_train = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(train_fraction * static_cast<double>(clusters.size()) - 1e-9)));
  DatasetSplit s;
  std::map<std::string, ScheduledCircuit> schedules;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& cluster = clusters[k];
    const bool train_cluster = k < n_train;
    if (train_cluster) s.train_clusters.push_back(cluster.name);
    for (const auto& [label, ref] : cluster.circuits) {
      auto it = circuits.find(label);
      if (it == circuits.end()) {
        throw ValidationError("reference '" + cluster.name + "/" + label +
                              "' has no matching circuit");
      }
      const Circuit& c = it->second;
      const int width = static_cast<int>(c.measured_qubits().size());
      if (ref.width() != width) {
        throw ValidationError("reference '" + cluster.name + "/" + label + "' has width " +
                              std::to_string(ref.width()) + " but the circuit measures " +
                              std::to_string(width) + " qubits");
      }
      auto sched = schedules.find(label);
      if (sched == schedules.end()) {
        sched = schedules.emplace(label, schedule_alap(c, device)).first;
      }
      FitEntry entry{cluster.name + "/" + label, sched->second, ref};
      if (train_cluster && width <= train_max_qubits) {
        s.train.push_back(entry.label);
        problem.train.push_back(std::move(entry));
      } else {
        s.test.push_back(entry.label);
        problem.test.push_back(std::move(entry));
      }
    }
  }
  if (split) *split = std::move(s);
  return problem;
}

}  // namespace twin
