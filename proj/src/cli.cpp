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

#include "twin/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "twin/benchmarks.hpp"
#include "twin/config.hpp"
#include "twin/emulator.hpp"
#include "twin/errors.hpp"
#include "twin/fitter.hpp"

namespace twin {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kConfigDirEnv = "TWIN_CONFIG_DIR";

// Relative paths that do not exist in the working directory are looked up
// in $TWIN_CONFIG_DIR.
fs::path locate(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute() || fs::exists(p)) return p;
  if (const char* dir = std::getenv(kConfigDirEnv); dir && *dir) {
    fs::path alt = fs::path(dir) / p;
    if (fs::exists(alt)) return alt;
  }
  return p;
}

std::string default_device() {
  if (const char* dir = std::getenv(kConfigDirEnv); dir && *dir) {
    return (fs::path(dir) / "device.toml").string();
  }
  return {};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationError("cannot write " + path.string());
  out << text;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw SimulationError("cannot create directory " + dir.string());
}

Json params_json(const NoiseParams& p) {
  Json j;
  j["coupling_mode"] = coupling_mode_name(p.coupling_mode);
  j["j_khz"] = p.shared_j / 1e3;
  Json pair = Json::object();
  for (const auto& [e, v] : p.pair_j) pair[edge_key(e)] = v / 1e3;
  j["pair_j_khz"] = pair;
  Json cz = Json::object();
  for (const auto& [e, v] : p.cz_fidelity) cz[edge_key(e)] = v;
  j["cz_fidelity"] = cz;
  j["toggles"] = to_string(p.toggles);
  return j;
}

std::string fmt(double v) { return Json(v).dump(); }

NoiseParams base_params(const DeviceModel& device, const std::string& params_path) {
  return params_path.empty() ? NoiseParams::from_device(device)
                             : load_params(locate(params_path), device);
}

// ---------------------------------------------------------------------------

struct EmulateArgs {
  std::string device = default_device();
  std::vector<std::string> circuits;
  bool suite = false;
  std::string toggles;
  std::string params;
  std::uint64_t seed = 42;
  std::uint64_t shots = 100000;
  std::string out = "emulate_out";
  bool no_measure_decay = false;
  int threads = 0;
};

int cmd_emulate(const EmulateArgs& a, std::ostream& out) {
  if (a.device.empty()) throw ValidationError("no device given (--device or $TWIN_CONFIG_DIR)");
  if (a.shots < 1) throw ValidationError("--shots must be >= 1");
  const DeviceModel device = load_device(locate(a.device));
  NoiseParams params = base_params(device, a.params);
  if (!a.toggles.empty()) params.toggles = parse_toggles(a.toggles);

  std::vector<Circuit> circuits;
  if (a.suite) {
    for (const auto& spec : benchmark_suite(device)) {
      circuits.push_back(benchmark_circuit(spec, device));
    }
  }
  for (const auto& path : a.circuits) circuits.push_back(load_circuit(locate(path)));
  if (circuits.empty()) throw ValidationError("no circuits given (--circuit or --suite)");
  std::set<std::string> labels;
  for (const auto& c : circuits) {
    if (!labels.insert(c.label()).second) {
      throw ValidationError("duplicate circuit label '" + c.label() + "'");
    }
  }

  EmulationOptions opts;
  opts.transpile.decay_during_measurement = !a.no_measure_decay;
  opts.shots = a.shots;
  opts.seed = a.seed;
  NoiseParams ideal = params;
  ideal.toggles = NoiseToggles::all_off();

  struct Outcome {
    EmulationResult result;
    ShotDistribution ideal;
  };
  std::vector<Outcome> outcomes(circuits.size());
  parallel_for(circuits.size(), a.threads, [&](std::size_t i) {
    outcomes[i].result = emulate(circuits[i], device, params, opts);
    EmulationOptions ideal_opts = opts;
    ideal_opts.shots.reset();
    outcomes[i].ideal = emulate(circuits[i], device, ideal, ideal_opts).exact;
  });

  const fs::path dir(a.out);
  ensure_dir(dir);
  Json summary;
  summary["device"] = device.name();
  summary["device_hash"] = device_hash(device);
  summary["params"] = params_json(params);
  summary["seed"] = a.seed;
  summary["shots"] = a.shots;
  Json rows = Json::array();
  std::string csv = "# device_hash=" + device_hash(device) + "\n" +
                    "circuit,width,tvd_exact_vs_ideal,tvd_shots_vs_ideal\n";
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const auto& r = outcomes[i].result;
    const std::string& label = circuits[i].label();
    write_text(dir / (label + ".exact.json"), to_json(r.exact));
    write_text(dir / (label + ".shots.json"), to_json(*r.sampled));
    write_text(dir / (label + ".schedule.txt"), to_text(r.noisy));
    const double t_exact = tvd(r.exact, outcomes[i].ideal);
    const double t_shots = tvd(*r.sampled, outcomes[i].ideal);
    Json row;
    row["circuit"] = label;
    row["width"] = r.exact.width();
    row["tvd_exact_vs_ideal"] = t_exact;
    row["tvd_shots_vs_ideal"] = t_shots;
    rows.push_back(row);
    csv += label + "," + std::to_string(r.exact.width()) + "," + fmt(t_exact) + "," +
           fmt(t_shots) + "\n";
    out << label << ": tvd vs ideal " << fmt(t_exact) << " (exact), " << fmt(t_shots)
        << " (" << a.shots << " shots)\n";
  }
  summary["circuits"] = rows;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_text(dir / "summary.csv", csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string config;
  std::string out;
  int threads = -1;
  int generations = -1;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  FitConfig cfg = load_fit_config(locate(a.config));
  if (!a.out.empty()) cfg.output = a.out;
  if (a.threads >= 0) cfg.de.threads = a.threads;
  if (a.generations >= 0) cfg.de.generations = a.generations;

  const DeviceModel device = load_device(cfg.device);
  NoiseParams base = cfg.base_params ? load_params(*cfg.base_params, device)
                                     : NoiseParams::from_device(device);
  base.toggles = cfg.toggles;
  base.coupling_mode = cfg.coupling_mode;
  const auto parameters = default_parameters(device, cfg.coupling_mode, cfg.bounds);
  const auto clusters = load_reference_clusters(cfg.references);
  const auto circuits = resolve_circuits(device, cfg.circuits);
  DatasetSplit split;
  FitProblem problem = build_fit_problem(device, base, parameters, clusters, circuits,
                                         cfg.train_fraction, cfg.train_max_qubits, &split);
  problem.shots_per_eval = cfg.shots_per_eval;
  problem.eval_seed = cfg.seed;

  out << "clusters: " << clusters.size() << ", training on " << split.train_clusters.size()
      << " (";
  for (std::size_t i = 0; i < split.train_clusters.size(); ++i) {
    out << (i ? ", " : "") << split.train_clusters[i];
  }
  out << ")\ntrain circuits (<= " << cfg.train_max_qubits << " qubits): " << split.train.size()
      << ", test circuits: " << split.test.size() << "\n";

  const FitResult result = fit(problem, cfg.de, cfg.seed);
  const auto ablation = ablation_report(result.best_params, problem);

  const fs::path dir = cfg.output;
  ensure_dir(dir);
  Json r;
  r["device"] = device.name();
  r["device_hash"] = device_hash(device);
  r["seed"] = result.seed;
  r["coupling_mode"] = coupling_mode_name(cfg.coupling_mode);
  r["shots_per_eval"] = cfg.shots_per_eval ? Json(*cfg.shots_per_eval) : Json("exact");
  r["de"] = {{"population", cfg.de.population > 0 ? cfg.de.population
                                                  : static_cast<int>(15 * parameters.size())},
             {"weight", cfg.de.weight},
             {"crossover", cfg.de.crossover},
             {"generations", cfg.de.generations}};
  Json fitted = Json::array();
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    const auto& s = parameters[i];
    const double scale = s.kind == ParameterSpec::Kind::cz_fidelity ? 1.0 : 1e-3;
    fitted.push_back({{"name", s.name()},
                      {"unit", s.kind == ParameterSpec::Kind::cz_fidelity ? "" : "kHz"},
                      {"value", result.best_x[i] * scale},
                      {"lower", s.lower * scale},
                      {"upper", s.upper * scale},
                      {"prior", s.prior * scale}});
  }
  r["parameters"] = fitted;
  r["params"] = params_json(result.best_params);
  r["train_cost"] = result.train_cost;
  r["test_cost"] = result.test_cost;
  r["evaluations"] = result.evaluations;
  r["history"] = result.history;
  write_text(dir / "fit_result.json", r.dump(2) + "\n");
  save_params(result.best_params, dir / "fitted_params.toml");
  write_text(dir / "parameters.txt", parameter_table(result.best_params, device));

  std::string csv = "# device_hash=" + device_hash(device) + "\nconfiguration,mean_test_tvd\n";
  for (const auto& row : ablation) csv += row.name + "," + fmt(row.mean_tvd) + "\n";
  write_text(dir / "ablation.csv", csv);

  Json sj;
  sj["train_fraction"] = cfg.train_fraction;
  sj["train_max_qubits"] = cfg.train_max_qubits;
  Json names = Json::array();
  for (const auto& c : clusters) names.push_back(c.name);
  sj["clusters"] = names;
  sj["train_clusters"] = split.train_clusters;
  sj["train"] = split.train;
  sj["test"] = split.test;
  write_text(dir / "split.json", sj.dump(2) + "\n");

  out << "train cost " << fmt(result.train_cost) << ", test cost " << fmt(result.test_cost)
      << "\n"
      << parameter_table(result.best_params, device);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string device = default_device();
  std::string params;
  std::string refs;
  std::string circuits;
  std::string out = "report_out";
  int threads = 0;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  if (a.device.empty()) throw ValidationError("no device given (--device or $TWIN_CONFIG_DIR)");
  const DeviceModel device = load_device(locate(a.device));
  const NoiseParams params = base_params(device, a.params);
  const auto clusters = load_reference_clusters(locate(a.refs));
  std::optional<fs::path> circuit_dir;
  if (!a.circuits.empty()) circuit_dir = locate(a.circuits);
  const auto circuits = resolve_circuits(device, circuit_dir);

  std::set<std::string> expected;
  for (const auto& c : clusters) {
    for (const auto& [label, d] : c.circuits) expected.insert(label);
  }

  // Every entry goes into the test set so the ablation rows cover it all.
  std::vector<FitProblem> problems;
  for (const auto& c : clusters) {
    FitProblem p = build_fit_problem(device, params, {}, {c}, circuits, 1.0, 0);
    problems.push_back(std::move(p));
  }
  std::vector<std::vector<AblationRow>> rows(problems.size());
  parallel_for(problems.size(), a.threads,
               [&](std::size_t i) { rows[i] = ablation_report(params, problems[i]); });

  const fs::path dir(a.out);
  ensure_dir(dir);
  std::string csv = "# device_hash=" + device_hash(device) + "\ncluster,index,complete,circuits";
  for (const auto& r : rows.front()) csv += "," + r.name;
  csv += "\n";
  Json table = Json::array();
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const bool complete = clusters[i].circuits.size() == expected.size();
    csv += clusters[i].name + "," + std::to_string(i) + "," + (complete ? "true" : "false") +
           "," + std::to_string(clusters[i].circuits.size());
    Json row;
    row["cluster"] = clusters[i].name;
    row["complete"] = complete;
    Json missing = Json::array();
    for (const auto& label : expected) {
      if (!clusters[i].circuits.count(label)) missing.push_back(label);
    }
    row["missing"] = missing;
    for (const auto& r : rows[i]) {
      csv += "," + fmt(r.mean_tvd);
      row[r.name] = r.mean_tvd;
    }
    csv += "\n";
    table.push_back(row);
    out << clusters[i].name << (complete ? "" : " (incomplete)") << ": mean tvd "
        << fmt(rows[i].front().mean_tvd) << "\n";
  }
  write_text(dir / "tvd_over_time.csv", csv);
  Json report;
  report["device"] = device.name();
  report["device_hash"] = device_hash(device);
  report["params"] = params_json(params);
  report["clusters"] = table;
  write_text(dir / "report.json", report.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calibration-driven noise emulation of a small transmon device", "twin"};
  app.require_subcommand(1);

  EmulateArgs ea;
  auto* emulate_cmd = app.add_subcommand("emulate", "Emulate circuits on a device model");
  emulate_cmd->add_option("--device", ea.device, "Calibration file (TOML)");
  emulate_cmd->add_option("--circuit", ea.circuits, "Circuit file; repeatable");
  emulate_cmd->add_flag("--suite", ea.suite, "Emulate the benchmark suite");
  emulate_cmd->add_option("--toggles", ea.toggles, "e.g. all, none, no_crosstalk,no_spam");
  emulate_cmd->add_option("--params", ea.params, "Noise parameter file (TOML)");
  emulate_cmd->add_option("--seed", ea.seed, "Sampling seed");
  emulate_cmd->add_option("--shots", ea.shots, "Shots per circuit");
  emulate_cmd->add_option("--out", ea.out, "Output directory");
  emulate_cmd->add_flag("--no-measure-decay", ea.no_measure_decay,
                        "No idle decay during the measurement layer");
  emulate_cmd->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit noise parameters to reference data");
  fit_cmd->add_option("config", fa.config, "Fit configuration (TOML)")->required();
  fit_cmd->add_option("--out", fa.out, "Output directory (overrides the config)");
  fit_cmd->add_option("--threads", fa.threads, "Worker threads (0 = all cores)");
  fit_cmd->add_option("--generations", fa.generations, "Override DE generations");

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "Mean TVD per reference cluster");
  report_cmd->add_option("--device", ra.device, "Calibration file (TOML)");
  report_cmd->add_option("--params", ra.params, "Noise parameter file (TOML)");
  report_cmd->add_option("--refs", ra.refs, "Directory of reference clusters")->required();
  report_cmd->add_option("--circuits", ra.circuits, "Directory of circuit files");
  report_cmd->add_option("--out", ra.out, "Output directory");
  report_cmd->add_option("--threads", ra.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (emulate_cmd->parsed()) return cmd_emulate(ea, out);
    if (fit_cmd->parsed()) return cmd_fit(fa, out);
    if (report_cmd->parsed()) return cmd_report(ra, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace twin
