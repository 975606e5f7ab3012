// Copyright 2026 The spectomo Authors
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

// spectomo: generate spectral states, simulate interferometer scans and
// reconstruct density matrices from count tables.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectomo/spectomo.hpp"

#ifndef SPECTOMO_VERSION
#define SPECTOMO_VERSION "unknown"
#endif

namespace {

using namespace spectomo;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIncomplete = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return kExitUsage;
    case ErrorCode::missing_settings:
    case ErrorCode::calibration_missing:
      return kExitIncomplete;
    default:
      return kExitData;
  }
}

// Frequencies are grid units unless --units si, in which case they are rad/s
// and get divided by --omega-unit.
struct Units {
  std::string system = "grid";
  double omega_unit = 2.0 * std::numbers::pi * 1e9;

  bool si() const { return system == "si"; }
  double frequency(double x) const { return si() ? x / omega_unit : x; }
  double time(double x) const { return si() ? x * omega_unit : x; }
  double chirp(double x) const { return si() ? x * omega_unit * omega_unit : x; }

  void add_to(CLI::App* app) {
    app->add_option("--units", system, "Unit system of the physical inputs")
        ->check(CLI::IsMember({"grid", "si"}))
        ->capture_default_str();
    app->add_option("--omega-unit", omega_unit, "rad/s per grid unit with --units si")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  json to_json() const { return {{"system", system}, {"omega_unit", omega_unit}}; }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  json params = json::object();
  std::optional<std::uint64_t> seed;

  void write_for(const std::string& output) const {
    json doc{{"command", command},
             {"inputs", inputs},
             {"output", output},
             {"params", params},
             {"seed", seed ? json(*seed) : json(nullptr)},
             {"version", SPECTOMO_VERSION},
             {"timestamp", utc_timestamp()}};
    std::ofstream out(output + ".manifest.json");
    if (!out) throw Error(ErrorCode::format_error, "cannot write manifest for " + output);
    out << doc.dump(2) << '\n';
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::format_error, "cannot open '" + path + "' for writing");
  out << text;
}

std::string heatmap_csv(const SpectralDensityMatrix& rho) {
  std::string out = "i,j,omega_i,omega_j,abs_rho\n";
  const auto& grid = rho.grid();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    for (std::size_t j = 0; j < rho.size(); ++j) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_real(grid.omega(i)) + ',' +
             format_real(grid.omega(j)) + ',' + format_real(std::abs(rho(i, j))) + '\n';
    }
  }
  return out;
}

// One line per warning code.
void print_warnings(const Diagnostics& diags) {
  std::vector<std::string> seen;
  for (const auto& d : diags) {
    if (std::find(seen.begin(), seen.end(), d.code) != seen.end()) continue;
    seen.push_back(d.code);
    const auto repeats = std::count_if(diags.begin(), diags.end(),
                                       [&](const Diagnostic& o) { return o.code == d.code; });
    std::cerr << "warning [" << d.code << "]: " << d.message;
    if (repeats > 1) std::cerr << " (" << repeats << " occurrences)";
    std::cerr << '\n';
  }
}

void print_validation(const ValidationReport& v) {
  std::cout << "trace deviation:       " << v.trace_deviation << '\n'
            << "hermiticity deviation: " << v.hermiticity_deviation << '\n'
            << "min eigenvalue:        " << v.min_eigenvalue << '\n'
            << "validation:            " << (v.passed() ? "passed" : "FAILED") << '\n';
}

// gen-state

struct GenStateArgs {
  std::string kind;
  std::size_t n = 64;
  double span = 16.0;
  double center = 0.0;
  double omega0 = 0.0;
  double sigma = 1.0;
  std::optional<double> chirp;
  double separation = 4.0;
  double weight = 0.5;
  double jitter = 1.0;
  std::string out;
  std::string heatmap_out;
  Units units;
};

int run_gen_state(const GenStateArgs& a) {
  Diagnostics diags;
  const auto grid = make_grid(a.units.frequency(a.center), a.units.frequency(a.span), a.n);
  const double omega0 = a.units.frequency(a.omega0);
  const double sigma = a.units.frequency(a.sigma);
  std::optional<SpectralDensityMatrix> rho;
  if (a.kind == "gaussian") {
    rho = density_from_pure(gaussian_pure(grid, omega0, sigma, 0.0, &diags));
  } else if (a.kind == "chirped") {
    const double chirp = a.units.chirp(a.chirp.value_or(0.5));
    rho = density_from_pure(gaussian_pure(grid, omega0, sigma, chirp, &diags));
  } else if (a.kind == "mixture") {
    const double half = 0.5 * a.units.frequency(a.separation);
    detail::require(a.weight >= 0.0 && a.weight <= 1.0, ErrorCode::invalid_argument,
                    "--weight must lie in [0, 1]");
    rho = mix({{a.weight, density_from_pure(gaussian_pure(grid, omega0 - half, sigma, 0.0, &diags))},
               {1.0 - a.weight,
                density_from_pure(gaussian_pure(grid, omega0 + half, sigma, 0.0, &diags))}});
  } else if (a.kind == "time-jitter") {
    rho = time_jitter_state(gaussian_pure(grid, omega0, sigma, 0.0, &diags), a.units.time(a.jitter));
  } else {
    rho = frequency_jitter_state(gaussian_pure(grid, omega0, sigma, 0.0, &diags),
                                 a.units.frequency(a.jitter), &diags);
  }
  print_warnings(diags);

  write_density(a.out, *rho);
  Manifest m{"gen-state", {}, {}, std::nullopt};
  m.params = {{"kind", a.kind},     {"n", a.n},         {"span", a.span},
              {"center", a.center}, {"omega0", a.omega0}, {"sigma", a.sigma},
              {"separation", a.separation}, {"weight", a.weight}, {"jitter", a.jitter},
              {"units", a.units.to_json()}};
  m.params["chirp"] = a.chirp ? json(*a.chirp) : json(nullptr);
  m.write_for(a.out);
  if (!a.heatmap_out.empty()) {
    write_text(a.heatmap_out, heatmap_csv(*rho));
    m.write_for(a.heatmap_out);
  }

  std::cout << std::setprecision(12) << "wrote " << a.out << " (" << a.kind << ", n=" << a.n
            << ")\npurity:                " << purity(*rho) << '\n';
  print_validation(validate(*rho));
  return kExitOk;
}

// simulate

struct SimulateArgs {
  std::string state;
  std::string out;
  std::optional<std::size_t> max_delta_index;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 0;
  bool exact = false;
  bool round_counts = false;
  double gamma = 1.0;
  double gamma_phase = 0.0;
  double xi = 1.0;
  bool compensate = true;
  double efficiency = 1.0;
  std::optional<double> max_delta;
  std::string p_delta_out;
  std::size_t workers = 1;
  Units units;
};

std::string p_delta_table(const ScanPlan& plan, const std::vector<MeasurementRecord>& records) {
  std::string out = "delta_index,tau_index,tau,delta_omega,p_delta_in_phase,p_delta_quadrature\n";
  const auto& grid = plan.grid;
  for (std::size_t r = 0; r + 1 < records.size(); r += 2) {
    if (plan.settings[r].calibration) continue;
    const auto& in_phase = records[r];
    const auto& quadrature = records[r + 1];
    out += std::to_string(in_phase.setting.delta_index) + ',' + std::to_string(in_phase.tau_index) +
           ',' + format_real(in_phase.setting.tau) + ',' +
           format_real(static_cast<double>(in_phase.setting.delta_index) * grid.d_omega()) + ',' +
           format_real(estimate_p_delta(in_phase).value) + ',' +
           format_real(estimate_p_delta(quadrature).value) + '\n';
  }
  return out;
}

int run_simulate(const SimulateArgs& a) {
  const auto rho = read_density(a.state);
  const auto& grid = rho.grid();
  const std::size_t max_index = a.max_delta_index.value_or(grid.size() - 1);
  detail::require(max_index < grid.size(), ErrorCode::invalid_argument,
                  "--max-delta-index must be below n");
  const double advisory =
      a.max_delta ? a.units.frequency(*a.max_delta) : std::numeric_limits<double>::infinity();
  const auto plan = plan_scan(grid, max_index, a.shots, a.seed, advisory);

  InterferometerConfig config;
  config.xi = a.xi;
  config.gamma = std::polar(a.gamma, a.gamma_phase);
  config.compensate_loss = a.compensate;
  config.detector_efficiency = a.efficiency;
  config.max_delta = advisory;
  SimulationOptions options;
  options.mode = a.exact ? (a.round_counts ? SimulationMode::exact_rounded : SimulationMode::exact)
                         : SimulationMode::sampled;
  options.workers = a.workers;

  Diagnostics diags = plan.warnings;
  const auto records = simulate_counts(rho, plan, config, options, &diags);
  print_warnings(diags);

  write_records(a.out, records);
  Manifest m{"simulate", {a.state}, {}, a.seed};
  m.params = {{"max_delta_index", max_index},
              {"shots", a.shots},
              {"mode", a.exact ? (a.round_counts ? "exact-rounded" : "exact") : "sampled"},
              {"gamma", a.gamma},
              {"gamma_phase", a.gamma_phase},
              {"xi", a.xi},
              {"compensate", a.compensate},
              {"efficiency", a.efficiency},
              {"workers", a.workers},
              {"units", a.units.to_json()}};
  m.params["max_delta"] = a.max_delta ? json(*a.max_delta) : json(nullptr);
  m.write_for(a.out);
  if (!a.p_delta_out.empty()) {
    write_text(a.p_delta_out, p_delta_table(plan, records));
    m.write_for(a.p_delta_out);
  }
  std::cout << "wrote " << a.out << " (" << records.size() << " rows)\n";
  return kExitOk;
}

// reconstruct

struct ReconstructArgs {
  std::string csv;
  std::size_t n = 64;
  double span = 16.0;
  double center = 0.0;
  std::string grid_from;
  std::string out;
  std::string report_out;
  std::string truth;
  double visibility_floor = kDefaultVisibilityFloor;
  std::string heatmap_out;
  Units units;
};

int run_reconstruct(const ReconstructArgs& a) {
  const FrequencyGrid grid = a.grid_from.empty()
                                 ? make_grid(a.units.frequency(a.center), a.units.frequency(a.span), a.n)
                                 : read_density(a.grid_from).grid();
  std::optional<SpectralDensityMatrix> truth;
  if (!a.truth.empty()) truth = read_density(a.truth);

  const auto records = read_records(a.csv, grid);
  const auto result = reconstruct(records, grid, {a.visibility_floor});
  const auto doc = report(truth, result);
  print_warnings(result.warnings);

  const std::string report_path =
      a.report_out.empty() ? std::filesystem::path(a.out).replace_extension(".report.json").string()
                           : a.report_out;
  write_density(a.out, result.rho_hat);
  write_text(report_path, report_to_json(doc).dump(2) + '\n');

  Manifest m{"reconstruct", {a.csv}, {}, std::nullopt};
  if (!a.grid_from.empty()) m.inputs.push_back(a.grid_from);
  if (!a.truth.empty()) m.inputs.push_back(a.truth);
  m.params = {{"n", grid.size()},
              {"omega_min", grid.omega_min()},
              {"d_omega", grid.d_omega()},
              {"visibility_floor", a.visibility_floor},
              {"units", a.units.to_json()}};
  m.write_for(a.out);
  m.write_for(report_path);
  if (!a.heatmap_out.empty()) {
    write_text(a.heatmap_out, heatmap_csv(result.rho_hat));
    m.write_for(a.heatmap_out);
  }

  std::cout << std::setprecision(12) << "wrote " << a.out << " and " << report_path << '\n'
            << "purity:                " << doc.purity << '\n'
            << "gamma_hat:             " << doc.gamma_hat.real() << (doc.gamma_hat.imag() < 0 ? " - " : " + ")
            << std::abs(doc.gamma_hat.imag()) << "i\n"
            << "min eigenvalue (raw):  " << doc.min_eigenvalue_pre_projection << '\n';
  if (doc.hs_distance) {
    std::cout << "hs distance to truth:  " << *doc.hs_distance << '\n'
              << "overlap with truth:    " << *doc.overlap << '\n';
  }
  return kExitOk;
}

// analyze

struct AnalyzeArgs {
  std::vector<std::string> files;
  bool json_output = false;
};

int run_analyze(const AnalyzeArgs& a) {
  std::vector<SpectralDensityMatrix> states;
  for (const auto& f : a.files) {
    states.push_back(read_density(f));
    require_same_grid(states.front().grid(), states.back().grid());
  }
  const std::size_t k = states.size();
  std::vector<std::vector<double>> overlap(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) overlap[i][j] = hs_overlap(states[i], states[j]);
  }
  if (a.json_output) {
    json doc{{"files", a.files}, {"purity", json::array()}, {"overlap", overlap}};
    for (const auto& s : states) doc["purity"].push_back(purity(s));
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << std::setprecision(10);
  for (std::size_t i = 0; i < k; ++i) {
    std::cout << "[" << i << "] purity " << purity(states[i]) << "  " << a.files[i] << '\n';
  }
  std::cout << "overlap tr(rho_a rho_b):\n";
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) std::cout << (j ? "  " : "") << std::setw(14) << overlap[i][j];
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral state tomography with a frequency-shifting interferometer"};
  app.set_version_flag("--version", SPECTOMO_VERSION);
  app.require_subcommand(1);

  GenStateArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-state", "Write a test state as a density-matrix file");
  gen_cmd->add_option("kind", gen.kind, "State family")
      ->required()
      ->check(CLI::IsMember({"gaussian", "mixture", "time-jitter", "freq-jitter", "chirped"}));
  gen_cmd->add_option("--n", gen.n, "Grid points")->check(CLI::Range(2, 4096))->capture_default_str();
  gen_cmd->add_option("--span", gen.span, "Grid span")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--center", gen.center, "Grid center")->capture_default_str();
  gen_cmd->add_option("--omega0", gen.omega0, "Spectral center")->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "Spectral width")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--chirp", gen.chirp, "Quadratic phase (chirped, default 0.5)");
  gen_cmd->add_option("--separation", gen.separation, "Center separation (mixture)")->capture_default_str();
  gen_cmd->add_option("--weight", gen.weight, "Weight of the lower component (mixture)")->capture_default_str();
  gen_cmd->add_option("--jitter", gen.jitter, "Jitter std (time-jitter, freq-jitter)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output JSON")->required();
  gen_cmd->add_option("--heatmap-out", gen.heatmap_out, "Optional |rho| heatmap CSV");
  gen.units.add_to(gen_cmd);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a tomography scan into a count table");
  sim_cmd->add_option("--state", sim.state, "Density-matrix JSON")->required();
  sim_cmd->add_option("--out", sim.out, "Output CSV")->required();
  sim_cmd->add_option("--max-delta-index", sim.max_delta_index, "Largest shift index scanned (default n-1)");
  sim_cmd->add_option("--shots", sim.shots, "Shots per setting")->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_flag("--exact", sim.exact, "Write expected counts instead of samples");
  sim_cmd->add_flag("--round-counts", sim.round_counts, "Round expected counts (with --exact)");
  sim_cmd->add_option("--gamma", sim.gamma, "Spatial overlap magnitude")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim_cmd->add_option("--gamma-phase", sim.gamma_phase, "Spatial overlap phase (rad)")->capture_default_str();
  sim_cmd->add_option("--xi", sim.xi, "Diffraction efficiency")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim_cmd->add_flag("--compensate,!--no-compensate", sim.compensate, "Balance the lower-arm loss");
  sim_cmd->add_option("--efficiency", sim.efficiency, "Detector efficiency")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim_cmd->add_option("--max-delta", sim.max_delta, "Hardware shift limit (advisory)");
  sim_cmd->add_option("--p-delta-out", sim.p_delta_out, "Optional P_delta(tau, delta) CSV");
  sim_cmd->add_option("--workers", sim.workers, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  sim.units.add_to(sim_cmd);

  ReconstructArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct a density matrix from a count table");
  rec_cmd->add_option("--csv", rec.csv, "Count table")->required();
  auto* n_opt = rec_cmd->add_option("--n", rec.n, "Grid points")->check(CLI::Range(2, 4096))->capture_default_str();
  auto* span_opt = rec_cmd->add_option("--span", rec.span, "Grid span")->check(CLI::PositiveNumber)->capture_default_str();
  auto* center_opt = rec_cmd->add_option("--center", rec.center, "Grid center")->capture_default_str();
  rec_cmd->add_option("--grid-from", rec.grid_from, "Take the grid from a density-matrix JSON")
      ->excludes(n_opt)
      ->excludes(span_opt)
      ->excludes(center_opt);
  rec_cmd->add_option("--out", rec.out, "Output JSON")->required();
  rec_cmd->add_option("--report", rec.report_out, "Report JSON (default <out>.report.json)");
  rec_cmd->add_option("--truth", rec.truth, "Reference state for distance metrics");
  rec_cmd->add_option("--visibility-floor", rec.visibility_floor, "Minimum |gamma_hat|")->capture_default_str();
  rec_cmd->add_option("--heatmap-out", rec.heatmap_out, "Optional |rho| heatmap CSV");
  rec.units.add_to(rec_cmd);

  AnalyzeArgs ana;
  auto* ana_cmd = app.add_subcommand("analyze", "Purity and pairwise overlaps of density-matrix files");
  ana_cmd->add_option("files", ana.files, "Density-matrix JSON files")->required();
  ana_cmd->add_flag("--json", ana.json_output, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen_state(gen);
    if (*sim_cmd) return run_simulate(sim);
    if (*rec_cmd) return run_reconstruct(rec);
    return run_analyze(ana);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
