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

#pragma once

// Tomographic scan planning and photon-count simulation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "spectomo/density.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"
#include "spectomo/interferometer.hpp"

namespace spectomo {

inline constexpr double kThetaInPhase = 0.0;
inline constexpr double kThetaQuadrature = std::numbers::pi / 2.0;

struct PlannedSetting {
  std::size_t tau_index = 0;
  MeasurementSetting setting;
  /// One of the two visibility-calibration settings at tau = delta = 0.
  bool calibration = false;
};

/// Full schedule: both phases for every (delta, tau) pair on the conjugate
/// lattice, preceded by the calibration pair (tau = 0, delta = 0,
/// theta in {0, pi/2}). Ordinals are positions in `settings`.
struct ScanPlan {
  FrequencyGrid grid;
  std::vector<std::size_t> delta_indices;
  std::vector<PlannedSetting> settings;
  std::uint64_t shots_per_setting = 0;
  std::uint64_t seed = 0;
  Diagnostics warnings;

  std::size_t max_delta_index() const { return delta_indices.back(); }
};

inline ScanPlan plan_scan(const FrequencyGrid& grid, std::size_t max_delta_index,
                          std::uint64_t shots, std::uint64_t seed,
                          double max_delta = std::numeric_limits<double>::infinity()) {
  detail::require(max_delta_index < grid.size(), ErrorCode::invalid_argument,
                  "max_delta_index must be below the grid size");
  ScanPlan plan{grid, {}, {}, shots, seed, {}};
  const std::size_t n = grid.size();
  plan.settings.reserve(2 * n * (max_delta_index + 1) + 2);
  for (double theta : {kThetaInPhase, kThetaQuadrature}) {
    plan.settings.push_back({0, MeasurementSetting{0.0, 0, theta}, true});
  }
  for (std::size_t d = 0; d <= max_delta_index; ++d) {
    plan.delta_indices.push_back(d);
    for (std::size_t k = 0; k < n; ++k) {
      for (double theta : {kThetaInPhase, kThetaQuadrature}) {
        plan.settings.push_back({k, MeasurementSetting{grid.tau(k), d, theta}, false});
      }
    }
  }
  const double widest = static_cast<double>(max_delta_index) * grid.d_omega();
  if (widest > max_delta) {
    plan.warnings.push_back({"hardware-advisory",
                             "largest planned frequency shift exceeds the AOM limit", widest});
  }
  return plan;
}

/// Counts for one setting. Sampled data holds integers; exact mode stores
/// expected (possibly fractional) counts.
struct MeasurementRecord {
  MeasurementSetting setting;
  std::size_t tau_index = 0;
  std::uint64_t shots_attempted = 0;
  double shots_postselected = 0.0;
  double counts_a = 0.0;
  double counts_b = 0.0;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

enum class SimulationMode {
  /// Binomial post-selection, then binomial A/B split.
  sampled,
  /// Expected counts: shots * rate post-selected, of which a fraction P_A at A.
  exact,
  /// As `exact`, with counts_A rounded to the nearest integer.
  exact_rounded,
};

struct SimulationOptions {
  SimulationMode mode = SimulationMode::sampled;
  unsigned workers = 1;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t draw_binomial(std::mt19937_64& rng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(rng);
}

}  // namespace detail

/// Seed of the RNG substream for one setting:
/// splitmix64(master_seed XOR splitmix64(ordinal)).
inline std::uint64_t substream_seed(std::uint64_t master_seed, std::size_t ordinal) {
  return detail::splitmix64(master_seed ^ detail::splitmix64(static_cast<std::uint64_t>(ordinal)));
}

/// Simulates one record per planned setting, in plan order. Each setting
/// draws from its own substream, so the output is independent of `workers`.
inline std::vector<MeasurementRecord> simulate_counts(const SpectralDensityMatrix& rho,
                                                      const ScanPlan& plan,
                                                      const InterferometerConfig& config,
                                                      const SimulationOptions& options = {},
                                                      Diagnostics* diags = nullptr) {
  config.check_postselected();
  require_same_grid(rho.grid(), plan.grid);
  const CrossSectionCache cache(rho);
  for (std::size_t d : plan.delta_indices) cache.get(d);

  const std::size_t count = plan.settings.size();
  std::vector<MeasurementRecord> records(count);
  std::vector<Diagnostics> per_setting(count);
  const double rate = config.postselection_rate();

  auto run = [&](std::size_t ordinal) {
    const PlannedSetting& ps = plan.settings[ordinal];
    DetectionProbabilities p = probabilities_closed_form(rho, ps.setting, config, &cache);
    per_setting[ordinal] = std::move(p.diagnostics);
    MeasurementRecord& r = records[ordinal];
    r.setting = ps.setting;
    r.tau_index = ps.tau_index;
    r.shots_attempted = plan.shots_per_setting;
    const double shots = static_cast<double>(plan.shots_per_setting);
    switch (options.mode) {
      case SimulationMode::sampled: {
        std::mt19937_64 rng(substream_seed(plan.seed, ordinal));
        const std::uint64_t kept = detail::draw_binomial(rng, plan.shots_per_setting, rate);
        const std::uint64_t at_a = detail::draw_binomial(rng, kept, p.p_a);
        r.shots_postselected = static_cast<double>(kept);
        r.counts_a = static_cast<double>(at_a);
        r.counts_b = static_cast<double>(kept - at_a);
        break;
      }
      case SimulationMode::exact:
        r.shots_postselected = shots * rate;
        r.counts_a = r.shots_postselected * std::clamp(p.p_a, 0.0, 1.0);
        r.counts_b = r.shots_postselected - r.counts_a;
        break;
      case SimulationMode::exact_rounded:
        r.shots_postselected = std::round(shots * rate);
        r.counts_a = std::round(r.shots_postselected * std::clamp(p.p_a, 0.0, 1.0));
        r.counts_b = r.shots_postselected - r.counts_a;
        break;
    }
  };

  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) run(i);
      });
    }
  }

  if (diags != nullptr) {
    for (const auto& ds : per_setting) {
      for (const auto& d : ds) {
        if (std::find(diags->begin(), diags->end(), d) == diags->end()) diags->push_back(d);
      }
    }
  }
  return records;
}

struct PDeltaEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// p_delta = (counts_A - counts_B) / N, stderr = 2 sqrt(p_A (1 - p_A) / N)
/// with N the post-selected shot count.
inline PDeltaEstimate estimate_p_delta(const MeasurementRecord& record) {
  detail::require(record.shots_postselected > 0.0, ErrorCode::insufficient_data,
                  "no post-selected shots");
  const double total = record.shots_postselected;
  const double p_a = record.counts_a / total;
  return {(record.counts_a - record.counts_b) / total,
          2.0 * std::sqrt(std::max(p_a * (1.0 - p_a), 0.0) / total)};
}

}  // namespace spectomo
