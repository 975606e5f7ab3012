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

// Linear-inversion tomography: visibility calibration, per-shift
// cross-section estimation from the theta in {0, pi/2} scans, discrete
// Fourier inversion, assembly of the full kernel from its bands, and
// projection onto physical states.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/density.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/fourier.hpp"
#include "spectomo/grid.hpp"
#include "spectomo/measurement.hpp"
#include "spectomo/metrics.hpp"

namespace spectomo {

/// Default lower bound on |gamma_hat| before dividing by it.
inline constexpr double kDefaultVisibilityFloor = 0.05;

/// Measured delay-domain signal of one band rho(w, w - delta).
struct CrossSectionEstimate {
  std::size_t delta_index = 0;
  Eigen::VectorXcd g_of_tau;
  Eigen::VectorXd stderr_per_point;
};

/// Records pooled by (delta_index, tau_index, phase). Rows sharing a key,
/// such as the calibration pair and the tomography rows at tau = delta = 0,
/// have their counts summed. Rows with theta other than 0 or pi/2 are kept
/// out of the table and counted in `ignored`.
class RecordTable {
 public:
  enum class Phase { in_phase, quadrature };

  explicit RecordTable(std::span<const MeasurementRecord> records) {
    for (const auto& r : records) {
      std::optional<Phase> phase;
      if (std::abs(r.setting.theta - kThetaInPhase) <= 1e-9) phase = Phase::in_phase;
      if (std::abs(r.setting.theta - kThetaQuadrature) <= 1e-9) phase = Phase::quadrature;
      if (!phase) {
        ++ignored_;
        continue;
      }
      auto& pooled = rows_[Key{r.setting.delta_index, r.tau_index, *phase}];
      pooled.setting = r.setting;
      pooled.tau_index = r.tau_index;
      pooled.shots_attempted += r.shots_attempted;
      pooled.shots_postselected += r.shots_postselected;
      pooled.counts_a += r.counts_a;
      pooled.counts_b += r.counts_b;
    }
  }

  const MeasurementRecord* find(std::size_t delta_index, std::size_t tau_index,
                                Phase phase) const {
    auto it = rows_.find(Key{delta_index, tau_index, phase});
    return it == rows_.end() ? nullptr : &it->second;
  }

  /// Largest delta index present, if any.
  std::optional<std::size_t> max_delta_index() const {
    if (rows_.empty()) return std::nullopt;
    return std::get<0>(rows_.rbegin()->first);
  }

  std::size_t ignored() const noexcept { return ignored_; }

 private:
  using Key = std::tuple<std::size_t, std::size_t, Phase>;
  std::map<Key, MeasurementRecord> rows_;
  std::size_t ignored_ = 0;
};

inline std::string describe_missing(std::size_t delta_index, std::size_t tau_index,
                                    RecordTable::Phase phase) {
  return "(delta_index=" + std::to_string(delta_index) + ", tau_index=" +
         std::to_string(tau_index) +
         (phase == RecordTable::Phase::in_phase ? ", theta=0)" : ", theta=pi/2)");
}

/// Since G_0(0) = tr(rho) = 1, the calibration pair gives
///   gamma_hat = p_delta(theta = 0) - i p_delta(theta = pi/2).
/// A raw estimate with |gamma_hat| > 1 is clamped to the unit circle.
inline Complex calibrate_gamma(const RecordTable& table, Diagnostics* diags = nullptr) {
  const auto* in_phase = table.find(0, 0, RecordTable::Phase::in_phase);
  const auto* quadrature = table.find(0, 0, RecordTable::Phase::quadrature);
  detail::require(in_phase != nullptr && quadrature != nullptr, ErrorCode::calibration_missing,
                  "need records at tau = 0, delta = 0 for theta = 0 and theta = pi/2");
  detail::require(in_phase->shots_postselected > 0.0 && quadrature->shots_postselected > 0.0,
                  ErrorCode::calibration_missing, "calibration records have no post-selected shots");
  Complex gamma(estimate_p_delta(*in_phase).value, -estimate_p_delta(*quadrature).value);
  const double magnitude = std::abs(gamma);
  if (magnitude > 1.0) {
    if (diags != nullptr) {
      diags->push_back({"gamma-clamped", "calibrated visibility exceeded 1 and was clamped",
                        magnitude});
    }
    gamma /= magnitude;
  }
  return gamma;
}

inline Complex calibrate_gamma(std::span<const MeasurementRecord> records,
                               Diagnostics* diags = nullptr) {
  return calibrate_gamma(RecordTable(records), diags);
}

/// G_hat(tau_k) = [p_delta(tau_k, theta = 0) - i p_delta(tau_k, theta = pi/2)] / gamma_hat
inline CrossSectionEstimate estimate_cross_section(const RecordTable& table,
                                                   const FrequencyGrid& grid,
                                                   std::size_t delta_index, Complex gamma_hat,
                                                   double visibility_floor = kDefaultVisibilityFloor) {
  detail::require(std::abs(gamma_hat) >= visibility_floor, ErrorCode::visibility_too_low,
                  "|gamma_hat| = " + std::to_string(std::abs(gamma_hat)) + " is below " +
                      std::to_string(visibility_floor));
  const std::size_t n = grid.size();
  CrossSectionEstimate est{delta_index, Eigen::VectorXcd(static_cast<Eigen::Index>(n)),
                           Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  std::string missing;
  for (std::size_t k = 0; k < n; ++k) {
    const auto* re = table.find(delta_index, k, RecordTable::Phase::in_phase);
    const auto* im = table.find(delta_index, k, RecordTable::Phase::quadrature);
    if (re == nullptr) missing += " " + describe_missing(delta_index, k, RecordTable::Phase::in_phase);
    if (im == nullptr) missing += " " + describe_missing(delta_index, k, RecordTable::Phase::quadrature);
    if (re == nullptr || im == nullptr) continue;
    const PDeltaEstimate a = estimate_p_delta(*re);
    const PDeltaEstimate b = estimate_p_delta(*im);
    const auto i = static_cast<Eigen::Index>(k);
    est.g_of_tau(i) = Complex(a.value, -b.value) / gamma_hat;
    est.stderr_per_point(i) = std::hypot(a.std_error, b.std_error) / std::abs(gamma_hat);
  }
  if (!missing.empty()) throw Error(ErrorCode::missing_settings, "absent rows:" + missing);
  return est;
}

inline CrossSectionEstimate estimate_cross_section(std::span<const MeasurementRecord> records,
                                                   const FrequencyGrid& grid,
                                                   std::size_t delta_index, Complex gamma_hat,
                                                   double visibility_floor = kDefaultVisibilityFloor) {
  return estimate_cross_section(RecordTable(records), grid, delta_index, gamma_hat,
                                visibility_floor);
}

/// Band g(w_i) ~ rho(w_i, w_i - delta) whose delay-domain signal is `est`.
inline Eigen::VectorXcd invert_cross_section(const CrossSectionEstimate& est,
                                             const FrequencyGrid& grid) {
  return delay_to_band(grid, est.g_of_tau);
}

struct AssembledDensity {
  SpectralDensityMatrix rho;
  /// Per delta: HS norm of the band content the assembly had to discard
  /// (entries below the band start, imaginary diagonal for delta = 0).
  std::vector<double> residuals;
};

/// Fills band m as rho[i][i - m] = bands[m][i] and the lower bands by
/// Hermitian symmetry. bands[m] must be the inverted band for delta = m,
/// m = 0 .. bands.size() - 1; outer bands are left at zero.
inline AssembledDensity assemble(std::span<const Eigen::VectorXcd> bands, const FrequencyGrid& grid,
                                 Diagnostics* diags = nullptr) {
  detail::require(!bands.empty(), ErrorCode::missing_settings, "no delta = 0 band");
  const std::size_t n = grid.size();
  detail::require(bands.size() <= n, ErrorCode::invalid_argument, "more bands than grid points");
  const double dw = grid.d_omega();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  std::vector<double> residuals;
  for (std::size_t m = 0; m < bands.size(); ++m) {
    const Eigen::VectorXcd& g = bands[m];
    detail::require(static_cast<std::size_t>(g.size()) == n, ErrorCode::invalid_argument,
                    "band length does not match grid");
    double discarded = 0.0;
    for (std::size_t i = 0; i < m; ++i) discarded += std::norm(g(static_cast<Eigen::Index>(i)));
    for (std::size_t i = m; i < n; ++i) {
      const Complex v = g(static_cast<Eigen::Index>(i));
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(i - m);
      if (m == 0) {
        discarded += v.imag() * v.imag();
        rho(r, r) = v.real();
      } else {
        rho(r, c) = v;
        rho(c, r) = std::conj(v);
      }
    }
    residuals.push_back(std::sqrt(discarded) * dw);
  }
  if (bands.size() < n && diags != nullptr) {
    diags->push_back({"bandwidth-truncated",
                      "bands beyond the largest measured shift were set to zero",
                      static_cast<double>(bands.size() - 1)});
  }
  return {SpectralDensityMatrix(grid, std::move(rho)), std::move(residuals)};
}

struct ProjectedDensity {
  SpectralDensityMatrix rho;
  double min_eigenvalue_before = 0.0;
};

/// Nearest physical state under eigenvalue clipping: negative eigenvalues
/// of the operator are set to zero and the trace restored to one.
inline ProjectedDensity project_physical(const SpectralDensityMatrix& raw) {
  const double dw = raw.grid().d_omega();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(raw.as_operator());
  detail::require(solver.info() == Eigen::Success, ErrorCode::degenerate_input,
                  "eigendecomposition failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::VectorXd clipped = evals.cwiseMax(0.0);
  const double total = clipped.sum();
  detail::require(total > 0.0, ErrorCode::degenerate_input,
                  "no positive eigenvalues to project onto");
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  Eigen::MatrixXcd op = v * (clipped / total).asDiagonal() * v.adjoint();
  op = (0.5 * (op + op.adjoint())).eval();
  return {SpectralDensityMatrix(raw.grid(), op / dw), evals.minCoeff()};
}

struct ReconstructionOptions {
  double visibility_floor = kDefaultVisibilityFloor;
};

struct ReconstructionResult {
  /// Physical estimate (after projection).
  SpectralDensityMatrix rho_hat;
  /// Linear-inversion estimate before projection.
  SpectralDensityMatrix rho_raw;
  Complex gamma_hat;
  double pre_projection_min_eigenvalue = 0.0;
  std::vector<double> residuals;
  std::vector<CrossSectionEstimate> cross_sections;
  Diagnostics warnings;
};

/// Lists every (delta, tau, theta) row required for delta = 0 .. max_delta
/// that is absent from `table`.
inline std::vector<std::string> missing_settings(const RecordTable& table,
                                                 const FrequencyGrid& grid,
                                                 std::size_t max_delta_index) {
  std::vector<std::string> missing;
  for (std::size_t d = 0; d <= max_delta_index; ++d) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (auto phase : {RecordTable::Phase::in_phase, RecordTable::Phase::quadrature}) {
        if (table.find(d, k, phase) == nullptr) missing.push_back(describe_missing(d, k, phase));
      }
    }
  }
  return missing;
}

/// calibrate -> estimate -> invert -> assemble -> project. The delta range is
/// 0 .. the largest delta present in the records; every (delta, tau, theta)
/// row in that range must be present.
inline ReconstructionResult reconstruct(std::span<const MeasurementRecord> records,
                                        const FrequencyGrid& grid,
                                        const ReconstructionOptions& options = {}) {
  const RecordTable table(records);
  const auto max_delta = table.max_delta_index();
  detail::require(max_delta.has_value(), ErrorCode::missing_settings, "no usable records");
  detail::require(*max_delta < grid.size(), ErrorCode::invalid_argument,
                  "records reference shifts beyond the grid");
  const auto missing = missing_settings(table, grid, *max_delta);
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " absent rows:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorCode::missing_settings, msg);
  }

  Diagnostics warnings;
  if (table.ignored() > 0) {
    warnings.push_back({"unused-rows", "rows with theta not in {0, pi/2} were ignored",
                        static_cast<double>(table.ignored())});
  }
  const Complex gamma_hat = calibrate_gamma(table, &warnings);

  std::vector<CrossSectionEstimate> sections;
  std::vector<Eigen::VectorXcd> bands;
  for (std::size_t d = 0; d <= *max_delta; ++d) {
    sections.push_back(estimate_cross_section(table, grid, d, gamma_hat, options.visibility_floor));
    bands.push_back(invert_cross_section(sections.back(), grid));
  }
  AssembledDensity assembled = assemble(bands, grid, &warnings);
  ProjectedDensity projected = project_physical(assembled.rho);
  return {std::move(projected.rho),  std::move(assembled.rho),      gamma_hat,
          projected.min_eigenvalue_before, std::move(assembled.residuals), std::move(sections),
          std::move(warnings)};
}

struct ReportDocument {
  double purity = 0.0;
  Complex gamma_hat;
  std::optional<double> hs_distance;
  std::optional<double> overlap;
  double min_eigenvalue_pre_projection = 0.0;
  std::vector<double> residuals;
  Diagnostics warnings;
};

inline ReportDocument report(const std::optional<SpectralDensityMatrix>& truth,
                             const ReconstructionResult& result) {
  ReportDocument doc;
  doc.purity = purity(result.rho_hat);
  doc.gamma_hat = result.gamma_hat;
  if (truth) {
    doc.hs_distance = hs_distance(*truth, result.rho_hat);
    doc.overlap = hs_overlap(*truth, result.rho_hat);
  }
  doc.min_eigenvalue_pre_projection = result.pre_projection_min_eigenvalue;
  doc.residuals = result.residuals;
  doc.warnings = result.warnings;
  return doc;
}

}  // namespace spectomo
