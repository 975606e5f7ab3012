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

// Forward model of the Mach-Zehnder measurement. The input photon is split
// by a 50/50 beamsplitter; the upper arm carries an acousto-optic frequency
// shift (delta = delta_index * d_omega) followed by a phase shifter theta,
// the lower arm a delay tau; a second 50/50 beamsplitter recombines them and
// a photon is post-selected at output A or B.
//
// Three routes to the detection probabilities are provided and must agree:
//   conditional_state()          composes the arm operators on a 2-arm space,
//   probabilities_quadrature()   sums the four detection-probability terms,
//   probabilities_closed_form()  uses P_A = 1/2 + 1/2 Re[gamma e^{i theta} G_delta(tau)].
//
// Sign conventions are those of the four-term probability sum:
//   P_A = 1/4 sum_omega [ rho(w,w) + gamma e^{i theta - i tau w} rho(w, w - delta)
//                        + conj(gamma) e^{-i theta + i tau w} rho(w - delta, w)
//                        + rho(w - delta, w - delta) ] d_omega.
// The AOM's fixed factor i is absorbed into the zero of theta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "spectomo/density.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/fourier.hpp"
#include "spectomo/grid.hpp"
#include "spectomo/states.hpp"

namespace spectomo {

/// One interferometer configuration. The frequency shift is grid-aligned:
/// delta = delta_index * d_omega.
struct MeasurementSetting {
  double tau = 0.0;
  std::size_t delta_index = 0;
  double theta = 0.0;

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;
};

struct InterferometerConfig {
  /// AOM conversion efficiency.
  double xi = 1.0;
  /// Transverse overlap of the two arms at the second beamsplitter.
  Complex gamma = 1.0;
  /// Attenuate the delay arm to amplitude sqrt(xi) so the arms stay balanced.
  bool compensate_loss = true;
  double detector_efficiency = 1.0;
  /// Largest frequency shift the AOM hardware is expected to provide (rad/s).
  double max_delta = std::numeric_limits<double>::infinity();

  void check() const {
    detail::require(xi >= 0.0 && xi <= 1.0, ErrorCode::invalid_argument, "xi must be in [0, 1]");
    detail::require(std::abs(gamma) <= 1.0 + 1e-12, ErrorCode::invalid_argument,
                    "|gamma| must not exceed 1");
    detail::require(detector_efficiency > 0.0 && detector_efficiency <= 1.0,
                    ErrorCode::invalid_argument, "detector efficiency must be in (0, 1]");
    detail::require(max_delta > 0.0, ErrorCode::invalid_argument, "max_delta must be positive");
  }

  /// Balanced arms, so post-selected statistics are those of the lossless device.
  void check_postselected() const {
    check();
    detail::require(xi == 1.0 || compensate_loss, ErrorCode::invalid_argument,
                    "xi < 1 requires compensate_loss (unbalanced interferometer)");
    detail::require(xi > 0.0, ErrorCode::invalid_argument,
                    "xi = 0: no photon survives post-selection");
  }

  /// Probability that an emitted photon is detected at either output.
  double postselection_rate() const { return xi * detector_efficiency; }
};

struct DetectionProbabilities {
  double p_a = 0.0;
  double p_b = 0.0;
  Diagnostics diagnostics;

  /// P_A - P_B
  double p_delta() const noexcept { return p_a - p_b; }
};

namespace detail {

inline void check_delta_index(const FrequencyGrid& grid, std::size_t delta_index) {
  require(delta_index < grid.size(), ErrorCode::invalid_argument,
          "delta_index " + std::to_string(delta_index) + " outside grid of " +
              std::to_string(grid.size()));
}

/// Trace mass of the shifted spectrum that lands above the grid's top edge.
inline double shifted_mass_outside(const FrequencyGrid& grid, const Eigen::MatrixXcd& kernel,
                                   std::size_t delta_index) {
  const auto k = static_cast<Eigen::Index>(delta_index);
  return kernel.diagonal().real().tail(k).sum() * grid.d_omega();
}

inline void note_clipping(Diagnostics& diags, double mass) {
  if (mass > kClippingWarnThreshold) {
    diags.push_back({"support-clipping",
                     "frequency-shifted spectrum extends past the grid's upper edge", mass});
  }
}

}  // namespace detail

/// Kept-mode output of the AOM with vacuum on its auxiliary input:
///   rho'(w1, w2) = xi rho(w1 - delta, w2 - delta)
/// on the same grid. Entries shifted past the upper edge are dropped; the
/// dropped trace mass is reported as "support-clipping" above threshold.
inline Eigen::MatrixXcd apply_aom(const FrequencyGrid& grid, const Eigen::MatrixXcd& kernel,
                                  std::size_t delta_index, double xi,
                                  Diagnostics* diags = nullptr) {
  detail::check_delta_index(grid, delta_index);
  detail::require(xi >= 0.0 && xi <= 1.0, ErrorCode::invalid_argument, "xi must be in [0, 1]");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto k = static_cast<Eigen::Index>(delta_index);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  if (k < n) out.bottomRightCorner(n - k, n - k) = xi * kernel.topLeftCorner(n - k, n - k);
  if (diags != nullptr) {
    detail::note_clipping(*diags, xi * detail::shifted_mass_outside(grid, kernel, delta_index));
  }
  return out;
}

inline Eigen::MatrixXcd apply_aom(const SpectralDensityMatrix& rho, std::size_t delta_index,
                                  double xi, Diagnostics* diags = nullptr) {
  return apply_aom(rho.grid(), rho.kernel(), delta_index, xi, diags);
}

/// Post-selected conditional state at output A.
struct ConditionalState {
  /// Grid of the output kernel: the input grid extended upwards by
  /// delta_index points so the shifted arm is represented without loss.
  FrequencyGrid grid;
  /// Unnormalized output-A kernel, trace = p_a * (total detected fraction).
  Eigen::MatrixXcd kernel_a;
  double p_a = 0.0;
  double p_b = 0.0;
  /// kernel_a renormalized to unit trace; empty when p_a is (numerically) zero.
  std::optional<SpectralDensityMatrix> rho_a;
  Diagnostics diagnostics;
};

/// Builds the output-A state by composing the optical elements on an
/// explicit two-arm ket space: beamsplitter, AOM + phase shifter (upper
/// arm), delay (+ matched loss) in the lower arm, spatial overlap on the
/// arm coherences, and projection onto the A and B output ports.
inline ConditionalState conditional_state(const SpectralDensityMatrix& rho,
                                          const MeasurementSetting& setting,
                                          const InterferometerConfig& config) {
  config.check_postselected();
  const FrequencyGrid& grid = rho.grid();
  detail::check_delta_index(grid, setting.delta_index);
  const std::size_t k = setting.delta_index;
  const FrequencyGrid ext = grid.extended(k);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto m = static_cast<Eigen::Index>(ext.size());

  Eigen::MatrixXcd rho_ext = Eigen::MatrixXcd::Zero(m, m);
  rho_ext.topLeftCorner(n, n) = rho.kernel();

  // Ket-space operators of the two arms.
  const double upper_amp = std::sqrt(config.xi);
  const double lower_amp = config.compensate_loss ? std::sqrt(config.xi) : 1.0;
  Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i + static_cast<Eigen::Index>(k) < m; ++i) {
    upper(i + static_cast<Eigen::Index>(k), i) = upper_amp * std::polar(1.0, -setting.theta);
  }
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lower(i, i) = lower_amp * std::polar(1.0, -setting.tau * ext.omega(static_cast<std::size_t>(i)));
  }

  // First beamsplitter: |w> -> (|w>_upper + |w>_lower) / sqrt(2).
  Eigen::MatrixXcd split(2 * m, m);
  split << Eigen::MatrixXcd::Identity(m, m), Eigen::MatrixXcd::Identity(m, m);
  split /= std::sqrt(2.0);
  Eigen::MatrixXcd arms = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  arms.topLeftCorner(m, m) = upper;
  arms.bottomRightCorner(m, m) = lower;
  const Eigen::MatrixXcd transfer = arms * split;
  Eigen::MatrixXcd two_arm = transfer * rho_ext * transfer.adjoint();

  // Imperfect transverse overlap damps the coherence between the arms.
  two_arm.topRightCorner(m, m) *= std::conj(config.gamma);
  two_arm.bottomLeftCorner(m, m) *= config.gamma;

  // Second beamsplitter, projected onto output ports A (+) and B (-).
  Eigen::MatrixXcd port_a(m, 2 * m);
  port_a << Eigen::MatrixXcd::Identity(m, m), Eigen::MatrixXcd::Identity(m, m);
  port_a /= std::sqrt(2.0);
  Eigen::MatrixXcd port_b(m, 2 * m);
  port_b << Eigen::MatrixXcd::Identity(m, m), -Eigen::MatrixXcd::Identity(m, m);
  port_b /= std::sqrt(2.0);
  Eigen::MatrixXcd kernel_a = port_a * two_arm * port_a.adjoint();
  const Eigen::MatrixXcd kernel_b = port_b * two_arm * port_b.adjoint();

  const double dw = grid.d_omega();
  const double trace_a = kernel_a.diagonal().real().sum() * dw;
  const double trace_b = kernel_b.diagonal().real().sum() * dw;

  ConditionalState out{ext, kernel_a, 0.0, 0.0, std::nullopt, {}};
  out.p_a = trace_a / (trace_a + trace_b);
  out.p_b = 1.0 - out.p_a;
  if (out.p_a > 1e-12) {
    kernel_a /= trace_a;
    out.rho_a.emplace(ext, 0.5 * (kernel_a + kernel_a.adjoint()));
  }
  detail::note_clipping(out.diagnostics,
                        detail::shifted_mass_outside(grid, rho.kernel(), setting.delta_index));
  return out;
}

/// Detection probabilities by direct Riemann sum of the four terms, with
/// phases exp(i theta - i tau w) evaluated at every grid frequency. Accepts
/// any tau (not only the conjugate lattice).
inline DetectionProbabilities probabilities_quadrature(const SpectralDensityMatrix& rho,
                                                       const MeasurementSetting& setting,
                                                       const InterferometerConfig& config) {
  config.check_postselected();
  const FrequencyGrid& grid = rho.grid();
  detail::check_delta_index(grid, setting.delta_index);
  const std::size_t n = grid.size();
  const std::size_t k = setting.delta_index;
  const double dw = grid.d_omega();

  double direct = 0.0;  // rho(w, w), and rho(w - delta, w - delta) over the shifted support
  for (std::size_t i = 0; i < n; ++i) direct += rho(i, i).real() * dw;
  const double shifted = direct;

  Complex forward = 0.0;   // e^{i theta - i tau w} rho(w, w - delta)
  Complex backward = 0.0;  // e^{-i theta + i tau w} rho(w - delta, w)
  for (std::size_t i = k; i < n; ++i) {
    const double w = grid.omega(i);
    forward += std::polar(1.0, setting.theta - setting.tau * w) * rho(i, i - k) * dw;
    backward += std::polar(1.0, -setting.theta + setting.tau * w) * rho(i - k, i) * dw;
  }
  const Complex g = config.gamma;
  const double sum_a =
      0.25 * (direct + (g * forward).real() + (std::conj(g) * backward).real() + shifted);
  const double sum_b =
      0.25 * (direct - (g * forward).real() - (std::conj(g) * backward).real() + shifted);

  DetectionProbabilities out;
  out.p_a = sum_a / (sum_a + sum_b);
  out.p_b = 1.0 - out.p_a;
  detail::note_clipping(out.diagnostics,
                        detail::shifted_mass_outside(grid, rho.kernel(), setting.delta_index));
  return out;
}

/// Delay-domain signal of the delta-th band:
///   G_delta(tau_k) = sum_i exp(-i tau_k w_i) rho(w_i, w_i - delta) d_omega,
/// with rho(w_i, w_{i-delta_index}) = 0 for i < delta_index.
inline Eigen::VectorXcd cross_section_transform(const SpectralDensityMatrix& rho,
                                                std::size_t delta_index) {
  const FrequencyGrid& grid = rho.grid();
  detail::check_delta_index(grid, delta_index);
  const std::size_t n = grid.size();
  Eigen::VectorXcd band = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = delta_index; i < n; ++i) {
    band(static_cast<Eigen::Index>(i)) = rho(i, i - delta_index);
  }
  return band_to_delay(grid, band);
}

/// Memoizes cross_section_transform per delta index for one state.
/// Concurrent readers share a lock; the first request for a delta inserts it.
/// The referenced state must outlive the cache.
class CrossSectionCache {
 public:
  explicit CrossSectionCache(const SpectralDensityMatrix& rho) : rho_(&rho) {}

  const SpectralDensityMatrix& state() const noexcept { return *rho_; }

  std::shared_ptr<const Eigen::VectorXcd> get(std::size_t delta_index) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(delta_index); it != cache_.end()) return it->second;
    }
    auto computed =
        std::make_shared<const Eigen::VectorXcd>(cross_section_transform(*rho_, delta_index));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(delta_index, std::move(computed));
    return it->second;
  }

 private:
  const SpectralDensityMatrix* rho_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::size_t, std::shared_ptr<const Eigen::VectorXcd>> cache_;
};

/// Index k with tau == k d_tau (to 1e-9 of a bin), if tau is on the lattice.
inline std::optional<std::size_t> tau_index_of(const FrequencyGrid& grid, double tau) {
  const double pos = tau / grid.d_tau();
  const double k = std::round(pos);
  if (k < 0.0 || k >= static_cast<double>(grid.size()) || std::abs(pos - k) > 1e-9) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(k);
}

/// P_A = 1/2 + 1/2 Re[gamma e^{i theta} G_delta(tau)], P_B = 1 - P_A.
/// tau off the conjugate lattice falls back to probabilities_quadrature.
inline DetectionProbabilities probabilities_closed_form(const SpectralDensityMatrix& rho,
                                                        const MeasurementSetting& setting,
                                                        const InterferometerConfig& config,
                                                        const CrossSectionCache* cache = nullptr) {
  config.check_postselected();
  const FrequencyGrid& grid = rho.grid();
  detail::check_delta_index(grid, setting.delta_index);
  const auto tau_index = tau_index_of(grid, setting.tau);
  if (!tau_index) return probabilities_quadrature(rho, setting, config);

  Complex g;
  if (cache != nullptr) {
    detail::require(&cache->state() == &rho, ErrorCode::invalid_argument,
                    "cache belongs to a different state");
    g = (*cache->get(setting.delta_index))(static_cast<Eigen::Index>(*tau_index));
  } else {
    g = cross_section_transform(rho, setting.delta_index)(static_cast<Eigen::Index>(*tau_index));
  }
  DetectionProbabilities out;
  out.p_a = 0.5 + 0.5 * (config.gamma * std::polar(1.0, setting.theta) * g).real();
  out.p_b = 1.0 - out.p_a;
  detail::note_clipping(out.diagnostics,
                        detail::shifted_mass_outside(grid, rho.kernel(), setting.delta_index));
  return out;
}

}  // namespace spectomo
