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

// Factories for physical spectral density matrices: pure Gaussian
// wavepackets, finite mixtures, and Gaussian time/frequency jitter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectomo/density.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"

namespace spectomo {

/// Fraction of trace mass that may be lost to grid edges before a
/// "support-clipping" diagnostic is raised.
inline constexpr double kClippingWarnThreshold = 1e-6;

/// psi(omega) ~ exp(-(omega - omega0)^2 / (4 sigma^2) + i chirp (omega - omega0)^2),
/// so |psi|^2 is a Gaussian of standard deviation sigma. Normalized on the grid.
inline PureSpectralAmplitude gaussian_pure(const FrequencyGrid& grid, double omega0, double sigma,
                                           double chirp = 0.0, Diagnostics* diags = nullptr) {
  detail::require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_argument,
                  "sigma must be positive");
  detail::require(std::isfinite(omega0) && std::isfinite(chirp), ErrorCode::invalid_argument,
                  "omega0 and chirp must be finite");
  if (diags != nullptr &&
      (omega0 - 4.0 * sigma < grid.omega_min() || omega0 + 4.0 * sigma > grid.omega_max())) {
    diags->push_back({"grid-coverage", "Gaussian +-4 sigma extends past the grid edges", sigma});
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXcd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.omega(static_cast<std::size_t>(i)) - omega0;
    psi(i) = std::polar(std::exp(-x * x / (4.0 * sigma * sigma)), chirp * x * x);
  }
  return PureSpectralAmplitude::normalized(grid, std::move(psi));
}

/// rho_ij = psi_i conj(psi_j)
inline SpectralDensityMatrix density_from_pure(const PureSpectralAmplitude& psi) {
  const Eigen::VectorXcd& v = psi.values();
  return SpectralDensityMatrix(psi.grid(), v * v.adjoint());
}

struct MixtureComponent {
  double weight;
  SpectralDensityMatrix rho;
};

inline SpectralDensityMatrix mix(std::span<const MixtureComponent> components) {
  detail::require(!components.empty(), ErrorCode::invalid_argument, "empty mixture");
  const FrequencyGrid& grid = components.front().rho.grid();
  double total = 0.0;
  for (const auto& c : components) {
    require_same_grid(grid, c.rho.grid());
    detail::require(c.weight >= 0.0, ErrorCode::invalid_argument, "negative mixture weight");
    total += c.weight;
  }
  detail::require(std::abs(total - 1.0) <= 1e-12, ErrorCode::invalid_argument,
                  "mixture weights must sum to 1");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& c : components) acc += c.weight * c.rho.kernel();
  return SpectralDensityMatrix(grid, std::move(acc));
}

inline SpectralDensityMatrix mix(std::initializer_list<MixtureComponent> components) {
  return mix(std::span<const MixtureComponent>(components.begin(), components.size()));
}

/// Mixture of copies of psi displaced in time by a Gaussian-distributed
/// center time t_c with standard deviation jitter_std:
///   rho_ij = psi_i conj(psi_j) exp(-jitter_std^2 (omega_i - omega_j)^2 / 2).
/// The diagonal |psi_i|^2 does not depend on the jitter.
inline SpectralDensityMatrix time_jitter_state(const PureSpectralAmplitude& psi,
                                               double jitter_std) {
  detail::require(jitter_std >= 0.0 && std::isfinite(jitter_std), ErrorCode::invalid_argument,
                  "jitter_std must be non-negative");
  const FrequencyGrid& grid = psi.grid();
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXcd& v = psi.values();
  Eigen::MatrixXcd rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // (i - j) d_omega, not omega_i - omega_j, so the diagonal factor is exactly 1.
      const double dw = static_cast<double>(i - j) * grid.d_omega();
      rho(i, j) = v(i) * std::conj(v(j)) * std::exp(-0.5 * jitter_std * jitter_std * dw * dw);
    }
  }
  return SpectralDensityMatrix(grid, std::move(rho));
}

/// Mixture of copies of psi displaced in frequency by a Gaussian-distributed
/// offset omega_c (standard deviation jitter_std). Offsets are sampled at
/// multiples of d_omega so every component stays on the grid; components
/// shifted past the edges are truncated and the result renormalized to unit
/// trace.
inline SpectralDensityMatrix frequency_jitter_state(const PureSpectralAmplitude& psi,
                                                    double jitter_std,
                                                    Diagnostics* diags = nullptr) {
  detail::require(jitter_std >= 0.0 && std::isfinite(jitter_std), ErrorCode::invalid_argument,
                  "jitter_std must be non-negative");
  if (jitter_std == 0.0) return density_from_pure(psi);

  const FrequencyGrid& grid = psi.grid();
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  const double dw = grid.d_omega();
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(10.0 * jitter_std / dw));
  const std::ptrdiff_t max_shift = std::min(reach, n - 1);

  std::vector<double> weights;
  double weight_sum = 0.0;
  for (std::ptrdiff_t m = -max_shift; m <= max_shift; ++m) {
    const double c = static_cast<double>(m) * dw;
    weights.push_back(std::exp(-c * c / (2.0 * jitter_std * jitter_std)));
    weight_sum += weights.back();
  }
  // Gaussian tail beyond +-max_shift is not represented in the discrete weights.
  const double tail = std::erfc(static_cast<double>(max_shift) * dw /
                                (std::sqrt(2.0) * jitter_std));

  const Eigen::VectorXcd& v = psi.values();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd shifted(n);
  for (std::ptrdiff_t m = -max_shift; m <= max_shift; ++m) {
    const double w = weights[static_cast<std::size_t>(m + max_shift)] / weight_sum;
    shifted.setZero();
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const std::ptrdiff_t src = i - m;
      if (src >= 0 && src < n) shifted(i) = v(src);
    }
    rho.noalias() += w * shifted * shifted.adjoint();
  }
  const double kept = rho.diagonal().real().sum() * dw;
  const double clipped = 1.0 - kept * (1.0 - tail);
  if (diags != nullptr && clipped > kClippingWarnThreshold) {
    diags->push_back({"support-clipping",
                      "frequency-jittered support extends past the grid edges", clipped});
  }
  detail::require(kept > 0.0, ErrorCode::degenerate_input, "jittered state left the grid");
  rho /= kept;
  return SpectralDensityMatrix(grid, std::move(rho));
}

}  // namespace spectomo
