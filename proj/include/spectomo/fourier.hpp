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

// Discrete transform between a band of the density kernel, g(omega_i), and
// its delay-domain signal
//
//   G(tau_k) = sum_i exp(-i tau_k omega_i) g(omega_i) d_omega,
//
// with tau_k = k d_tau on the grid's conjugate lattice. Writing
// omega_i = omega_min + i d_omega splits the kernel into a phase ramp
// exp(-i tau_k omega_min) and a plain DFT twiddle exp(-2 pi i k i / n); both
// factors are applied explicitly so the pair is an exact inverse for any
// grid offset.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"

namespace spectomo {
namespace detail {

/// exp(2 pi i m / n) for m in [0, n)
inline std::vector<std::complex<double>> twiddles(std::size_t n) {
  std::vector<std::complex<double>> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    w[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) /
                               static_cast<double>(n));
  }
  return w;
}

}  // namespace detail

inline Eigen::VectorXcd band_to_delay(const FrequencyGrid& grid, const Eigen::VectorXcd& band) {
  const std::size_t n = grid.size();
  detail::require(static_cast<std::size_t>(band.size()) == n, ErrorCode::invalid_argument,
                  "band length does not match grid");
  const auto w = detail::twiddles(n);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::conj(w[(k * i) % n]) * band(static_cast<Eigen::Index>(i));
    }
    const auto ramp = std::polar(1.0, -grid.tau(k) * grid.omega_min());
    out(static_cast<Eigen::Index>(k)) = ramp * acc * grid.d_omega();
  }
  return out;
}

/// Exact inverse of band_to_delay:
///   g(omega_i) = 1/(n d_omega) sum_k exp(+i tau_k omega_i) G(tau_k).
inline Eigen::VectorXcd delay_to_band(const FrequencyGrid& grid, const Eigen::VectorXcd& signal) {
  const std::size_t n = grid.size();
  detail::require(static_cast<std::size_t>(signal.size()) == n, ErrorCode::invalid_argument,
                  "signal length does not match grid");
  const auto w = detail::twiddles(n);
  std::vector<std::complex<double>> unramped(n);
  for (std::size_t k = 0; k < n; ++k) {
    unramped[k] = std::polar(1.0, grid.tau(k) * grid.omega_min()) *
                  signal(static_cast<Eigen::Index>(k));
  }
  const double scale = 1.0 / (static_cast<double>(n) * grid.d_omega());
  Eigen::VectorXcd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += w[(k * i) % n] * unramped[k];
    out(static_cast<Eigen::Index>(i)) = acc * scale;
  }
  return out;
}

}  // namespace spectomo
