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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "spectomo/errors.hpp"

namespace spectomo {

/// Uniform angular-frequency lattice omega(i) = omega_min + i * d_omega,
/// 0 <= i < n, together with its conjugate delay lattice tau(k) = k * d_tau
/// where d_tau * d_omega * n = 2 pi.
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double d_omega, std::size_t n)
      : omega_min_(omega_min), d_omega_(d_omega), n_(n) {
    detail::require(std::isfinite(omega_min), ErrorCode::invalid_argument,
                    "omega_min must be finite");
    detail::require(d_omega > 0.0 && std::isfinite(d_omega), ErrorCode::invalid_argument,
                    "d_omega must be positive");
    detail::require(n >= 2, ErrorCode::invalid_argument, "grid needs at least 2 points");
  }

  double omega_min() const noexcept { return omega_min_; }
  double d_omega() const noexcept { return d_omega_; }
  std::size_t size() const noexcept { return n_; }

  double omega(std::size_t i) const noexcept {
    return omega_min_ + static_cast<double>(i) * d_omega_;
  }
  double omega_max() const noexcept { return omega(n_ - 1); }

  double d_tau() const noexcept {
    return 2.0 * std::numbers::pi / (static_cast<double>(n_) * d_omega_);
  }
  double tau(std::size_t k) const noexcept { return static_cast<double>(k) * d_tau(); }

  /// Same spacing and origin, `extra` more points at the high-frequency end.
  FrequencyGrid extended(std::size_t extra) const {
    return FrequencyGrid(omega_min_, d_omega_, n_ + extra);
  }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  double omega_min_;
  double d_omega_;
  std::size_t n_;
};

/// Grid of `n` points spanning [center - span/2, center + span/2] inclusive.
inline FrequencyGrid make_grid(double omega_center, double span, std::size_t n) {
  detail::require(span > 0.0 && std::isfinite(span), ErrorCode::invalid_argument,
                  "span must be positive");
  detail::require(n >= 2, ErrorCode::invalid_argument, "grid needs at least 2 points");
  return FrequencyGrid(omega_center - span / 2.0, span / static_cast<double>(n - 1), n);
}

inline void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::incompatible_grids,
                "grids differ (n=" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
}

}  // namespace spectomo
