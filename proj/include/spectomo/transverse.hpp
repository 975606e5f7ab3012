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

// Transverse (x, y) mode profiles and their overlap, which sets the fringe
// visibility gamma of the interferometer.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "spectomo/errors.hpp"

namespace spectomo {

struct TransverseGrid {
  double x_min = 0.0;
  double dx = 1.0;
  std::size_t nx = 0;
  double y_min = 0.0;
  double dy = 1.0;
  std::size_t ny = 0;

  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx; }
  double y(std::size_t j) const noexcept { return y_min + static_cast<double>(j) * dy; }

  friend bool operator==(const TransverseGrid&, const TransverseGrid&) = default;
};

/// Square grid of n x n points spanning [-half_width, half_width] on both axes.
inline TransverseGrid make_transverse_grid(double half_width, std::size_t n) {
  detail::require(half_width > 0.0 && n >= 2, ErrorCode::invalid_argument,
                  "transverse grid needs positive width and n >= 2");
  const double step = 2.0 * half_width / static_cast<double>(n - 1);
  return {-half_width, step, n, -half_width, step, n};
}

/// Amplitude psi(x_i, y_j), normalized so sum |psi|^2 dx dy = 1.
class TransverseMode {
 public:
  TransverseMode(TransverseGrid grid, Eigen::MatrixXcd amplitude)
      : grid_(grid), psi_(std::move(amplitude)) {
    detail::require(grid_.nx > 0 && grid_.ny > 0 && grid_.dx > 0.0 && grid_.dy > 0.0,
                    ErrorCode::invalid_argument, "degenerate transverse grid");
    detail::require(static_cast<std::size_t>(psi_.rows()) == grid_.nx &&
                        static_cast<std::size_t>(psi_.cols()) == grid_.ny,
                    ErrorCode::invalid_argument, "amplitude shape does not match grid");
    const double norm = psi_.squaredNorm() * grid_.dx * grid_.dy;
    detail::require(std::abs(norm - 1.0) <= 1e-10, ErrorCode::invalid_argument,
                    "transverse mode is not normalized");
  }

  static TransverseMode normalized(TransverseGrid grid, Eigen::MatrixXcd amplitude) {
    const double norm = amplitude.squaredNorm() * grid.dx * grid.dy;
    detail::require(norm > 0.0 && std::isfinite(norm), ErrorCode::invalid_argument,
                    "cannot normalize a zero mode");
    amplitude /= std::sqrt(norm);
    return TransverseMode(grid, std::move(amplitude));
  }

  const TransverseGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXcd& amplitude() const noexcept { return psi_; }

 private:
  TransverseGrid grid_;
  Eigen::MatrixXcd psi_;
};

/// psi ~ exp(-((x - x0)^2 + (y - y0)^2) / (2 waist^2)); two such modes
/// displaced by d overlap with |gamma| = exp(-d^2 / (4 waist^2)).
inline TransverseMode gaussian_transverse_mode(const TransverseGrid& grid, double x0, double y0,
                                               double waist) {
  detail::require(waist > 0.0, ErrorCode::invalid_argument, "waist must be positive");
  Eigen::MatrixXcd a(grid.nx, grid.ny);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const double rx = grid.x(i) - x0;
      const double ry = grid.y(j) - y0;
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::exp(-(rx * rx + ry * ry) / (2.0 * waist * waist));
    }
  }
  return TransverseMode::normalized(grid, std::move(a));
}

/// gamma = sum conj(psi) psi' dx dy
inline std::complex<double> spatial_overlap(const TransverseMode& psi,
                                            const TransverseMode& psi_prime) {
  if (!(psi.grid() == psi_prime.grid())) {
    throw Error(ErrorCode::incompatible_grids, "transverse grids differ");
  }
  const auto s = (psi.amplitude().conjugate().cwiseProduct(psi_prime.amplitude())).sum();
  return s * psi.grid().dx * psi.grid().dy;
}

}  // namespace spectomo
