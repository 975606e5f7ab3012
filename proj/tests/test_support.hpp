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

// Shared fixtures and brute-force oracles for the test suites. Oracles here
// evaluate the defining sums directly and do not call the library routine
// they are used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectomo/spectomo.hpp"

namespace spectomo::testing {

/// Random physical state: normalized A A^dagger with A complex Gaussian n x rank.
inline SpectralDensityMatrix random_state(const FrequencyGrid& grid, std::mt19937_64& rng,
                                          std::size_t rank = 0) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto r = rank == 0 ? n : static_cast<Eigen::Index>(rank);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd a(n, r);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::MatrixXcd op = a * a.adjoint();
  op /= op.trace().real();
  op = (0.5 * (op + op.adjoint())).eval();
  return SpectralDensityMatrix(grid, op / grid.d_omega());
}

struct Fixture {
  std::string name;
  SpectralDensityMatrix rho;
};

/// The five reference states on a 64-point grid spanning [-12, 12]:
/// pure Gaussian, chirped Gaussian, two-Gaussian mixture, time jitter,
/// frequency jitter.
inline FrequencyGrid fixture_grid() { return make_grid(0.0, 24.0, 64); }

inline std::vector<Fixture> standard_fixtures(const FrequencyGrid& grid = fixture_grid()) {
  const auto base = gaussian_pure(grid, 0.0, 1.0);
  const auto chirped = gaussian_pure(grid, 0.0, 1.0, 0.5);
  const auto left = density_from_pure(gaussian_pure(grid, -3.0, 1.0));
  const auto right = density_from_pure(gaussian_pure(grid, 3.0, 1.0));
  return {
      {"pure-gaussian", density_from_pure(base)},
      {"chirped-gaussian", density_from_pure(chirped)},
      {"two-gaussian-mixture", mix({{0.5, left}, {0.5, right}})},
      {"time-jitter", time_jitter_state(base, 1.0)},
      {"frequency-jitter", frequency_jitter_state(base, 1.0)},
  };
}

/// sum_ij |rho_ij|^2 d_omega^2 by explicit double loop.
inline double brute_force_purity(const Eigen::MatrixXcd& kernel, double d_omega) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    for (Eigen::Index j = 0; j < kernel.cols(); ++j) acc += std::norm(kernel(i, j));
  }
  return acc * d_omega * d_omega;
}

/// Mean and variance of the spectral distribution rho(w, w).
inline std::pair<double, double> diagonal_moments(const SpectralDensityMatrix& rho) {
  const auto& g = rho.grid();
  double mass = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mass += rho(i, i).real() * g.d_omega();
    mean += g.omega(i) * rho(i, i).real() * g.d_omega();
  }
  mean /= mass;
  double var = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.omega(i) - mean;
    var += x * x * rho(i, i).real() * g.d_omega();
  }
  return {mean, var / mass};
}

/// Hermitian perturbation that leaves the diagonal untouched and keeps a
/// full-rank state positive: rho + eps * (H - diag(H)) for small eps.
inline SpectralDensityMatrix perturb_off_diagonal(const SpectralDensityMatrix& rho, double eps,
                                                  std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(rho.size());
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) h(i, j) = Complex(normal(rng), normal(rng));
  }
  h = (0.5 * (h + h.adjoint())).eval();
  h.diagonal().setZero();
  return SpectralDensityMatrix(rho.grid(), rho.kernel() + eps * h);
}

}  // namespace spectomo::testing
