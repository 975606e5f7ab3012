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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"

namespace spectomo {

using Complex = std::complex<double>;

/// Normalization tolerance of a pure amplitude: |sum |psi|^2 d_omega - 1|.
inline constexpr double kAmplitudeNormTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
/// Relative: min eigenvalue >= -kPsdTolerance * max eigenvalue.
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;

/// Spectral amplitude psi(omega_i) of a pure single-photon state, with
/// sum_i |psi_i|^2 d_omega = 1. Units s^{1/2}.
class PureSpectralAmplitude {
 public:
  /// Takes values that are already normalized; throws otherwise.
  PureSpectralAmplitude(FrequencyGrid grid, Eigen::VectorXcd values)
      : grid_(std::move(grid)), psi_(std::move(values)) {
    detail::require(static_cast<std::size_t>(psi_.size()) == grid_.size(),
                    ErrorCode::invalid_argument, "amplitude length does not match grid");
    const double norm = psi_.squaredNorm() * grid_.d_omega();
    detail::require(std::abs(norm - 1.0) <= kAmplitudeNormTolerance,
                    ErrorCode::invalid_argument, "amplitude is not normalized");
  }

  /// Rescales `values` to unit norm on the grid.
  static PureSpectralAmplitude normalized(FrequencyGrid grid, Eigen::VectorXcd values) {
    const double norm = values.squaredNorm() * grid.d_omega();
    detail::require(norm > 0.0 && std::isfinite(norm), ErrorCode::invalid_argument,
                    "cannot normalize a zero amplitude");
    values /= std::sqrt(norm);
    return PureSpectralAmplitude(std::move(grid), std::move(values));
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  const Eigen::VectorXcd& values() const noexcept { return psi_; }
  Complex operator[](std::size_t i) const { return psi_(static_cast<Eigen::Index>(i)); }

 private:
  FrequencyGrid grid_;
  Eigen::VectorXcd psi_;
};

/// Discretized kernel rho(omega_i, omega_j) (units s) of a single-photon
/// spectral density operator. The corresponding operator on the grid's
/// orthonormal bin basis is kernel * d_omega.
///
/// Hermiticity is exact: the constructor rejects kernels that are not
/// Hermitian to within kHermiticityTolerance (relative to the largest entry)
/// and rebuilds the lower triangle and diagonal from the upper triangle.
/// Trace and positivity are not enforced here; see validate().
class SpectralDensityMatrix {
 public:
  SpectralDensityMatrix(FrequencyGrid grid, Eigen::MatrixXcd kernel)
      : grid_(std::move(grid)), rho_(std::move(kernel)) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    detail::require(rho_.rows() == n && rho_.cols() == n, ErrorCode::invalid_argument,
                    "kernel shape does not match grid");
    const double scale = std::max(rho_.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    detail::require(asym <= kHermiticityTolerance * scale, ErrorCode::invalid_argument,
                    "kernel is not Hermitian");
    for (Eigen::Index i = 0; i < n; ++i) {
      rho_(i, i) = Complex(rho_(i, i).real(), 0.0);
      for (Eigen::Index j = i + 1; j < n; ++j) rho_(j, i) = std::conj(rho_(i, j));
    }
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const Eigen::MatrixXcd& kernel() const noexcept { return rho_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// sum_i rho_ii d_omega
  double trace() const { return rho_.diagonal().real().sum() * grid_.d_omega(); }

  /// Density operator in the bin basis (dimensionless, trace one).
  Eigen::MatrixXcd as_operator() const { return rho_ * grid_.d_omega(); }

 private:
  FrequencyGrid grid_;
  Eigen::MatrixXcd rho_;
};

struct ValidationReport {
  double trace_deviation = 0.0;
  double hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double min_diagonal = 0.0;

  bool trace_ok = false;
  bool hermitian_ok = false;
  bool psd_ok = false;
  bool diagonal_ok = false;

  bool passed() const noexcept { return trace_ok && hermitian_ok && psd_ok && diagonal_ok; }
};

/// Checks a raw kernel against the density-matrix invariants. Eigenvalues are
/// those of the Hermitian part of the operator kernel * d_omega.
inline ValidationReport validate(const FrequencyGrid& grid, const Eigen::MatrixXcd& kernel) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  detail::require(kernel.rows() == n && kernel.cols() == n, ErrorCode::invalid_argument,
                  "kernel shape does not match grid");
  ValidationReport r;
  const double dw = grid.d_omega();
  r.trace_deviation = std::abs(kernel.diagonal().real().sum() * dw - 1.0);
  r.hermiticity_deviation = (kernel - kernel.adjoint()).cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd op = 0.5 * (kernel + kernel.adjoint()) * dw;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.max_eigenvalue = solver.eigenvalues().maxCoeff();
  r.min_diagonal = kernel.diagonal().real().minCoeff();

  const double max_abs_diag = kernel.diagonal().cwiseAbs().maxCoeff();
  const bool diag_real = (kernel.diagonal().imag().array() == 0.0).all();
  r.trace_ok = r.trace_deviation <= kTraceTolerance;
  r.hermitian_ok = r.hermiticity_deviation <= kHermiticityTolerance * std::max(max_abs_diag, 1.0);
  r.psd_ok = r.min_eigenvalue >= -kPsdTolerance * std::max(r.max_eigenvalue, 0.0);
  r.diagonal_ok = diag_real && r.min_diagonal >= -kPsdTolerance * max_abs_diag;
  return r;
}

inline ValidationReport validate(const SpectralDensityMatrix& rho) {
  return validate(rho.grid(), rho.kernel());
}

}  // namespace spectomo
