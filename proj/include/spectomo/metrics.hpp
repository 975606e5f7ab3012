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

#include "spectomo/density.hpp"
#include "spectomo/grid.hpp"

namespace spectomo {

/// tr(rho^2) = sum_ij |rho_ij|^2 d_omega^2
inline double purity(const SpectralDensityMatrix& rho) {
  const double dw = rho.grid().d_omega();
  return rho.kernel().squaredNorm() * dw * dw;
}

/// Hilbert-Schmidt overlap tr(rho1 rho2), used as the distinguishability
/// measure between two sources. The imaginary residue of the sum is dropped.
inline double hs_overlap(const SpectralDensityMatrix& rho1, const SpectralDensityMatrix& rho2) {
  require_same_grid(rho1.grid(), rho2.grid());
  const double dw = rho1.grid().d_omega();
  // sum_ij rho1_ij conj(rho2_ij)
  const Complex s = (rho2.kernel().conjugate().cwiseProduct(rho1.kernel())).sum();
  return s.real() * dw * dw;
}

/// sqrt(sum_ij |a_ij - b_ij|^2) d_omega
inline double hs_distance(const SpectralDensityMatrix& a, const SpectralDensityMatrix& b) {
  require_same_grid(a.grid(), b.grid());
  return (a.kernel() - b.kernel()).norm() * a.grid().d_omega();
}

}  // namespace spectomo
