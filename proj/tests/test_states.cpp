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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "spectomo/density.hpp"
#include "spectomo/metrics.hpp"
#include "spectomo/states.hpp"
#include "test_support.hpp"

namespace spectomo {
namespace {

using testing::brute_force_purity;
using testing::diagonal_moments;

const FrequencyGrid kGrid = make_grid(0.0, 16.0, 64);

TEST(GaussianPure, NormalizedOnGrid) {
  const auto psi = gaussian_pure(kGrid, 0.0, 1.0);
  EXPECT_NEAR(psi.values().squaredNorm() * kGrid.d_omega(), 1.0, 1e-12);
}

TEST(GaussianPure, UnchirpedIsReal) {
  const auto psi = gaussian_pure(kGrid, 0.7, 1.3);
  EXPECT_EQ(psi.values().imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(GaussianPure, ChirpLeavesModulusUnchanged) {
  const auto flat = gaussian_pure(kGrid, 0.0, 1.0, 0.0);
  const auto chirped = gaussian_pure(kGrid, 0.0, 1.0, 0.5);
  EXPECT_LT((flat.values().cwiseAbs2() - chirped.values().cwiseAbs2()).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_GT(chirped.values().imag().cwiseAbs().maxCoeff(), 0.1);
}

TEST(GaussianPure, RejectsNonPositiveSigma) {
  EXPECT_THROW(gaussian_pure(kGrid, 0.0, 0.0), Error);
  EXPECT_THROW(gaussian_pure(kGrid, 0.0, -1.0), Error);
}

TEST(GaussianPure, WarnsWhenSupportLeavesGrid) {
  Diagnostics diags;
  gaussian_pure(kGrid, 6.0, 1.0, 0.0, &diags);
  EXPECT_TRUE(has_diagnostic(diags, "grid-coverage"));
  diags.clear();
  gaussian_pure(kGrid, 0.0, 1.0, 0.0, &diags);
  EXPECT_TRUE(diags.empty());
}

TEST(PureSpectralAmplitude, RejectsUnnormalized) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(kGrid.size()));
  EXPECT_THROW(PureSpectralAmplitude(kGrid, v), Error);
  EXPECT_NO_THROW(PureSpectralAmplitude::normalized(kGrid, v));
}

TEST(DensityFromPure, MatchesAnalyticGaussianKernel) {
  const auto rho = density_from_pure(gaussian_pure(kGrid, 0.0, 1.0));
  // Analytic kernel exp(-(w1^2 + w2^2)/4)/sqrt(2 pi), rescaled by the grid
  // normalization of the sampled Gaussian.
  double z = 0.0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    z += std::exp(-kGrid.omega(i) * kGrid.omega(i) / 2.0) / std::sqrt(2.0 * std::numbers::pi) *
         kGrid.d_omega();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    for (std::size_t j = 0; j < kGrid.size(); ++j) {
      const double wi = kGrid.omega(i);
      const double wj = kGrid.omega(j);
      const double expected =
          std::exp(-(wi * wi + wj * wj) / 4.0) / std::sqrt(2.0 * std::numbers::pi) / z;
      worst = std::max(worst, std::abs(rho(i, j) - expected));
    }
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_LT(std::abs(z - 1.0), 1e-10);
}

TEST(DensityFromPure, UnitTraceRankOnePure) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(kGrid.size()));
  for (auto& x : v) x = Complex(normal(rng), normal(rng));
  const auto rho = density_from_pure(PureSpectralAmplitude::normalized(kGrid, v));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  EXPECT_NEAR(purity(rho), 1.0, 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.as_operator());
  EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0, 1e-10);
  EXPECT_LT(es.eigenvalues().head(kGrid.size() - 1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(validate(rho).passed());
}

TEST(Mix, IdentityMixture) {
  const auto rho = density_from_pure(gaussian_pure(kGrid, 1.0, 1.0));
  const auto same = mix({{1.0, rho}});
  EXPECT_EQ(same.kernel(), rho.kernel());
}

TEST(Mix, SelfMixtureKeepsPurity) {
  const auto rho = time_jitter_state(gaussian_pure(kGrid, 0.0, 1.0), 0.8);
  EXPECT_NEAR(purity(mix({{0.5, rho}, {0.5, rho}})), purity(rho), 1e-14);
}

TEST(Mix, FarSeparatedPairIsHalfPure) {
  const auto g = make_grid(0.0, 30.0, 128);
  const auto a = density_from_pure(gaussian_pure(g, -5.0, 1.0));
  const auto b = density_from_pure(gaussian_pure(g, 5.0, 1.0));
  const auto m = mix({{0.5, a}, {0.5, b}});
  EXPECT_NEAR(purity(m), 0.5, 1e-3);
  EXPECT_NEAR(brute_force_purity(m.kernel(), g.d_omega()), 0.5, 1e-3);
}

TEST(Mix, RejectsBadInputs) {
  const auto rho = density_from_pure(gaussian_pure(kGrid, 0.0, 1.0));
  EXPECT_THROW(mix({{0.6, rho}, {0.6, rho}}), Error);
  EXPECT_THROW(mix({{-0.5, rho}, {1.5, rho}}), Error);
  const auto other = density_from_pure(gaussian_pure(make_grid(0.0, 16.0, 32), 0.0, 1.0));
  try {
    mix({{0.5, rho}, {0.5, other}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::incompatible_grids);
  }
}

TEST(TimeJitter, ZeroJitterIsPure) {
  const auto psi = gaussian_pure(kGrid, 0.5, 1.0, 0.2);
  EXPECT_LT((time_jitter_state(psi, 0.0).kernel() - density_from_pure(psi).kernel())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(TimeJitter, DiagonalIndependentOfJitter) {
  const auto psi = gaussian_pure(kGrid, 0.0, 1.0, 0.3);
  for (double s : {0.0, 0.3, 1.0, 5.0}) {
    const auto rho = time_jitter_state(psi, s);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
      EXPECT_NEAR(rho(i, i).real(), std::norm(psi[i]), 1e-12);
    }
  }
}

TEST(TimeJitter, PurityMatchesCenterTimeIntegration) {
  // Mixture of time-displaced copies integrated over t_c directly:
  // rho(w1, w2) = sum_c f(t_c) psi(w1) e^{-i w1 t_c} conj(psi(w2) e^{-i w2 t_c}) dt.
  const double jitter = 1.0;
  const auto psi = gaussian_pure(kGrid, 0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(kGrid.size());
  Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Zero(n, n);
  const int points = 201;
  const double t_max = 8.0 * jitter;
  const double dt = 2.0 * t_max / (points - 1);
  for (int c = 0; c < points; ++c) {
    const double tc = -t_max + c * dt;
    const double f = std::exp(-tc * tc / (2.0 * jitter * jitter)) /
                     (std::sqrt(2.0 * std::numbers::pi) * jitter);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex a = psi[static_cast<std::size_t>(i)] *
                        std::polar(1.0, -kGrid.omega(static_cast<std::size_t>(i)) * tc);
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex b = psi[static_cast<std::size_t>(j)] *
                          std::polar(1.0, -kGrid.omega(static_cast<std::size_t>(j)) * tc);
        oracle(i, j) += f * a * std::conj(b) * dt;
      }
    }
  }
  const auto rho = time_jitter_state(psi, jitter);
  EXPECT_NEAR(purity(rho), brute_force_purity(oracle, kGrid.d_omega()), 1e-4);
  // Continuum value 1 / sqrt(1 + 4 s^2 sigma^2).
  EXPECT_NEAR(purity(rho), 1.0 / std::sqrt(5.0), 1e-6);
}

TEST(TimeJitter, RejectsNegativeJitter) {
  EXPECT_THROW(time_jitter_state(gaussian_pure(kGrid, 0.0, 1.0), -0.1), Error);
}

TEST(FrequencyJitter, ZeroJitterIsPure) {
  const auto psi = gaussian_pure(kGrid, 0.0, 1.0, 0.4);
  EXPECT_EQ(frequency_jitter_state(psi, 0.0).kernel(), density_from_pure(psi).kernel());
}

TEST(FrequencyJitter, DiagonalVarianceAddsInQuadrature) {
  const auto g = make_grid(0.0, 40.0, 160);
  Diagnostics diags;
  const auto rho = frequency_jitter_state(gaussian_pure(g, 0.0, 1.0), 2.0, &diags);
  const auto [mean, var] = diagonal_moments(rho);
  EXPECT_NEAR(mean, 0.0, 1e-10);
  EXPECT_NEAR(var, 5.0, 1e-3);
  EXPECT_TRUE(diags.empty());
  EXPECT_TRUE(validate(rho).passed());
}

TEST(FrequencyJitter, PurityDecreasesWithJitter) {
  const auto g = make_grid(0.0, 40.0, 128);
  const auto psi = gaussian_pure(g, 0.0, 1.0);
  double previous = 2.0;
  for (double s : {0.0, 0.5, 1.0, 2.0}) {
    const double p = purity(frequency_jitter_state(psi, s));
    EXPECT_LT(p, previous) << "jitter " << s;
    previous = p;
  }
  // Continuum value 1 / sqrt(1 + s^2 / sigma^2) at s = 2.
  EXPECT_NEAR(purity(frequency_jitter_state(psi, 2.0)), 1.0 / std::sqrt(5.0), 1e-4);
}

TEST(FrequencyJitter, WarnsOnEdgeClipping) {
  Diagnostics diags;
  const auto rho = frequency_jitter_state(gaussian_pure(kGrid, 0.0, 1.0), 4.0, &diags);
  EXPECT_TRUE(has_diagnostic(diags, "support-clipping"));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
}

TEST(Purity, MaximallyMixedIsOneOverN) {
  const auto n = static_cast<Eigen::Index>(kGrid.size());
  const SpectralDensityMatrix rho(kGrid, Eigen::MatrixXcd::Identity(n, n) /
                                             (static_cast<double>(n) * kGrid.d_omega()));
  EXPECT_NEAR(purity(rho), 1.0 / static_cast<double>(n), 1e-14);
}

TEST(HsOverlap, SelfOverlapIsPurity) {
  const auto rho = time_jitter_state(gaussian_pure(kGrid, 0.0, 1.0), 0.7);
  EXPECT_NEAR(hs_overlap(rho, rho), purity(rho), 1e-15);
}

TEST(HsOverlap, DisplacedGaussians) {
  const auto a = density_from_pure(gaussian_pure(kGrid, 0.0, 1.0));
  const auto b = density_from_pure(gaussian_pure(kGrid, 2.0, 1.0));
  EXPECT_NEAR(hs_overlap(a, b), std::exp(-1.0), 1e-4);
  // Direct sum of |<psi_a|psi_b>|^2.
  const auto pa = gaussian_pure(kGrid, 0.0, 1.0);
  const auto pb = gaussian_pure(kGrid, 2.0, 1.0);
  Complex inner = 0.0;
  for (std::size_t i = 0; i < kGrid.size(); ++i) inner += std::conj(pa[i]) * pb[i] * kGrid.d_omega();
  EXPECT_NEAR(hs_overlap(a, b), std::norm(inner), 1e-12);
}

TEST(HsOverlap, DisjointSupport) {
  const auto n = static_cast<Eigen::Index>(kGrid.size());
  Eigen::VectorXcd lo = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd hi = Eigen::VectorXcd::Zero(n);
  lo.head(n / 2).setOnes();
  hi.tail(n / 2).setOnes();
  const auto a = density_from_pure(PureSpectralAmplitude::normalized(kGrid, lo));
  const auto b = density_from_pure(PureSpectralAmplitude::normalized(kGrid, hi));
  EXPECT_NEAR(hs_overlap(a, b), 0.0, 1e-10);
}

TEST(Validate, FactoryOutputPasses) {
  const auto report = validate(density_from_pure(gaussian_pure(kGrid, 0.0, 1.0)));
  EXPECT_TRUE(report.passed());
  EXPECT_LT(report.trace_deviation, 1e-12);
  EXPECT_EQ(report.hermiticity_deviation, 0.0);
}

TEST(Validate, DetectsBrokenHermiticity) {
  Eigen::MatrixXcd k = density_from_pure(gaussian_pure(kGrid, 0.0, 1.0)).kernel();
  k(3, 5) += 1e-3;
  const auto report = validate(kGrid, k);
  EXPECT_FALSE(report.hermitian_ok);
  EXPECT_FALSE(report.passed());
  EXPECT_NEAR(report.hermiticity_deviation, 1e-3, 1e-12);
  EXPECT_THROW(SpectralDensityMatrix(kGrid, k), Error);
}

TEST(Validate, DetectsTraceError) {
  const auto rho = density_from_pure(gaussian_pure(kGrid, 0.0, 1.0));
  const auto report = validate(SpectralDensityMatrix(kGrid, 2.0 * rho.kernel()));
  EXPECT_FALSE(report.trace_ok);
  EXPECT_NEAR(report.trace_deviation, 1.0, 1e-12);
  EXPECT_TRUE(report.psd_ok);
}

TEST(Validate, DetectsNegativeEigenvalue) {
  const auto n = static_cast<Eigen::Index>(kGrid.size());
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(n, n) / (static_cast<double>(n) * kGrid.d_omega());
  k(0, 1) = k(1, 0) = 2.0 / (static_cast<double>(n) * kGrid.d_omega());
  EXPECT_FALSE(validate(kGrid, k).psd_ok);
}

// Properties over randomized constructions.

TEST(StateProperties, FactoryClosureAndPurityBounds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.6, 1.5);
  std::uniform_real_distribution<double> jitter(0.0, 2.0);
  const double n = static_cast<double>(kGrid.size());
  for (int trial = 0; trial < 30; ++trial) {
    const auto psi = gaussian_pure(kGrid, center(rng), width(rng), jitter(rng) - 1.0);
    for (const auto& rho : {density_from_pure(psi), time_jitter_state(psi, jitter(rng)),
                            frequency_jitter_state(psi, jitter(rng))}) {
      EXPECT_TRUE(validate(rho).passed());
      const double p = purity(rho);
      EXPECT_GE(p, 1.0 / n);
      EXPECT_LE(p, 1.0 + 1e-10);
    }
  }
}

TEST(StateProperties, MixturePurityCauchySchwarzBound) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int count = 2 + trial % 3;
    std::vector<MixtureComponent> parts;
    double total = 0.0;
    for (int c = 0; c < count; ++c) {
      const double w = u(rng) + 0.05;
      total += w;
      const auto psi = gaussian_pure(kGrid, 4.0 * u(rng) - 2.0, 0.5 + u(rng));
      parts.push_back({w, time_jitter_state(psi, 2.0 * u(rng))});
    }
    for (auto& p : parts) p.weight /= total;
    // Exact renormalization so the weights pass the 1e-12 sum check.
    double s = 0.0;
    for (std::size_t c = 0; c + 1 < parts.size(); ++c) s += parts[c].weight;
    parts.back().weight = 1.0 - s;

    const double mixed = purity(mix(parts));
    double bound = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      bound += parts[k].weight * purity(parts[k].rho);
      for (std::size_t l = k + 1; l < parts.size(); ++l) {
        bound += 2.0 * parts[k].weight * parts[l].weight *
                 std::sqrt(purity(parts[k].rho) * purity(parts[l].rho));
      }
    }
    EXPECT_LE(mixed, bound + 1e-12);
  }
}

TEST(StateProperties, GridRefinementStability) {
  // n -> 2n - 1 over a fixed span halves d_omega exactly.
  const auto coarse = make_grid(0.0, 20.0, 65);
  const auto fine = make_grid(0.0, 20.0, 129);
  auto jittered = [](const FrequencyGrid& g) {
    return purity(time_jitter_state(gaussian_pure(g, 0.0, 1.0, 0.25), 0.8));
  };
  auto mixture = [](const FrequencyGrid& g) {
    return purity(mix({{0.3, density_from_pure(gaussian_pure(g, -1.5, 1.0))},
                       {0.7, density_from_pure(gaussian_pure(g, 2.0, 1.0))}}));
  };
  EXPECT_LT(std::abs(jittered(coarse) - jittered(fine)), 1e-6);
  EXPECT_LT(std::abs(mixture(coarse) - mixture(fine)), 1e-6);
}

}  // namespace
}  // namespace spectomo
