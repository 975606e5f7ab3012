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
#include <numbers>

#include <gtest/gtest.h>

#include "spectomo/grid.hpp"

namespace spectomo {
namespace {

TEST(FrequencyGrid, MakeGridCenteredSpan) {
  const auto g = make_grid(0.0, 10.0, 11);
  EXPECT_DOUBLE_EQ(g.omega_min(), -5.0);
  EXPECT_DOUBLE_EQ(g.d_omega(), 1.0);
  EXPECT_EQ(g.size(), 11u);
  EXPECT_DOUBLE_EQ(g.omega(10), 5.0);
}

TEST(FrequencyGrid, TwoPointEndpoints) {
  const auto g = make_grid(5.0, 10.0, 2);
  EXPECT_DOUBLE_EQ(g.omega(0), 0.0);
  EXPECT_DOUBLE_EQ(g.omega(1), 10.0);
}

TEST(FrequencyGrid, ConjugateLattice) {
  const auto g = make_grid(0.0, 2.0 * std::numbers::pi, 64);
  EXPECT_NEAR(g.d_tau() * g.d_omega() * 64.0, 2.0 * std::numbers::pi, 1e-14);
  EXPECT_DOUBLE_EQ(g.tau(0), 0.0);
  EXPECT_DOUBLE_EQ(g.tau(3), 3.0 * g.d_tau());
}

TEST(FrequencyGrid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(0.0, 0.0, 8), Error);
  EXPECT_THROW(make_grid(0.0, -1.0, 8), Error);
  EXPECT_THROW(make_grid(0.0, 1.0, 1), Error);
  try {
    make_grid(0.0, 1.0, 1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(FrequencyGrid, ExtendedKeepsOriginAndSpacing) {
  const auto g = make_grid(1.0, 4.0, 5);
  const auto e = g.extended(3);
  EXPECT_EQ(e.size(), 8u);
  EXPECT_EQ(e.omega_min(), g.omega_min());
  EXPECT_EQ(e.d_omega(), g.d_omega());
  EXPECT_FALSE(e == g);
}

}  // namespace
}  // namespace spectomo
