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

// JSON interchange for density matrices:
//   {"omega_min": .., "d_omega": .., "n": .., "units": "SI-rad-per-s",
//    "rho": [[re, im], ...]}   (n*n pairs, row-major)

#include <cstddef>
#include <fstream>
#include <string>

#include <json.hpp>

#include "spectomo/density.hpp"
#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"

namespace spectomo {

inline constexpr const char* kDensityUnits = "SI-rad-per-s";

inline nlohmann::json density_to_json(const SpectralDensityMatrix& rho) {
  const std::size_t n = rho.size();
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Lower triangle is written as the conjugate of the upper one.
      const Complex v = j >= i ? rho(i, j) : std::conj(rho(j, i));
      entries.push_back({v.real(), i == j ? 0.0 : v.imag()});
    }
  }
  return nlohmann::json{{"omega_min", rho.grid().omega_min()},
                        {"d_omega", rho.grid().d_omega()},
                        {"n", n},
                        {"units", kDensityUnits},
                        {"rho", std::move(entries)}};
}

inline SpectralDensityMatrix density_from_json(const nlohmann::json& doc) {
  try {
    detail::require(doc.is_object(), ErrorCode::format_error, "density document is not an object");
    for (const char* key : {"omega_min", "d_omega", "n", "rho", "units"}) {
      detail::require(doc.contains(key), ErrorCode::format_error,
                      std::string("density document lacks '") + key + "'");
    }
    detail::require(doc.at("units").get<std::string>() == kDensityUnits,
                    ErrorCode::format_error, "unsupported units");
    const FrequencyGrid grid(doc.at("omega_min").get<double>(), doc.at("d_omega").get<double>(),
                             doc.at("n").get<std::size_t>());
    const auto& flat = doc.at("rho");
    const std::size_t n = grid.size();
    detail::require(flat.is_array() && flat.size() == n * n, ErrorCode::format_error,
                    "rho must hold n*n [re, im] pairs");
    Eigen::MatrixXcd kernel(n, n);
    for (std::size_t k = 0; k < n * n; ++k) {
      const auto& pair = flat[k];
      detail::require(pair.is_array() && pair.size() == 2, ErrorCode::format_error,
                      "rho entry is not an [re, im] pair");
      kernel(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) =
          Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return SpectralDensityMatrix(grid, std::move(kernel));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format_error, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::format_error) throw;
    throw Error(ErrorCode::format_error, e.what());
  }
}

inline void write_density(const std::string& path, const SpectralDensityMatrix& rho) {
  std::ofstream out(path);
  detail::require(static_cast<bool>(out), ErrorCode::format_error, "cannot open " + path);
  out << density_to_json(rho).dump() << '\n';
}

inline SpectralDensityMatrix read_density(const std::string& path) {
  std::ifstream in(path);
  detail::require(static_cast<bool>(in), ErrorCode::format_error, "cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format_error, path + ": " + e.what());
  }
  return density_from_json(doc);
}

}  // namespace spectomo
