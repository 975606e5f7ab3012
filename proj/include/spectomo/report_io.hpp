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

#include <json.hpp>

#include "spectomo/errors.hpp"
#include "spectomo/reconstruction.hpp"

namespace spectomo {

inline nlohmann::json diagnostics_to_json(const Diagnostics& diags) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diags) {
    out.push_back({{"code", d.code}, {"message", d.message}, {"value", d.value}});
  }
  return out;
}

/// {purity, gamma_hat: [re, im], hs_distance?, overlap?,
///  min_eigenvalue_pre_projection, residuals, warnings}
inline nlohmann::json report_to_json(const ReportDocument& doc) {
  nlohmann::json out{{"purity", doc.purity},
                     {"gamma_hat", {doc.gamma_hat.real(), doc.gamma_hat.imag()}},
                     {"min_eigenvalue_pre_projection", doc.min_eigenvalue_pre_projection},
                     {"residuals", doc.residuals},
                     {"warnings", diagnostics_to_json(doc.warnings)}};
  if (doc.hs_distance) out["hs_distance"] = *doc.hs_distance;
  if (doc.overlap) out["overlap"] = *doc.overlap;
  return out;
}

}  // namespace spectomo
