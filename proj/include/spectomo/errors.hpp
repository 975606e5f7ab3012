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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spectomo {

enum class ErrorCode {
  invalid_argument,
  incompatible_grids,
  insufficient_data,
  calibration_missing,
  visibility_too_low,
  missing_settings,
  degenerate_input,
  format_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::incompatible_grids: return "incompatible-grids";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::calibration_missing: return "calibration-missing";
    case ErrorCode::visibility_too_low: return "visibility-too-low";
    case ErrorCode::missing_settings: return "missing-settings";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::format_error: return "format-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A non-fatal condition reported alongside a result. `value` carries the
/// numeric payload that triggered it (clipped mass, raw |gamma|, ...).
struct Diagnostic {
  std::string code;
  std::string message;
  double value = 0.0;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_diagnostic(const Diagnostics& diags, std::string_view code) {
  for (const auto& d : diags) {
    if (d.code == code) return true;
  }
  return false;
}

inline void append(Diagnostics& into, const Diagnostics& from) {
  into.insert(into.end(), from.begin(), from.end());
}

namespace detail {

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace detail

}  // namespace spectomo
