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

// Measurement-record CSV, also the import path for laboratory data:
//
//   delta_index,tau_index,theta_rad,shots_attempted,shots_postselected,counts_A,counts_B
//
// One row per setting, LF line endings. Reals are written in shortest
// round-trip form.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spectomo/errors.hpp"
#include "spectomo/grid.hpp"
#include "spectomo/measurement.hpp"

namespace spectomo {

inline constexpr std::string_view kRecordHeader =
    "delta_index,tau_index,theta_rad,shots_attempted,shots_postselected,counts_A,counts_B";

/// Shortest decimal string that parses back to the same double.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace detail {

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::format_error, "line " + std::to_string(line) + ": bad " + name +
                                             " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace detail

inline void write_records(std::ostream& out, const std::vector<MeasurementRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.setting.delta_index << ',' << r.tau_index << ',' << format_real(r.setting.theta)
        << ',' << r.shots_attempted << ',' << format_real(r.shots_postselected) << ','
        << format_real(r.counts_a) << ',' << format_real(r.counts_b) << '\n';
  }
}

/// Parses records; tau is recovered from tau_index on `grid`.
inline std::vector<MeasurementRecord> read_records(std::istream& in, const FrequencyGrid& grid) {
  std::string line;
  detail::require(static_cast<bool>(std::getline(in, line)), ErrorCode::format_error,
                  "empty record file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  detail::require(line == kRecordHeader, ErrorCode::format_error,
                  "unexpected header '" + line + "'");

  std::vector<MeasurementRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    detail::require(fields.size() == 7, ErrorCode::format_error,
                    "line " + std::to_string(line_no) + ": expected 7 fields");
    MeasurementRecord r;
    r.setting.delta_index = detail::parse_field<std::size_t>(fields[0], line_no, "delta_index");
    r.tau_index = detail::parse_field<std::size_t>(fields[1], line_no, "tau_index");
    r.setting.theta = detail::parse_field<double>(fields[2], line_no, "theta_rad");
    r.shots_attempted = detail::parse_field<std::uint64_t>(fields[3], line_no, "shots_attempted");
    r.shots_postselected = detail::parse_field<double>(fields[4], line_no, "shots_postselected");
    r.counts_a = detail::parse_field<double>(fields[5], line_no, "counts_A");
    r.counts_b = detail::parse_field<double>(fields[6], line_no, "counts_B");

    const auto where = "line " + std::to_string(line_no) + ": ";
    detail::require(r.setting.delta_index < grid.size() && r.tau_index < grid.size(),
                    ErrorCode::format_error, where + "index outside grid");
    detail::require(r.counts_a >= 0.0 && r.counts_b >= 0.0 && r.shots_postselected >= 0.0,
                    ErrorCode::format_error, where + "negative count");
    detail::require(
        std::abs(r.counts_a + r.counts_b - r.shots_postselected) <= 1e-9 * std::max(1.0, r.shots_postselected),
        ErrorCode::format_error, where + "counts_A + counts_B != shots_postselected");
    detail::require(r.shots_postselected <= static_cast<double>(r.shots_attempted) * (1.0 + 1e-12),
                    ErrorCode::format_error, where + "more post-selected than attempted shots");
    r.setting.tau = grid.tau(r.tau_index);
    records.push_back(r);
  }
  return records;
}

inline void write_records(const std::string& path, const std::vector<MeasurementRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  detail::require(static_cast<bool>(out), ErrorCode::format_error, "cannot open " + path);
  write_records(out, records);
}

inline std::vector<MeasurementRecord> read_records(const std::string& path,
                                                   const FrequencyGrid& grid) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), ErrorCode::format_error, "cannot open " + path);
  return read_records(in, grid);
}

}  // namespace spectomo
