// Copyright 2026 The exforce Authors
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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlohmann/json.hpp"

namespace exforce {

enum class ReportKind { kCorrelation, kSeeding, kImmunization, kTiming };

std::string_view to_string(ReportKind kind);
ReportKind parse_report_kind(std::string_view name);

// Null cells print as empty CSV fields and JSON null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct ExperimentReport {
  ReportKind kind = ReportKind::kCorrelation;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;

  std::size_t column(std::string_view name) const;
  // Numeric view of a cell; nullopt for null or string cells.
  std::optional<double> number(std::size_t row, std::string_view column_name) const;
  std::vector<std::optional<double>> numbers(std::string_view column_name) const;

  void write_csv(std::ostream& out) const;
  // One metadata line followed by one object per row.
  void write_ndjson(std::ostream& out) const;
};

}  // namespace exforce
