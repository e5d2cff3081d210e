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

#include "exforce/report.hpp"

#include <algorithm>
#include <stdexcept>

#include "exforce/errors.hpp"
#include "fmt/format.h"

namespace exforce {

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::kCorrelation:
      return "correlation";
    case ReportKind::kSeeding:
      return "seeding";
    case ReportKind::kImmunization:
      return "immunization";
    case ReportKind::kTiming:
      return "timing";
  }
  return "unknown";
}

ReportKind parse_report_kind(std::string_view name) {
  for (auto kind : {ReportKind::kCorrelation, ReportKind::kSeeding, ReportKind::kImmunization,
                    ReportKind::kTiming}) {
    if (name == to_string(kind)) return kind;
  }
  throw UsageError("unknown experiment kind '" + std::string(name) + "'");
}

std::size_t ExperimentReport::column(std::string_view name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::optional<double> ExperimentReport::number(std::size_t row, std::string_view column_name) const {
  const Cell& cell = rows.at(row).at(column(column_name));
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nullopt;
}

std::vector<std::optional<double>> ExperimentReport::numbers(std::string_view column_name) const {
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, column_name));
  return out;
}

namespace {

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return fmt::format("{:.9g}", v); }
  std::string operator()(const std::string& v) const {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string quoted = "\"";
    for (char c : v) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + '"';
  }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const { return v; }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace

void ExperimentReport::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
    }
    out << '\n';
  }
}

void ExperimentReport::write_ndjson(std::ostream& out) const {
  nlohmann::ordered_json head = {{"type", "metadata"},
                                 {"kind", to_string(kind)},
                                 {"columns", columns},
                                 {"metadata", metadata},
                                 {"warnings", warnings}};
  out << head.dump() << '\n';
  for (const auto& row : rows) {
    nlohmann::ordered_json line = {{"type", "row"}, {"kind", to_string(kind)}};
    for (std::size_t c = 0; c < row.size(); ++c) line[columns[c]] = std::visit(JsonCell{}, row[c]);
    out << line.dump() << '\n';
  }
}

}  // namespace exforce
