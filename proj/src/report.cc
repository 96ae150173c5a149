// Copyright 2026 The selftag Authors. All Rights Reserved.
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

#include "selftag/report.h"

#include <charconv>
#include <cmath>

#include "selftag/error.h"

namespace selftag {
namespace {

bool Matches(const Cell& cell, ColumnType type) {
  switch (type) {
    case ColumnType::kInt: return std::holds_alternative<int64_t>(cell);
    case ColumnType::kReal: return std::holds_alternative<double>(cell);
    case ColumnType::kText: return std::holds_alternative<std::string>(cell);
  }
  return false;
}

}  // namespace

std::string FormatShortest(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Report::Report(std::string name, std::vector<Column> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) {
    throw Error(ErrorCode::kReportSchema, "report '" + name_ + "' has no columns");
  }
}

void Report::AddRow(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::kReportSchema,
                "report '" + name_ + "': row has " + std::to_string(row.size()) +
                    " cells, schema has " + std::to_string(columns_.size()));
  }
  for (size_t i = 0; i < row.size(); ++i) {
    if (!Matches(row[i], columns_[i].type)) {
      throw Error(ErrorCode::kReportSchema,
                  "report '" + name_ + "': column '" + columns_[i].name +
                      "' has the wrong type");
    }
  }
  rows_.push_back(std::move(row));
}

void Report::Validate() const {
  for (const auto& row : rows_) {
    if (row.size() != columns_.size()) {
      throw Error(ErrorCode::kReportSchema, "report '" + name_ + "': ragged row");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (!Matches(row[i], columns_[i].type)) {
        throw Error(ErrorCode::kReportSchema,
                    "report '" + name_ + "': bad cell in '" + columns_[i].name + "'");
      }
    }
  }
}

int Report::ColumnIndex(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

double Report::Real(size_t row, const std::string& column) const {
  int c = ColumnIndex(column);
  if (c < 0) throw Error(ErrorCode::kReportSchema, "no column '" + column + "'");
  return std::get<double>(rows_.at(row)[c]);
}

int64_t Report::Int(size_t row, const std::string& column) const {
  int c = ColumnIndex(column);
  if (c < 0) throw Error(ErrorCode::kReportSchema, "no column '" + column + "'");
  return std::get<int64_t>(rows_.at(row)[c]);
}

const std::string& Report::Text(size_t row, const std::string& column) const {
  int c = ColumnIndex(column);
  if (c < 0) throw Error(ErrorCode::kReportSchema, "no column '" + column + "'");
  return std::get<std::string>(rows_.at(row)[c]);
}

std::string Report::ToTsv() const {
  Validate();
  std::string out;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out += '\t';
    out += columns_[i].name;
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += '\t';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out += FormatShortest(v);
            } else if constexpr (std::is_same_v<T, int64_t>) {
              out += std::to_string(v);
            } else {
              out += v;
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json Report::ToJson() const {
  Validate();
  nlohmann::ordered_json j;
  j["report"] = name_;
  auto& cols = j["columns"];
  cols = nlohmann::ordered_json::array();
  for (const auto& c : columns_) cols.push_back(c.name);
  auto& rows = j["rows"];
  rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isnan(v)) {
                obj[columns_[i].name] = nullptr;
              } else {
                obj[columns_[i].name] = v;
              }
            } else {
              obj[columns_[i].name] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return j;
}

}  // namespace selftag
