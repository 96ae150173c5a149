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

#ifndef SELFTAG_REPORT_H_
#define SELFTAG_REPORT_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace selftag {

enum class ColumnType { kInt, kReal, kText };

struct Column {
  std::string name;
  ColumnType type;
};

using Cell = std::variant<int64_t, double, std::string>;

// A rectangular, typed table. Rows are checked against the schema when added
// and again before serialization; reals are written in shortest round-trip
// form so identical runs give identical bytes.
class Report {
 public:
  Report(std::string name, std::vector<Column> columns);

  const std::string& name() const { return name_; }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  size_t num_rows() const { return rows_.size(); }

  void AddRow(std::vector<Cell> row);  // throws kReportSchema
  void Validate() const;               // throws kReportSchema

  int ColumnIndex(const std::string& name) const;  // -1 when absent
  double Real(size_t row, const std::string& column) const;
  int64_t Int(size_t row, const std::string& column) const;
  const std::string& Text(size_t row, const std::string& column) const;

  std::string ToTsv() const;
  nlohmann::ordered_json ToJson() const;

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string FormatShortest(double value);

}  // namespace selftag

#endif  // SELFTAG_REPORT_H_
