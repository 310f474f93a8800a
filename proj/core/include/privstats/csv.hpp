// Copyright 2026 The Privstats Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVSTATS_CSV_HPP_
#define PRIVSTATS_CSV_HPP_

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "privstats/analytics.hpp"

namespace privstats {

// Minimal CSV handling: header + comma-separated fields, no quoting (no field
// emitted by this library contains a comma or newline).

class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);  // UsageError on arity
  const std::string& text() const { return text_; }

  static std::string num(double v);  // shortest round-trip decimal
  static std::string num(int64_t v) { return std::to_string(v); }
  static std::string num(uint64_t v) { return std::to_string(v); }

 private:
  std::string text_;
  size_t columns_;
};

// Writes text to path, throwing IoError on failure.
void write_file(const std::string& path, const std::string& text);

struct CsvColumn {
  std::vector<double> values;
  size_t skipped = 0;  // rows dropped for missing or non-numeric entries
};

// Parses one named numeric column; header on the first line. An empty file
// yields an empty column. Throws IoError when the file or column is missing.
CsvColumn load_csv_values(const std::string& path, const std::string& column);

// Grid series as "slot,row,col,count" rows, zero cells omitted.
std::string grid_series_to_csv(const std::vector<HeatGrid>& series);

}  // namespace privstats

#endif  // PRIVSTATS_CSV_HPP_
