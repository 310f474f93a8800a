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

#include "privstats/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "privstats/common.hpp"

namespace privstats {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

CsvBuilder::CsvBuilder(const std::vector<std::string>& header)
    : columns_(header.size()) {
  if (columns_ == 0) throw UsageError("csv header must be nonempty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_.push_back(',');
    text_ += header[i];
  }
  text_.push_back('\n');
}

void CsvBuilder::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw UsageError("csv row arity does not match the header");
  }
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) text_.push_back(',');
    text_ += fields[i];
  }
  text_.push_back('\n');
}

std::string CsvBuilder::num(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

CsvColumn load_csv_values(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) return CsvColumn{};  // empty file

  const auto header = split_fields(line);
  size_t index = header.size();
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) {
      index = i;
      break;
    }
  }
  if (index == header.size()) {
    throw IoError("column '" + column + "' not found in '" + path + "'");
  }

  CsvColumn out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (index >= fields.size()) {
      ++out.skipped;
      continue;
    }
    const std::string& f = fields[index];
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (end == f.c_str() || *end != '\0') {
      ++out.skipped;
      continue;
    }
    out.values.push_back(v);
  }
  return out;
}

std::string grid_series_to_csv(const std::vector<HeatGrid>& series) {
  CsvBuilder csv({"slot", "row", "col", "count"});
  for (size_t s = 0; s < series.size(); ++s) {
    const HeatGrid& g = series[s];
    for (uint32_t r = 0; r < g.p; ++r) {
      for (uint32_t c = 0; c < g.p; ++c) {
        if (g.at(r, c) == 0) continue;
        csv.row({std::to_string(s), std::to_string(r), std::to_string(c),
                 CsvBuilder::num(g.at(r, c))});
      }
    }
  }
  return csv.text();
}

}  // namespace privstats
