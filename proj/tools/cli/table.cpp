// Copyright 2026 The qme authors
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

#include "table.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"

namespace qme_cli {

std::string format_g17(double v) {
  // Shortest representation that parses back to the same double.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Table::Table(std::string kind, std::string config_echo,
             std::vector<std::string> columns)
    : columns_(std::move(columns)) {
  header_ = "# qme " + kind + " v1\n# config: " + config_echo + "\n";
}

void Table::comment(const std::string& line) {
  header_ += "# " + line + "\n";
}

void Table::add_row(const std::vector<double>& values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) row += ',';
    row += format_g17(values[i]);
  }
  rows_.push_back(std::move(row));
}

void Table::add_row_raw(const std::string& line) { rows_.push_back(line); }

std::string Table::str() const {
  std::ostringstream out;
  out << header_;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i > 0 ? "," : "") << columns_[i];
  }
  out << "\n";
  for (const std::string& row : rows_) out << row << "\n";
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw ConfigError("cannot create directory for " + path);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw ConfigError("cannot rename into place: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qme_cli
