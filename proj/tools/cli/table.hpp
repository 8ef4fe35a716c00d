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

#pragma once

#include <string>
#include <vector>

namespace qme_cli {

// CSV with '#' header comments; every file echoes the resolved config so a
// run can be reproduced from any of its outputs. Numbers print as %.17g,
// which round-trips doubles exactly and keeps reruns byte-identical.
class Table {
 public:
  Table(std::string kind, std::string config_echo,
        std::vector<std::string> columns);

  void comment(const std::string& line);
  void add_row(const std::vector<double>& values);
  void add_row_raw(const std::string& line);  // pre-formatted CSV line

  std::string str() const;

 private:
  std::string header_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

std::string format_g17(double v);

// Writes via a temp file plus rename, creating parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace qme_cli
