// Copyright 2026 The ppdiff Authors
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

#include "ppdiff/core.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ppdiff::cli {

/// Shortest round-trip decimal form (17 significant digits).
std::string format_number(double x);

/// Delimited text file whose first line is "# config_hash=<hex>".
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& path, std::uint64_t config_hash, char delimiter);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  char delimiter_;
};

/// JSON object with "config_hash" as its first member.
void write_json(const std::filesystem::path& path, std::uint64_t config_hash, nlohmann::ordered_json body);

}  // namespace ppdiff::cli
