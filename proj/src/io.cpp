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

#include "ppdiff/cli/io.hpp"

#include <cstdio>

namespace ppdiff::cli {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TableWriter::TableWriter(const std::filesystem::path& path, std::uint64_t config_hash, char delimiter)
    : out_(path, std::ios::binary), delimiter_(delimiter) {
  if (!out_) throw ResourceLimitError("cli", "cannot write '" + path.string() + "'");
  char buf[48];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx\n", static_cast<unsigned long long>(config_hash));
  out_ << buf;
}

void TableWriter::header(const std::vector<std::string>& columns) { row(columns); }

void TableWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << delimiter_;
    out_ << cells[i];
  }
  out_ << '\n';
}

void write_json(const std::filesystem::path& path, std::uint64_t config_hash, nlohmann::ordered_json body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceLimitError("cli", "cannot write '" + path.string() + "'");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
  nlohmann::ordered_json doc;
  doc["config_hash"] = buf;
  for (auto& [key, value] : body.items()) doc[key] = std::move(value);
  out << doc.dump(2) << '\n';
}

}  // namespace ppdiff::cli
