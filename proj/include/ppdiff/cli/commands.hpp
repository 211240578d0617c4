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

#include "ppdiff/cli/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ppdiff::cli {

/// Each command writes its files into `out` and returns their paths.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_autocorr(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_diffract(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_spectral(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_almostper(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_perturb(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_vanhove(const ExperimentConfig& cfg, const std::filesystem::path& out);

using Command = std::vector<std::filesystem::path> (*)(const ExperimentConfig&, const std::filesystem::path&);

struct CommandInfo {
  const char* name;
  const char* summary;
  Command run;
};

const std::vector<CommandInfo>& commands();

}  // namespace ppdiff::cli
