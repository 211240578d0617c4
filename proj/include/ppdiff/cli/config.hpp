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

#include "ppdiff/ppdiff.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ppdiff::cli {

struct ScanSettings {
  double lambda_min = -2.5;
  double lambda_max = 2.5;
  double spacing = 1.0 / 1024.0;
};

struct AutocorrSettings {
  double r_max = kDefaultRetainedRange;
  double t_max = 3.0;
  double t_spacing = 0.05;
};

struct AlmostPeriodSettings {
  std::string observable = "sampling";  ///< sampling | composed | product
  double scan = 50.0;
  double overlap = 30.0;
  int per_unit = 20;
  double epsilon_factor = 0.1;
  double clamp_lo = 0.0;
  double clamp_hi = 1.0;
  double psi_shift = 0.5;  ///< shift of the second tent in the product observable
};

/// One experiment, read from a flat INI file.
struct ExperimentConfig {
  GeneratorSpec generator;
  std::vector<double> half_widths{50.0, 200.0};
  std::size_t n_small = 1;
  std::size_t n_large = 2;
  double tent_width = 0.5;
  ScanSettings scan;
  PeakThresholds<double> thresholds;
  double theta_pp = 0.9;
  double theta_pp_after = 0.9;
  double freq_tol = kFrequencyTolerance;
  int coefficient_bound = 50;
  AutocorrSettings autocorr;
  AlmostPeriodSettings almost_periods;
  std::vector<double> spectral_lambdas{0.0, 1.0, 2.0};
  std::optional<LocalRule<double>> rule;
  std::filesystem::path output_dir;
  std::uint64_t hash = 0;  ///< FNV-1a of the config text

  BoxSequence<double> sequence() const { return BoxSequence<double>::cubes(generator.dim, half_widths); }
  TestFunction<double> phi() const { return TestFunction<double>::tent(generator.dim, tent_width); }
  ScanGrid<double> grid() const;
  void validate() const;
};

std::uint64_t fnv1a(const std::string& text);
std::string hex(std::uint64_t value);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ppdiff::cli
