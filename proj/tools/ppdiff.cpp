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

#include "ppdiff/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  namespace cli = ppdiff::cli;
  CLI::App app{"ppdiff: diffraction and spectral experiments on measure dynamical systems"};
  app.require_subcommand(1);
  std::string config;
  std::string out;
  int threads = 1;
  bool verbose = false;
  for (const auto& info : cli::commands()) {
    auto* sub = app.add_subcommand(info.name, info.summary);
    sub->add_option("--config", config, "experiment config (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (default: $PPDIFF_OUT, then [output] dir, then .)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", verbose, "list written files");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[config]: cli: " << e.what() << '\n';
    return static_cast<int>(ppdiff::ErrorCategory::config);
  }

  try {
    ppdiff::setNbThreads(threads);
    const auto cfg = cli::load_config(config);
    std::filesystem::path dir = out;
    if (dir.empty())
      if (const char* env = std::getenv("PPDIFF_OUT")) dir = env;
    if (dir.empty()) dir = cfg.output_dir;
    if (dir.empty()) dir = ".";
    for (const auto& info : cli::commands()) {
      if (!app.got_subcommand(info.name)) continue;
      const auto written = info.run(cfg, dir);
      if (verbose)
        for (const auto& p : written) std::cerr << "wrote " << p.string() << '\n';
    }
  } catch (const ppdiff::Error& e) {
    std::cerr << "error[" << ppdiff::category_name(e.category()) << "]: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[resource]: cli: " << e.what() << '\n';
    return static_cast<int>(ppdiff::ErrorCategory::resource);
  }
  return EXIT_SUCCESS;
}
