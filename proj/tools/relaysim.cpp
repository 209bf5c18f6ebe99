// Copyright 2026 The relaysim Authors
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

// relaysim run --config <path> [--out <dir>] [--threads N] [--seed S]
// relaysim schemes
//
// Exit codes: 0 success, 2 configuration error, 1 anything else.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/experiment.hpp"

namespace {

constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

int run(const std::string& config_path, const std::optional<std::string>& out,
        const std::optional<std::uint64_t>& seed, int threads) {
  relaysim::ExperimentSpec spec = relaysim::parse_config(config_path);
  if (seed) spec.seed = *seed;
  if (out) spec.output = *out;
  const auto results = relaysim::run_sweep(spec.schemes, spec.axis, spec.points, spec.network(),
                                           spec.run_options(threads));
  relaysim::emit_results(spec, results, spec.output);
  std::cout << "wrote " << results.size() << " rows to " << spec.output << "/results.csv (run "
            << relaysim::run_id(spec) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay selection and beamforming simulator"};
  app.set_version_flag("--version", relaysim::version());
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out, "Output directory (overrides the config)");
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Base seed (overrides the config)");

  auto* schemes_cmd = app.add_subcommand("schemes", "List available schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (schemes_cmd->parsed()) {
      for (relaysim::Scheme s : relaysim::all_schemes()) std::cout << relaysim::scheme_name(s) << '\n';
      return 0;
    }
    return run(config_path, out, seed, threads);
  } catch (const relaysim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
