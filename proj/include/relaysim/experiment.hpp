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

#pragma once

// Experiment configuration (JSON) and result emission (CSV + manifest).
//
// Config keys, all optional unless marked:
//   relays*, antennas*, snr_db*, schemes* (list of names)
//   var_sr_db, var_rd_db      number or per-relay list, default 0
//   var_rr_db                 number or K x K list with null diagonal, default 0
//   buffer_max                number, null or "inf" (default: infinite)
//   seed                      default 1
//   sweep {axis, points}      default {snr, [snr_db]}
//   slots, pretraining_slots, repetitions   defaults 10000, 5000, 3
//   alpha_mode                "backpressure" (default) or "subgradient"
//   output                    directory, default "results"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relaysim/engine.hpp"

namespace relaysim {

struct ExperimentSpec {
  int relays = 2;
  int antennas = 2;
  double snr_db = 0.0;
  std::vector<double> var_sr_db;
  std::vector<double> var_rd_db;
  std::vector<std::vector<std::optional<double>>> var_rr_db;  // [j][i], diagonal empty
  double buffer_max = kInfiniteBuffer;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes;
  SweepAxis axis = SweepAxis::kSnr;
  std::vector<double> points;
  int slots = 10000;
  int pretraining_slots = 5000;
  int repetitions = 3;
  AlphaMode alpha_mode = AlphaMode::kBackpressure;
  std::string output = "results";

  // Linear-unit network for the base point (before the sweep is applied).
  NetworkConfig network() const;
  RunOptions run_options(int threads = 1) const;
};

// Throws ConfigError naming the offending key path.
ExperimentSpec parse_config_text(const std::string& json_text);
ExperimentSpec parse_config(const std::filesystem::path& path);

// Resolved spec in the input schema, every default spelled out. Feeding it
// back to parse_config_text yields the same spec.
std::string to_json(const ExperimentSpec& spec);

// FNV-1a of the resolved config, 16 hex digits.
std::string run_id(const ExperimentSpec& spec);

// Writes results.csv and run-manifest.json into `dir` (created if missing).
// Throws std::runtime_error if the files cannot be written.
void emit_results(const ExperimentSpec& spec, const std::vector<SweepResult>& results,
                  const std::filesystem::path& dir);

// The CSV body alone, for callers that want it in memory.
std::string results_csv(const ExperimentSpec& spec, const std::vector<SweepResult>& results);

std::string version();

}  // namespace relaysim
