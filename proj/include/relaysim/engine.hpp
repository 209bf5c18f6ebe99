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

// Episode orchestration: alpha pre-training, the data phase with packet-level
// delay accounting, and parameter sweeps.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/selection.hpp"

namespace relaysim {

// Initial per-relay occupancy for pre-training with an infinite buffer.
inline constexpr double kUnboundedPretrainLevel = 25.0;
inline constexpr int kWarmupSlots = 100;

struct SlotRecord {
  std::optional<int> receiver;
  std::optional<int> transmitter;
  double rate_s = 0.0;
  double rate_d = 0.0;
  std::vector<double> buffers;  // after the slot
};

struct EpisodeMetrics {
  int slots = 0;
  double avg_rate_d = 0.0;
  double avg_rate_s = 0.0;
  double avg_delay = 0.0;        // slots, over completed packets
  bool delay_applicable = true;  // false for bufferless schemes
  std::int64_t packets = 0;
  std::int64_t completed_packets = 0;
  double residual_bits = 0.0;    // left in the relay buffers at the end
  double max_conservation_error = 0.0;  // worst |sum C_S - sum C_D - buffered| over slots
  std::vector<SlotRecord> trace;  // one entry per selection step
};

// Mean of log2(1 + rho_S ||h_S[k]||^2) over relays and kWarmupSlots draws.
double typical_rate(const NetworkConfig& config);

// Runs `slots` slots from half-full buffers (kUnboundedPretrainLevel if
// B_max is infinite), adapting alpha. Schemes without alpha return the
// initial 0.5 weights untouched.
AlphaState run_pretraining(Scheme scheme, const NetworkConfig& config, AlphaMode mode, int slots,
                           const SelectionOptions& options = {});

// Data phase from empty buffers with fixed weights. `slots` counts time
// slots; see phases_per_slot for the half-duplex benchmarks.
EpisodeMetrics run_episode(Scheme scheme, const NetworkConfig& config,
                           const std::vector<double>& alpha, int slots, bool keep_trace = false,
                           const SelectionOptions& options = {});

enum class SweepAxis { kSnr, kAntennas, kRelays, kBufferSize, kIriVariance };

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

// `point` is in dB for snr / iri_variance, a count for antennas / relays and
// bits per channel use for buffer_size (infinity allowed). Throws ConfigError
// for values the axis cannot take.
NetworkConfig apply_sweep_point(const NetworkConfig& base, SweepAxis axis, double point);

struct RunOptions {
  AlphaMode alpha_mode = AlphaMode::kBackpressure;
  int slots = 10000;
  int pretraining_slots = 5000;
  int repetitions = 3;
  int threads = 1;
  SelectionOptions selection;
};

struct SweepResult {
  Scheme scheme = Scheme::kOptimal;
  double point = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::vector<double> alpha;
  EpisodeMetrics metrics;
};

// Pre-training plus data phase for one (scheme, point, repetition).
// Repetition r uses seed base.seed + r, shared by every scheme and point.
SweepResult run_one(Scheme scheme, const NetworkConfig& base, SweepAxis axis, double point,
                    int repetition, const RunOptions& options);

// Scheme-major, then point, then repetition. The order and the numbers do not
// depend on the thread count.
std::vector<SweepResult> run_sweep(const std::vector<Scheme>& schemes, SweepAxis axis,
                                   const std::vector<double>& points, const NetworkConfig& base,
                                   const RunOptions& options);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sample mean and standard error (0 for a single value).
MeanStderr mean_stderr(const std::vector<double>& values);

}  // namespace relaysim
