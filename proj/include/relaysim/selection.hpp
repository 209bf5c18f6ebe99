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

// Per-slot relay selection for every scheme, and the two ways of adapting the
// per-relay weights alpha_k.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "relaysim/beamforming.hpp"
#include "relaysim/channel.hpp"
#include "relaysim/link_rates.hpp"

namespace relaysim {

enum class Scheme {
  kOptimal,
  kZf,
  kMmse,
  kOb,
  kSinr,
  kIdealUpperBound,
  kHdBrs,
  kHdMmrs,
  kHdMlrs,
  kSfdMmrs,
  kSfdMmrsIri,
};

std::string_view scheme_name(Scheme scheme);
// Throws ConfigError("schemes", ...) for unknown names.
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

// Joint pair selection driven by the weighted criterion (the first six).
bool is_joint(Scheme scheme);
// Needs trained alpha weights; same set as is_joint.
bool uses_alpha(Scheme scheme);
// Relays queue bits (everything except hd_brs).
bool is_buffered(Scheme scheme);
// Selection steps per time slot: 2 for hd_mmrs / hd_mlrs, whose steps are
// single half-duplex phases with half pre-log rates, 1 otherwise.
int phases_per_slot(Scheme scheme);
// Smallest antenna count the scheme's beamformer supports.
int min_antennas(Scheme scheme);

// Outcome of one slot. Half-duplex decisions fill only one role; hd_brs fills
// both with the same relay and moves no bits through the buffers.
struct PairDecision {
  std::optional<int> receiver;
  std::optional<int> transmitter;
  BeamformerResult bf;
  double rate_s = 0.0;  // buffer-capped
  double rate_d = 0.0;  // buffer-capped
  double objective = 0.0;
  bool bufferless = false;
};

// Identifies the slot so the OB scheme can draw its pre-agreed (u, q) pair.
struct SlotKey {
  std::uint64_t seed = 0;
  std::uint64_t phase = 0;
  std::uint64_t slot = 0;
};

struct SelectionOptions {
  AlternatingOptions optimal;
};

// Beamformer pair of a joint scheme for receiving relay i, transmitting j.
// `alpha_i`, `alpha_j` are the relays' weights; the optimal scheme is driven
// by the combined weight alpha_i / (alpha_i + 1 - alpha_j).
BeamformerResult beamform_pair(Scheme scheme, const ChannelRealization& chan,
                               const NetworkConfig& config, int i, int j, double alpha_i,
                               double alpha_j, const SlotKey& key,
                               const SelectionOptions& options = {});

// Exhaustive search over all ordered pairs i != j for the joint schemes.
// Maximizes alpha[i] C_S + (1 - alpha[j]) C_D, ties to the smallest (i, j).
PairDecision select_pair(Scheme scheme, const ChannelRealization& chan, const NetworkConfig& config,
                         const BufferState& buf, const std::vector<double>& alpha,
                         const SlotKey& key, const SelectionOptions& options = {});

// Bufferless best relay by min of the half-rates.
PairDecision select_hd_brs(const ChannelRealization& chan, const NetworkConfig& config);

// Even slots pick the best receiving relay, odd slots the best transmitting
// one. Half-rates, buffer-capped.
PairDecision select_hd_mmrs(const ChannelRealization& chan, const NetworkConfig& config,
                            const BufferState& buf, std::uint64_t slot);

// Best of 2K single links. Candidates in relay order, receive before transmit.
PairDecision select_hd_mlrs(const ChannelRealization& chan, const NetworkConfig& config,
                            const BufferState& buf);

// Best / second-best relays per hop with IRI-free beams. `with_iri` charges
// the receive rate with the actual IRI of the chosen transmitting relay.
PairDecision select_sfd_mmrs(const ChannelRealization& chan, const NetworkConfig& config,
                             const BufferState& buf, bool with_iri);

// Any scheme.
PairDecision select(Scheme scheme, const ChannelRealization& chan, const NetworkConfig& config,
                    const BufferState& buf, const std::vector<double>& alpha, const SlotKey& key,
                    const SelectionOptions& options = {});

enum class AlphaMode { kBackpressure, kSubgradient };

std::string_view alpha_mode_name(AlphaMode mode);
AlphaMode parse_alpha_mode(std::string_view name);

struct AlphaState {
  std::vector<double> alpha;  // weights the next selection uses
  std::vector<double> delta;  // subgradient: smoothed buffer drift
  double lambda_forget = 0.99;
  double step_initial = 0.1;
  double step_horizon = 100.0;

  // Back-pressure: virtual source queue and the smoothed delivered rate that
  // feeds it.
  double virtual_source = 0.0;
  double arrival_estimate = 0.0;
  double virtual_source_floor = 1.0;
  std::vector<double> alpha_sum;
  std::int64_t samples = 0;

  static AlphaState initial(int relays, double value = 0.5);

  // mu(t) = step_initial / sqrt(1 + t / step_horizon).
  double step(std::int64_t slot) const;

  // Weights to hand to the data phase: the instantaneous alpha for the
  // subgradient mode, the running time average for back-pressure.
  std::vector<double> trained(AlphaMode mode) const;
};

// delta_k <- lambda delta_k + (1 - lambda)(C_S [k = i] - C_D [k = j]);
// alpha_k <- clip(alpha_k - mu(slot) delta_k, 0, 1).
void alpha_update_subgradient(AlphaState& state, const PairDecision& decision, std::int64_t slot);

// Virtual source B_S: arrivals at the smoothed delivered rate, departures at
// this slot's C_S, floored. alpha_k <- clip(1 - B_k / B_S, 0, 1); the running
// average of these is kept alongside.
void alpha_update_backpressure(AlphaState& state, const BufferState& buf,
                               const PairDecision& decision);

}  // namespace relaysim
