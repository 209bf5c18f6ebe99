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

#include <cstdint>
#include <limits>
#include <vector>

#include "relaysim/linalg.hpp"

namespace relaysim {

class Rng;

inline constexpr double kInfiniteBuffer = std::numeric_limits<double>::infinity();

double db_to_linear(double db);

// Network parameters in linear units. Relay indices are 0-based.
struct NetworkConfig {
  int relays = 2;    // K
  int antennas = 2;  // M per relay
  double rho_s = 100.0;  // P_S / sigma_n^2
  double rho_r = 100.0;  // P_R / sigma_n^2
  std::vector<double> var_sr;                // per relay, source -> relay
  std::vector<double> var_rd;                // per relay, relay -> destination
  std::vector<std::vector<double>> var_rr;   // [j][i]: relay j -> relay i; diagonal unused
  double buffer_max = kInfiniteBuffer;       // bits per channel use
  std::uint64_t seed = 1;

  // Identical 0 dB-style gains: every link variance set from the given dB values,
  // rho_s = rho_r = db_to_linear(snr_db).
  static NetworkConfig iid(int relays, int antennas, double snr_db, double var_rr_db = 0.0,
                           double var_link_db = 0.0);

  // Throws ConfigError describing the first violated invariant.
  void validate() const;
};

// One block-fading draw of every S->R, R->D and R->R channel.
struct ChannelRealization {
  int relays = 0;
  int antennas = 0;
  std::vector<ComplexVector> source_to_relay;       // h_S[i]
  std::vector<ComplexVector> relay_to_destination;  // h_D[j], conjugate convention
  std::vector<ComplexMatrix> inter_relay;           // K*K, [j*K + i] = H[j][i]; diagonal empty

  const ComplexMatrix& inter(int from_j, int to_i) const {
    return inter_relay[static_cast<std::size_t>(from_j * relays + to_i)];
  }
  ComplexMatrix& inter(int from_j, int to_i) {
    return inter_relay[static_cast<std::size_t>(from_j * relays + to_i)];
  }
};

// Draws i.i.d. Rayleigh entries: h_S[i] ~ CN(0, var_sr[i] I), h_D[j] ~ CN(0, var_rd[j] I),
// vec(H[j][i]) ~ CN(0, var_rr[j][i] I).
ChannelRealization draw(const NetworkConfig& config, Rng& rng);

}  // namespace relaysim
