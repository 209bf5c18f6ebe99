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

#include <optional>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/linalg.hpp"

namespace relaysim {

// Per-relay queued bits, normalized by channel uses.
struct BufferState {
  std::vector<double> bits;
  double capacity = kInfiniteBuffer;

  static BufferState filled(int relays, double capacity, double level = 0.0) {
    return BufferState{std::vector<double>(static_cast<std::size_t>(relays), level), capacity};
  }

  double headroom(int k) const { return capacity - bits.at(static_cast<std::size_t>(k)); }
  double total() const;
};

// log2(1 + gamma).
double shannon_rate(double gamma);

// rho_S |u^H h_S|^2 / (1 + rho_R |u^H H w|^2). u and w must be unit norm
// (1e-9 slack), otherwise PreconditionError.
double sinr_receive(const ComplexVector& h_s, const ComplexMatrix& h_rr, const ComplexVector& u,
                    const ComplexVector& w, double rho_s, double rho_r);

// rho_R |h_D^H w|^2 with unit-norm w.
double snr_transmit(const ComplexVector& h_d, const ComplexVector& w, double rho_r);

// min(prelog * log2(1 + gamma), B_max - B[i]). prelog = 1/2 for half-duplex
// benchmarks.
double inst_rate_receive(double gamma, const BufferState& buf, int i, double prelog = 1.0);

// min(prelog * log2(1 + gamma), B[j]).
double inst_rate_transmit(double gamma, const BufferState& buf, int j, double prelog = 1.0);

// B[i] += C_S, B[j] -= C_D. Either role may be absent (half-duplex slots).
// Rounding residue within 1e-12 is clamped; anything larger throws
// BufferError.
BufferState apply_slot(const BufferState& buf, std::optional<int> i, double rate_s,
                       std::optional<int> j, double rate_d);

}  // namespace relaysim
