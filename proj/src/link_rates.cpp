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

#include "relaysim/link_rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "relaysim/errors.hpp"

namespace relaysim {
namespace {

constexpr double kUnitNormSlack = 1e-9;
constexpr double kBufferSlack = 1e-12;

void require_unit(const ComplexVector& v, const char* what) {
  if (std::abs(norm(v) - 1.0) > kUnitNormSlack) {
    throw PreconditionError(std::string(what) + " must have unit norm");
  }
}

void require_index(const BufferState& buf, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= buf.bits.size()) {
    throw PreconditionError("relay index " + std::to_string(k) + " out of range");
  }
}

}  // namespace

double BufferState::total() const { return std::accumulate(bits.begin(), bits.end(), 0.0); }

double shannon_rate(double gamma) { return std::log2(1.0 + gamma); }

double sinr_receive(const ComplexVector& h_s, const ComplexMatrix& h_rr, const ComplexVector& u,
                    const ComplexVector& w, double rho_s, double rho_r) {
  require_unit(u, "receive beamformer u");
  require_unit(w, "transmit beamformer w");
  const double signal = std::norm(herm_inner(u, h_s));
  const double interference = std::norm(herm_inner(u, matvec(h_rr, w)));
  return rho_s * signal / (1.0 + rho_r * interference);
}

double snr_transmit(const ComplexVector& h_d, const ComplexVector& w, double rho_r) {
  require_unit(w, "transmit beamformer w");
  return rho_r * std::norm(herm_inner(h_d, w));
}

double inst_rate_receive(double gamma, const BufferState& buf, int i, double prelog) {
  require_index(buf, i);
  return std::max(0.0, std::min(prelog * shannon_rate(gamma), buf.headroom(i)));
}

double inst_rate_transmit(double gamma, const BufferState& buf, int j, double prelog) {
  require_index(buf, j);
  return std::max(0.0, std::min(prelog * shannon_rate(gamma), buf.bits[static_cast<std::size_t>(j)]));
}

BufferState apply_slot(const BufferState& buf, std::optional<int> i, double rate_s,
                       std::optional<int> j, double rate_d) {
  if (i && j && *i == *j) throw PreconditionError("apply_slot: receiving and transmitting relay coincide");
  BufferState out = buf;
  if (i) {
    require_index(buf, *i);
    if (rate_s < 0.0 || rate_s > buf.headroom(*i) + kBufferSlack) {
      throw BufferError("apply_slot: overflow at relay " + std::to_string(*i));
    }
    auto& b = out.bits[static_cast<std::size_t>(*i)];
    b = std::min(b + rate_s, buf.capacity);
  }
  if (j) {
    require_index(buf, *j);
    auto& b = out.bits[static_cast<std::size_t>(*j)];
    if (rate_d < 0.0 || rate_d > b + kBufferSlack) {
      throw BufferError("apply_slot: underflow at relay " + std::to_string(*j));
    }
    b = std::max(0.0, b - rate_d);
  }
  return out;
}

}  // namespace relaysim
