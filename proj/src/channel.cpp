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

#include "relaysim/channel.hpp"

#include <cmath>
#include <string>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

NetworkConfig NetworkConfig::iid(int relays, int antennas, double snr_db, double var_rr_db,
                                 double var_link_db) {
  NetworkConfig c;
  c.relays = relays;
  c.antennas = antennas;
  c.rho_s = c.rho_r = db_to_linear(snr_db);
  const auto k = static_cast<std::size_t>(relays < 0 ? 0 : relays);
  c.var_sr.assign(k, db_to_linear(var_link_db));
  c.var_rd.assign(k, db_to_linear(var_link_db));
  c.var_rr.assign(k, std::vector<double>(k, db_to_linear(var_rr_db)));
  return c;
}

void NetworkConfig::validate() const {
  if (relays < 2) throw ConfigError("relays", "need at least 2 relays");
  if (antennas < 1) throw ConfigError("antennas", "need at least 1 antenna");
  if (!(rho_s >= 0.0) || !std::isfinite(rho_s)) throw ConfigError("rho_s", "must be finite and >= 0");
  if (!(rho_r >= 0.0) || !std::isfinite(rho_r)) throw ConfigError("rho_r", "must be finite and >= 0");
  if (!(buffer_max > 0.0)) throw ConfigError("buffer_max", "must be > 0 or infinite");
  const auto k = static_cast<std::size_t>(relays);
  if (var_sr.size() != k) throw ConfigError("var_sr", "expected one value per relay");
  if (var_rd.size() != k) throw ConfigError("var_rd", "expected one value per relay");
  if (var_rr.size() != k) throw ConfigError("var_rr", "expected K rows");
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = "[" + std::to_string(i) + "]";
    if (!(var_sr[i] > 0.0) || !std::isfinite(var_sr[i])) throw ConfigError("var_sr" + idx, "must be > 0");
    if (!(var_rd[i] > 0.0) || !std::isfinite(var_rd[i])) throw ConfigError("var_rd" + idx, "must be > 0");
    if (var_rr[i].size() != k) throw ConfigError("var_rr" + idx, "expected K columns");
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (!(var_rr[i][j] > 0.0) || !std::isfinite(var_rr[i][j])) {
        throw ConfigError("var_rr" + idx + "[" + std::to_string(j) + "]", "must be > 0");
      }
    }
  }
}

ChannelRealization draw(const NetworkConfig& config, Rng& rng) {
  const auto k = static_cast<std::size_t>(config.relays);
  const auto m = static_cast<std::size_t>(config.antennas);
  ChannelRealization ch;
  ch.relays = config.relays;
  ch.antennas = config.antennas;
  ch.source_to_relay.reserve(k);
  ch.relay_to_destination.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    ComplexVector h(m);
    for (auto& v : h) v = rng.complex_normal(config.var_sr[i]);
    ch.source_to_relay.push_back(std::move(h));
  }
  for (std::size_t j = 0; j < k; ++j) {
    ComplexVector h(m);
    for (auto& v : h) v = rng.complex_normal(config.var_rd[j]);
    ch.relay_to_destination.push_back(std::move(h));
  }
  ch.inter_relay.resize(k * k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (i == j) continue;
      ComplexMatrix h(m, m);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) h(r, c) = rng.complex_normal(config.var_rr[j][i]);
      ch.inter_relay[j * k + i] = std::move(h);
    }
  }
  return ch;
}

}  // namespace relaysim
