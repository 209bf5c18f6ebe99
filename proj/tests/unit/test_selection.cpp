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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/selection.hpp"

using namespace relaysim;

namespace {

// Scalar channels (M = 1) with the given effective SNRs at rho = 1.
ChannelRealization scalar_channel(const std::vector<double>& gs, const std::vector<double>& gd,
                                  double iri = 0.0) {
  ChannelRealization ch;
  ch.relays = static_cast<int>(gs.size());
  ch.antennas = 1;
  for (std::size_t k = 0; k < gs.size(); ++k) {
    ch.source_to_relay.push_back({std::sqrt(gs[k])});
    ch.relay_to_destination.push_back({std::sqrt(gd[k])});
  }
  ch.inter_relay.resize(gs.size() * gs.size());
  for (int j = 0; j < ch.relays; ++j)
    for (int i = 0; i < ch.relays; ++i)
      if (i != j) ch.inter(j, i) = ComplexMatrix{{iri}};
  return ch;
}

NetworkConfig unit_config(int k, int m = 1) {
  NetworkConfig c = NetworkConfig::iid(k, m, 0.0);
  return c;
}

ChannelRealization random_channel(const NetworkConfig& c, Rng& rng) { return draw(c, rng); }

// Plain enumeration of every ordered pair, no pruning.
struct Brute {
  int i = -1, j = -1;
  double objective = -1.0;
};

Brute brute_force(Scheme scheme, const ChannelRealization& ch, const NetworkConfig& c,
                  const BufferState& buf, const std::vector<double>& alpha, const SlotKey& key) {
  Brute best;
  for (int i = 0; i < ch.relays; ++i)
    for (int j = 0; j < ch.relays; ++j) {
      if (i == j) continue;
      double gs = 0.0, gd = 0.0;
      try {
        const BeamformerResult r = beamform_pair(scheme, ch, c, i, j, alpha[i], alpha[j], key);
        gs = scheme == Scheme::kIdealUpperBound ? c.rho_s * oracle::norm2(ch.source_to_relay[i])
                                                : oracle::sinr(ch.source_to_relay[i], ch.inter(j, i),
                                                               r.u, r.w, c.rho_s, c.rho_r);
        gd = oracle::snr(ch.relay_to_destination[j], r.w, c.rho_r);
      } catch (const DegenerateInputError&) {
      }
      const double cs = std::min(std::log2(1 + gs), buf.capacity - buf.bits[i]);
      const double cd = std::min(std::log2(1 + gd), buf.bits[j]);
      const double obj = alpha[i] * cs + (1 - alpha[j]) * cd;
      if (obj > best.objective) best = {i, j, obj};
    }
  return best;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(all_schemes().size() == 11);
  for (Scheme s : all_schemes()) CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_THROWS_WITH_AS(parse_scheme("zzz"), doctest::Contains("zzz"), ConfigError);
  CHECK(min_antennas(Scheme::kZf) == 2);
  CHECK(min_antennas(Scheme::kMmse) == 1);
  CHECK(phases_per_slot(Scheme::kHdMmrs) == 2);
  CHECK_FALSE(is_buffered(Scheme::kHdBrs));
  CHECK(is_joint(Scheme::kIdealUpperBound));
  CHECK_FALSE(is_joint(Scheme::kSfdMmrs));
}

TEST_CASE("select_pair two-candidate arithmetic") {
  // C_S = {2, 1}, C_D = {1, 3}.
  const ChannelRealization ch = scalar_channel({3, 1}, {1, 7});
  const NetworkConfig c = unit_config(2);
  const BufferState buf{{100, 100}, kInfiniteBuffer};
  const PairDecision d = select_pair(Scheme::kIdealUpperBound, ch, c, buf, {0.5, 0.5}, {});
  CHECK(d.receiver == 0);
  CHECK(d.transmitter == 1);
  CHECK(d.objective == doctest::Approx(2.5));
  CHECK(d.rate_s == doctest::Approx(2.0));
  CHECK(d.rate_d == doctest::Approx(3.0));
}

TEST_CASE("select_pair zero objectives tie to the first pair") {
  const ChannelRealization ch = scalar_channel({3, 5, 2}, {1, 7, 4});
  const NetworkConfig c = unit_config(3);
  const BufferState empty = BufferState::filled(3, kInfiniteBuffer);
  for (Scheme s : {Scheme::kOptimal, Scheme::kMmse, Scheme::kSinr, Scheme::kIdealUpperBound}) {
    const PairDecision d = select_pair(s, ch, c, empty, {0.0, 0.0, 0.0}, {});
    CHECK(d.receiver == 0);
    CHECK(d.transmitter == 1);
    CHECK(d.objective == 0.0);
  }
}

TEST_CASE("select_pair equals brute force") {
  Rng rng(21);
  for (int n = 0; n < 1000; ++n) {
    const int k = 2 + n % 3;
    const int m = 1 + (n / 3) % 4;
    NetworkConfig c = NetworkConfig::iid(k, m, 30.0 * rng.uniform() - 5.0);
    if (n % 2) c.buffer_max = 2.0 + 10.0 * rng.uniform();
    const ChannelRealization ch = random_channel(c, rng);
    BufferState buf = BufferState::filled(k, c.buffer_max);
    std::vector<double> alpha(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
      buf.bits[r] = std::isinf(c.buffer_max) ? 8.0 * rng.uniform() : c.buffer_max * rng.uniform();
      alpha[r] = rng.uniform();
    }
    const SlotKey key{7, 1, static_cast<std::uint64_t>(n)};
    std::vector<Scheme> schemes{Scheme::kMmse, Scheme::kSinr, Scheme::kIdealUpperBound};
    if (m >= 2) schemes.insert(schemes.end(), {Scheme::kZf, Scheme::kOb});
    if (n % 10 == 0) schemes.push_back(Scheme::kOptimal);
    for (Scheme s : schemes) {
      const PairDecision d = select_pair(s, ch, c, buf, alpha, key);
      const Brute b = brute_force(s, ch, c, buf, alpha, key);
      CHECK(d.receiver == b.i);
      CHECK(d.transmitter == b.j);
      CHECK(std::abs(d.objective - b.objective) <= 1e-9 * (1 + b.objective));
    }
  }
}

TEST_CASE("select_hd_brs") {
  const NetworkConfig c = unit_config(2);
  const PairDecision d = select_hd_brs(scalar_channel({15, 3}, {3, 15}), c);
  CHECK(d.receiver == 0);
  CHECK(d.transmitter == 0);
  CHECK(d.bufferless);
  CHECK(d.rate_d == doctest::Approx(1.0));
  CHECK(select_hd_brs(scalar_channel({1e9, 3}, {0, 3}), c).receiver == 1);
}

TEST_CASE("select_hd_mmrs") {
  const NetworkConfig c = unit_config(3);
  const ChannelRealization ch = scalar_channel({3, 15, 7}, {3, 15, 7});
  const PairDecision odd = select_hd_mmrs(ch, c, BufferState::filled(3, kInfiniteBuffer), 1);
  CHECK(odd.transmitter == 0);
  CHECK_FALSE(odd.receiver);
  CHECK(odd.rate_d == 0.0);

  BufferState buf{{0.0, 10.0, 0.0}, 10.0};
  const PairDecision even = select_hd_mmrs(ch, c, buf, 2);
  CHECK(even.receiver == 2);  // relay 1 is full
  CHECK_FALSE(even.transmitter);
  CHECK(even.rate_s == doctest::Approx(1.5));

  // A two-phase cycle moves bits consistently with the buffers.
  BufferState b = BufferState::filled(3, kInfiniteBuffer);
  for (std::uint64_t t = 0; t < 2; ++t) {
    const PairDecision d = select_hd_mmrs(ch, c, b, t);
    const double before = b.total();
    b = apply_slot(b, d.receiver, d.rate_s, d.transmitter, d.rate_d);
    CHECK(b.total() == doctest::Approx(before + d.rate_s - d.rate_d));
  }
  CHECK(b.total() == doctest::Approx(0.0));
}

TEST_CASE("select_hd_mlrs") {
  const NetworkConfig c = unit_config(2);
  const ChannelRealization ch = scalar_channel({15, 15}, {15, 15});
  const PairDecision empty = select_hd_mlrs(ch, c, BufferState::filled(2, kInfiniteBuffer));
  CHECK(empty.receiver == 0);
  CHECK_FALSE(empty.transmitter);

  // Equal channels: relay 1 nearly full can only transmit, relay 0 only receive.
  const PairDecision d = select_hd_mlrs(ch, c, BufferState{{0.0, 9.5}, 10.0});
  CHECK(d.receiver == 0);
  CHECK(d.rate_s == doctest::Approx(2.0));
  const PairDecision e = select_hd_mlrs(ch, c, BufferState{{8.5, 9.5}, 10.0});
  CHECK(e.transmitter == 0);
  CHECK(e.rate_d == doctest::Approx(2.0));

  Rng rng(22);
  for (int n = 0; n < 500; ++n) {
    const NetworkConfig r = NetworkConfig::iid(3, 2, 20);
    const ChannelRealization rc = random_channel(r, rng);
    BufferState buf{{4 * rng.uniform(), 4 * rng.uniform(), 4 * rng.uniform()}, kInfiniteBuffer};
    double max_g = 0.0;
    for (int k = 0; k < 3; ++k)
      max_g = std::max({max_g, r.rho_s * oracle::norm2(rc.source_to_relay[k]),
                        r.rho_r * oracle::norm2(rc.relay_to_destination[k])});
    const PairDecision m = select_hd_mlrs(rc, r, buf);
    CHECK(m.rate_s + m.rate_d <= 0.5 * std::log2(1 + max_g) + 1e-12);
    const PairDecision b = select_hd_brs(rc, r);
    CHECK(b.rate_d <= 0.5 * std::log2(1 + max_g) + 1e-12);
  }
}

TEST_CASE("select_sfd_mmrs") {
  const NetworkConfig c = unit_config(3);
  const BufferState buf{{50, 50, 50}, kInfiniteBuffer};
  // Distinct best relays.
  const PairDecision a = select_sfd_mmrs(scalar_channel({15, 3, 1}, {1, 15, 3}), c, buf, false);
  CHECK(a.receiver == 0);
  CHECK(a.transmitter == 1);
  // Relay 0 best on both hops; min(C_S,i2, C_D,j1) = min(3, 4) > min(C_S,i1, C_D,j2) = min(4, 1).
  const PairDecision b = select_sfd_mmrs(scalar_channel({15, 7, 0}, {15, 1, 0}), c, buf, false);
  CHECK(b.receiver == 1);
  CHECK(b.transmitter == 0);
  // Otherwise the transmitter moves to the second best.
  const PairDecision d = select_sfd_mmrs(scalar_channel({15, 1, 0}, {15, 7, 0}), c, buf, false);
  CHECK(d.receiver == 0);
  CHECK(d.transmitter == 1);

  // IRI only lowers the realized receive rate.
  const ChannelRealization iri = scalar_channel({15, 3, 1}, {1, 15, 3}, 1.0);
  const PairDecision with = select_sfd_mmrs(iri, c, buf, true);
  const PairDecision without = select_sfd_mmrs(iri, c, buf, false);
  CHECK(with.receiver == without.receiver);
  CHECK(with.rate_s < without.rate_s);
  const ChannelRealization clean = scalar_channel({15, 3, 1}, {1, 15, 3}, 0.0);
  CHECK(select_sfd_mmrs(clean, c, buf, true).rate_s == select_sfd_mmrs(clean, c, buf, false).rate_s);
}

TEST_CASE("subgradient update") {
  AlphaState s = AlphaState::initial(3);
  s.delta = {0.2, -0.1, 0.4};
  PairDecision d;
  d.receiver = 0;
  d.transmitter = 1;
  d.rate_s = 2.0;
  d.rate_d = 1.0;
  alpha_update_subgradient(s, d, 0);
  CHECK(s.delta[0] == doctest::Approx(0.99 * 0.2 + 0.01 * 2.0));
  CHECK(s.delta[1] == doctest::Approx(0.99 * -0.1 - 0.01 * 1.0));
  CHECK(s.delta[2] == doctest::Approx(0.99 * 0.4));
  CHECK(s.alpha[0] == doctest::Approx(0.5 - 0.1 * s.delta[0]));
  CHECK(s.alpha[1] > 0.5);  // draining relay gains receive weight
  CHECK(s.alpha[2] < 0.5);
  CHECK(s.step(300) == doctest::Approx(0.05));

  // Roles swapped with equal rates: the drifts cancel.
  AlphaState t = AlphaState::initial(2);
  t.lambda_forget = 0.0;
  PairDecision a;
  a.receiver = 0;
  a.transmitter = 1;
  a.rate_s = a.rate_d = 1.0;
  PairDecision b = a;
  b.receiver = 1;
  b.transmitter = 0;
  alpha_update_subgradient(t, a, 0);
  const double mu0 = t.step(0), mu1 = t.step(1);
  alpha_update_subgradient(t, b, 1);
  CHECK(t.alpha[0] == doctest::Approx(0.5 - mu0 + mu1));
  CHECK(t.alpha[1] == doctest::Approx(0.5 + mu0 - mu1));
}

TEST_CASE("alpha stays in [0, 1]") {
  Rng rng(23);
  AlphaState s = AlphaState::initial(4);
  AlphaState p = AlphaState::initial(4);
  p.virtual_source = 5.0;
  p.arrival_estimate = 1.0;
  for (int n = 0; n < 1000000; ++n) {
    PairDecision d;
    d.receiver = static_cast<int>(rng() % 4);
    d.transmitter = static_cast<int>((*d.receiver + 1 + rng() % 3) % 4);
    d.rate_s = 20 * rng.uniform();
    d.rate_d = 20 * rng.uniform();
    alpha_update_subgradient(s, d, n);
    BufferState buf{{30 * rng.uniform(), 30 * rng.uniform(), 0.0, 100.0}, kInfiniteBuffer};
    alpha_update_backpressure(p, buf, d);
    for (int k = 0; k < 4; ++k) {
      REQUIRE(s.alpha[k] >= 0.0);
      REQUIRE(s.alpha[k] <= 1.0);
      REQUIRE(p.alpha[k] >= 0.0);
      REQUIRE(p.alpha[k] <= 1.0);
    }
  }
  CHECK(p.virtual_source >= p.virtual_source_floor);
}

TEST_CASE("back-pressure limits") {
  AlphaState s = AlphaState::initial(2);
  s.virtual_source = 10.0;
  s.arrival_estimate = 1.0;
  PairDecision d;
  d.receiver = 0;
  d.transmitter = 1;
  d.rate_s = d.rate_d = 1.0;
  for (int n = 0; n < 500; ++n) {
    // Relay 0 empty, relay 1 holding exactly the virtual source backlog.
    alpha_update_backpressure(s, BufferState{{0.0, s.virtual_source}, kInfiniteBuffer}, d);
  }
  const std::vector<double> a = s.trained(AlphaMode::kBackpressure);
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] < 0.01);

  AlphaState z = AlphaState::initial(2);
  CHECK_THROWS_AS(alpha_update_backpressure(z, BufferState::filled(2, kInfiniteBuffer), d),
                  PreconditionError);
  CHECK(parse_alpha_mode("subgradient") == AlphaMode::kSubgradient);
  CHECK_THROWS_AS(parse_alpha_mode("newton"), ConfigError);
}
