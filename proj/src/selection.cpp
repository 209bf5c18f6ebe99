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

#include "relaysim/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {
namespace {

struct SchemeInfo {
  Scheme scheme;
  std::string_view name;
};

constexpr std::array<SchemeInfo, 11> kSchemes{{
    {Scheme::kOptimal, "optimal"},
    {Scheme::kZf, "zf"},
    {Scheme::kMmse, "mmse"},
    {Scheme::kOb, "ob"},
    {Scheme::kSinr, "sinr"},
    {Scheme::kIdealUpperBound, "ideal_upper_bound"},
    {Scheme::kHdBrs, "hd_brs"},
    {Scheme::kHdMmrs, "hd_mmrs"},
    {Scheme::kHdMlrs, "hd_mlrs"},
    {Scheme::kSfdMmrs, "sfd_mmrs"},
    {Scheme::kSfdMmrsIri, "sfd_mmrs_iri"},
}};

constexpr double kHalf = 0.5;

// Pairs whose rate bound falls this far below the incumbent are skipped.
constexpr double kPruneSlack = 1e-12;

PairChannel pair_channel(const ChannelRealization& chan, const NetworkConfig& config, int i, int j) {
  return PairChannel{chan.source_to_relay[static_cast<std::size_t>(i)],
                     chan.relay_to_destination[static_cast<std::size_t>(j)], chan.inter(j, i),
                     config.rho_s, config.rho_r};
}

// MRC / MRT effective SNRs of one relay.
double mrc_snr(const ChannelRealization& chan, const NetworkConfig& config, int k) {
  return config.rho_s * squared_norm(chan.source_to_relay[static_cast<std::size_t>(k)]);
}

double mrt_snr(const ChannelRealization& chan, const NetworkConfig& config, int k) {
  return config.rho_r * squared_norm(chan.relay_to_destination[static_cast<std::size_t>(k)]);
}

double combined_alpha(double alpha_i, double alpha_j) {
  const double den = alpha_i + (1.0 - alpha_j);
  return den > 0.0 ? alpha_i / den : 0.5;
}

// Index of the largest value; ties to the smallest index. `skip` excluded.
int argmax(const std::vector<double>& v, int skip = -1) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    if (k == skip) continue;
    if (best < 0 || v[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(best)]) best = k;
  }
  return best;
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  for (const auto& s : kSchemes)
    if (s.scheme == scheme) return s.name;
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& s : kSchemes)
    if (s.name == name) return s.scheme;
  throw ConfigError("schemes", "unknown scheme '" + std::string(name) + "'");
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes = [] {
    std::vector<Scheme> v;
    for (const auto& s : kSchemes) v.push_back(s.scheme);
    return v;
  }();
  return schemes;
}

bool is_joint(Scheme scheme) {
  switch (scheme) {
    case Scheme::kOptimal:
    case Scheme::kZf:
    case Scheme::kMmse:
    case Scheme::kOb:
    case Scheme::kSinr:
    case Scheme::kIdealUpperBound:
      return true;
    default:
      return false;
  }
}

bool uses_alpha(Scheme scheme) { return is_joint(scheme); }

bool is_buffered(Scheme scheme) { return scheme != Scheme::kHdBrs; }

int phases_per_slot(Scheme scheme) {
  return scheme == Scheme::kHdMmrs || scheme == Scheme::kHdMlrs ? 2 : 1;
}

int min_antennas(Scheme scheme) {
  return scheme == Scheme::kZf || scheme == Scheme::kOb ? 2 : 1;
}

BeamformerResult beamform_pair(Scheme scheme, const ChannelRealization& chan,
                               const NetworkConfig& config, int i, int j, double alpha_i,
                               double alpha_j, const SlotKey& key, const SelectionOptions& options) {
  const PairChannel ch = pair_channel(chan, config, i, j);
  switch (scheme) {
    case Scheme::kOptimal:
      return bf_optimal(ch, combined_alpha(alpha_i, alpha_j), options.optimal);
    case Scheme::kZf:
      return bf_zf(ch);
    case Scheme::kMmse:
      return bf_mmse(ch);
    case Scheme::kOb: {
      // One (u, q) per receiving relay and slot, shared by every transmitter.
      Rng rng(key.seed, {stream::kOrthonormalBasis, key.phase, key.slot,
                         static_cast<std::uint64_t>(i)});
      return bf_ob(ch, rng);
    }
    case Scheme::kSinr:
      return bf_iri_free(ch);
    case Scheme::kIdealUpperBound: {
      BeamformerResult r = bf_iri_free(ch);
      r.gamma_s = mrc_snr(chan, config, i);
      return r;
    }
    default:
      throw PreconditionError("beamform_pair: '" + std::string(scheme_name(scheme)) +
                              "' is not a joint scheme");
  }
}

PairDecision select_pair(Scheme scheme, const ChannelRealization& chan, const NetworkConfig& config,
                         const BufferState& buf, const std::vector<double>& alpha,
                         const SlotKey& key, const SelectionOptions& options) {
  const int k = chan.relays;
  if (k < 2) throw PreconditionError("select_pair: need at least 2 relays");
  if (static_cast<int>(alpha.size()) != k || static_cast<int>(buf.bits.size()) != k) {
    throw PreconditionError("select_pair: alpha and buffers must have one entry per relay");
  }

  struct Candidate {
    int i;
    int j;
    double bound;
  };
  // No beam pair beats MRC/MRT without IRI, so this bounds every scheme's
  // objective and lets the search skip hopeless pairs without changing the
  // result.
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(k * (k - 1)));
  for (int i = 0; i < k; ++i) {
    const double cs = inst_rate_receive(mrc_snr(chan, config, i), buf, i);
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double cd = inst_rate_transmit(mrt_snr(chan, config, j), buf, j);
      candidates.push_back({i, j,
                            alpha[static_cast<std::size_t>(i)] * cs +
                                (1.0 - alpha[static_cast<std::size_t>(j)]) * cd});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.bound > b.bound; });

  PairDecision best;
  bool have = false;
  for (const Candidate& c : candidates) {
    if (have && c.bound < best.objective - kPruneSlack * (1.0 + std::abs(best.objective))) break;
    const double ai = alpha[static_cast<std::size_t>(c.i)];
    const double aj = alpha[static_cast<std::size_t>(c.j)];
    PairDecision d;
    d.receiver = c.i;
    d.transmitter = c.j;
    try {
      d.bf = beamform_pair(scheme, chan, config, c.i, c.j, ai, aj, key, options);
      d.rate_s = inst_rate_receive(d.bf.gamma_s, buf, c.i);
      d.rate_d = inst_rate_transmit(d.bf.gamma_d, buf, c.j);
    } catch (const DegenerateInputError&) {
      // Singular H for OB: this pair carries nothing this slot.
      d.bf = BeamformerResult{};
    }
    d.objective = ai * d.rate_s + (1.0 - aj) * d.rate_d;
    const bool better = !have || d.objective > best.objective ||
                        (d.objective == best.objective &&
                         std::pair(c.i, c.j) < std::pair(*best.receiver, *best.transmitter));
    if (better) {
      best = std::move(d);
      have = true;
    }
  }
  return best;
}

PairDecision select_hd_brs(const ChannelRealization& chan, const NetworkConfig& config) {
  std::vector<double> rate(static_cast<std::size_t>(chan.relays));
  for (int k = 0; k < chan.relays; ++k) {
    rate[static_cast<std::size_t>(k)] =
        std::min(kHalf * shannon_rate(mrc_snr(chan, config, k)),
                 kHalf * shannon_rate(mrt_snr(chan, config, k)));
  }
  const int best = argmax(rate);
  PairDecision d;
  d.receiver = d.transmitter = best;
  d.bufferless = true;
  d.rate_s = d.rate_d = d.objective = rate[static_cast<std::size_t>(best)];
  d.bf.gamma_s = mrc_snr(chan, config, best);
  d.bf.gamma_d = mrt_snr(chan, config, best);
  return d;
}

PairDecision select_hd_mmrs(const ChannelRealization& chan, const NetworkConfig& config,
                            const BufferState& buf, std::uint64_t slot) {
  const bool receive = slot % 2 == 0;
  std::vector<double> rate(static_cast<std::size_t>(chan.relays));
  for (int k = 0; k < chan.relays; ++k) {
    rate[static_cast<std::size_t>(k)] =
        receive ? inst_rate_receive(mrc_snr(chan, config, k), buf, k, kHalf)
                : inst_rate_transmit(mrt_snr(chan, config, k), buf, k, kHalf);
  }
  const int best = argmax(rate);
  PairDecision d;
  if (receive) {
    d.receiver = best;
    d.rate_s = rate[static_cast<std::size_t>(best)];
    d.bf.gamma_s = mrc_snr(chan, config, best);
  } else {
    d.transmitter = best;
    d.rate_d = rate[static_cast<std::size_t>(best)];
    d.bf.gamma_d = mrt_snr(chan, config, best);
  }
  d.objective = rate[static_cast<std::size_t>(best)];
  return d;
}

PairDecision select_hd_mlrs(const ChannelRealization& chan, const NetworkConfig& config,
                            const BufferState& buf) {
  PairDecision best;
  bool have = false;
  for (int k = 0; k < chan.relays; ++k) {
    for (const bool receive : {true, false}) {
      const double rate = receive ? inst_rate_receive(mrc_snr(chan, config, k), buf, k, kHalf)
                                  : inst_rate_transmit(mrt_snr(chan, config, k), buf, k, kHalf);
      if (have && !(rate > best.objective)) continue;
      PairDecision d;
      if (receive) {
        d.receiver = k;
        d.rate_s = rate;
        d.bf.gamma_s = mrc_snr(chan, config, k);
      } else {
        d.transmitter = k;
        d.rate_d = rate;
        d.bf.gamma_d = mrt_snr(chan, config, k);
      }
      d.objective = rate;
      best = std::move(d);
      have = true;
    }
  }
  return best;
}

PairDecision select_sfd_mmrs(const ChannelRealization& chan, const NetworkConfig& config,
                             const BufferState& buf, bool with_iri) {
  const int k = chan.relays;
  if (k < 2) throw PreconditionError("select_sfd_mmrs: need at least 2 relays");
  std::vector<double> cs(static_cast<std::size_t>(k));
  std::vector<double> cd(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    cs[static_cast<std::size_t>(r)] = inst_rate_receive(mrc_snr(chan, config, r), buf, r);
    cd[static_cast<std::size_t>(r)] = inst_rate_transmit(mrt_snr(chan, config, r), buf, r);
  }
  const int i1 = argmax(cs);
  const int i2 = argmax(cs, i1);
  const int j1 = argmax(cd);
  const int j2 = argmax(cd, j1);
  const auto at = [](const std::vector<double>& v, int idx) { return v[static_cast<std::size_t>(idx)]; };

  int i = i1;
  int j = j1;
  if (i1 == j1) {
    if (std::min(at(cs, i2), at(cd, j1)) > std::min(at(cs, i1), at(cd, j2))) {
      i = i2;
    } else {
      j = j2;
    }
  }

  PairDecision d;
  d.receiver = i;
  d.transmitter = j;
  d.bf = bf_iri_free(pair_channel(chan, config, i, j));
  if (!with_iri) d.bf.gamma_s = mrc_snr(chan, config, i);
  d.rate_s = inst_rate_receive(d.bf.gamma_s, buf, i);
  d.rate_d = inst_rate_transmit(d.bf.gamma_d, buf, j);
  d.objective = d.rate_s + d.rate_d;
  return d;
}

PairDecision select(Scheme scheme, const ChannelRealization& chan, const NetworkConfig& config,
                    const BufferState& buf, const std::vector<double>& alpha, const SlotKey& key,
                    const SelectionOptions& options) {
  switch (scheme) {
    case Scheme::kHdBrs:
      return select_hd_brs(chan, config);
    case Scheme::kHdMmrs:
      return select_hd_mmrs(chan, config, buf, key.slot);
    case Scheme::kHdMlrs:
      return select_hd_mlrs(chan, config, buf);
    case Scheme::kSfdMmrs:
      return select_sfd_mmrs(chan, config, buf, false);
    case Scheme::kSfdMmrsIri:
      return select_sfd_mmrs(chan, config, buf, true);
    default:
      return select_pair(scheme, chan, config, buf, alpha, key, options);
  }
}

std::string_view alpha_mode_name(AlphaMode mode) {
  return mode == AlphaMode::kBackpressure ? "backpressure" : "subgradient";
}

AlphaMode parse_alpha_mode(std::string_view name) {
  if (name == "backpressure") return AlphaMode::kBackpressure;
  if (name == "subgradient") return AlphaMode::kSubgradient;
  throw ConfigError("alpha_mode", "expected 'backpressure' or 'subgradient', got '" +
                                      std::string(name) + "'");
}

AlphaState AlphaState::initial(int relays, double value) {
  AlphaState s;
  const auto k = static_cast<std::size_t>(relays);
  s.alpha.assign(k, value);
  s.delta.assign(k, 0.0);
  s.alpha_sum.assign(k, 0.0);
  return s;
}

double AlphaState::step(std::int64_t slot) const {
  return step_initial / std::sqrt(1.0 + static_cast<double>(slot) / step_horizon);
}

std::vector<double> AlphaState::trained(AlphaMode mode) const {
  if (mode == AlphaMode::kSubgradient || samples == 0) return alpha;
  std::vector<double> avg(alpha_sum.size());
  for (std::size_t k = 0; k < avg.size(); ++k) avg[k] = alpha_sum[k] / static_cast<double>(samples);
  return avg;
}

void alpha_update_subgradient(AlphaState& state, const PairDecision& decision, std::int64_t slot) {
  const double mu = state.step(slot);
  for (std::size_t k = 0; k < state.alpha.size(); ++k) {
    const int idx = static_cast<int>(k);
    double drift = 0.0;
    if (decision.receiver == idx) drift += decision.rate_s;
    if (decision.transmitter == idx) drift -= decision.rate_d;
    state.delta[k] = state.lambda_forget * state.delta[k] + (1.0 - state.lambda_forget) * drift;
    state.alpha[k] = std::clamp(state.alpha[k] - mu * state.delta[k], 0.0, 1.0);
  }
}

void alpha_update_backpressure(AlphaState& state, const BufferState& buf,
                               const PairDecision& decision) {
  if (!(state.virtual_source > 0.0)) {
    throw PreconditionError("alpha_update_backpressure: virtual source queue must be positive");
  }
  state.arrival_estimate = state.lambda_forget * state.arrival_estimate +
                           (1.0 - state.lambda_forget) * decision.rate_d;
  state.virtual_source = std::max(state.virtual_source_floor,
                                  state.virtual_source + state.arrival_estimate - decision.rate_s);
  for (std::size_t k = 0; k < state.alpha.size(); ++k) {
    state.alpha[k] = std::clamp(1.0 - buf.bits[k] / state.virtual_source, 0.0, 1.0);
    state.alpha_sum[k] += state.alpha[k];
  }
  ++state.samples;
}

}  // namespace relaysim
