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

#include "relaysim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {
namespace {

// Packets whose remainder drops below this are complete.
constexpr double kPacketSlack = 1e-12;

struct Packet {
  std::int64_t arrival_slot;
  double remaining;
};

ChannelRealization draw_slot(const NetworkConfig& config, std::uint64_t tag, std::uint64_t slot) {
  Rng rng(config.seed, {tag, slot});
  return draw(config, rng);
}

std::string point_key(std::size_t index) { return "sweep.points[" + std::to_string(index) + "]"; }

bool uniform(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double typical_rate(const NetworkConfig& config) {
  double sum = 0.0;
  for (int t = 0; t < kWarmupSlots; ++t) {
    const ChannelRealization chan = draw_slot(config, stream::kWarmupChannel, static_cast<std::uint64_t>(t));
    for (const auto& h : chan.source_to_relay) sum += shannon_rate(config.rho_s * squared_norm(h));
  }
  return sum / (kWarmupSlots * config.relays);
}

AlphaState run_pretraining(Scheme scheme, const NetworkConfig& config, AlphaMode mode, int slots,
                           const SelectionOptions& options) {
  if (slots < 1) throw PreconditionError("run_pretraining: slots must be >= 1");
  config.validate();
  AlphaState state = AlphaState::initial(config.relays);
  if (!uses_alpha(scheme)) return state;

  const double level = std::isinf(config.buffer_max) ? kUnboundedPretrainLevel : config.buffer_max / 2.0;
  BufferState buf = BufferState::filled(config.relays, config.buffer_max, level);

  if (mode == AlphaMode::kBackpressure) {
    const double typical = typical_rate(config);
    state.virtual_source = std::max(state.virtual_source_floor, 10.0 * typical);
    state.arrival_estimate = typical;
    for (std::size_t k = 0; k < state.alpha.size(); ++k) {
      state.alpha[k] = std::clamp(1.0 - buf.bits[k] / state.virtual_source, 0.0, 1.0);
    }
  }

  for (int t = 0; t < slots; ++t) {
    const auto slot = static_cast<std::uint64_t>(t);
    const ChannelRealization chan = draw_slot(config, stream::kPretrainChannel, slot);
    const PairDecision d =
        select(scheme, chan, config, buf, state.alpha,
               SlotKey{config.seed, stream::kPretrainChannel, slot}, options);
    buf = apply_slot(buf, d.receiver, d.rate_s, d.transmitter, d.rate_d);
    if (mode == AlphaMode::kBackpressure) {
      alpha_update_backpressure(state, buf, d);
    } else {
      alpha_update_subgradient(state, d, t);
    }
  }
  return state;
}

EpisodeMetrics run_episode(Scheme scheme, const NetworkConfig& config,
                           const std::vector<double>& alpha, int slots, bool keep_trace,
                           const SelectionOptions& options) {
  if (slots < 1) throw PreconditionError("run_episode: slots must be >= 1");
  config.validate();
  if (static_cast<int>(alpha.size()) != config.relays) {
    throw PreconditionError("run_episode: need one alpha per relay");
  }

  EpisodeMetrics m;
  m.slots = slots;
  m.delay_applicable = is_buffered(scheme);
  BufferState buf = BufferState::filled(config.relays, config.buffer_max);
  std::vector<std::deque<Packet>> queues(static_cast<std::size_t>(config.relays));
  double sum_s = 0.0;
  double sum_d = 0.0;
  double delay_sum = 0.0;

  // Half-duplex phase schemes take two selection steps per time slot; rates
  // and delays are reported per time slot.
  const int phases = phases_per_slot(scheme);
  const std::int64_t steps = static_cast<std::int64_t>(slots) * phases;
  for (std::int64_t t = 0; t < steps; ++t) {
    const auto slot = static_cast<std::uint64_t>(t);
    const ChannelRealization chan = draw_slot(config, stream::kEpisodeChannel, slot);
    const PairDecision d = select(scheme, chan, config, buf, alpha,
                                  SlotKey{config.seed, stream::kEpisodeChannel, slot}, options);
    sum_s += d.rate_s;
    sum_d += d.rate_d;

    if (!d.bufferless) {
      buf = apply_slot(buf, d.receiver, d.rate_s, d.transmitter, d.rate_d);
      // The transmitter drains packets queued in earlier slots; the new
      // packet joins the receiver's queue afterwards, so delays are >= 1.
      if (d.transmitter) {
        auto& q = queues[static_cast<std::size_t>(*d.transmitter)];
        double drain = d.rate_d;
        while (!q.empty() && drain > 0.0) {
          Packet& p = q.front();
          const double take = std::min(drain, p.remaining);
          p.remaining -= take;
          drain -= take;
          if (p.remaining <= kPacketSlack) {
            delay_sum += static_cast<double>(t - p.arrival_slot);
            ++m.completed_packets;
            q.pop_front();
          }
        }
      }
      if (d.receiver && d.rate_s > 0.0) {
        queues[static_cast<std::size_t>(*d.receiver)].push_back({t, d.rate_s});
        ++m.packets;
      }
    }

    const double err = std::abs((sum_s - sum_d) - (d.bufferless ? 0.0 : buf.total()));
    m.max_conservation_error = std::max(m.max_conservation_error, err);
    if (keep_trace) m.trace.push_back({d.receiver, d.transmitter, d.rate_s, d.rate_d, buf.bits});
  }

  m.avg_rate_s = sum_s / slots;
  m.avg_rate_d = sum_d / slots;
  m.residual_bits = buf.total();
  m.avg_delay = m.delay_applicable && m.completed_packets > 0
                    ? delay_sum / static_cast<double>(m.completed_packets) / phases
                    : 0.0;
  return m;
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSnr: return "snr";
    case SweepAxis::kAntennas: return "antennas";
    case SweepAxis::kRelays: return "relays";
    case SweepAxis::kBufferSize: return "buffer_size";
    case SweepAxis::kIriVariance: return "iri_variance";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::kSnr, SweepAxis::kAntennas, SweepAxis::kRelays,
                      SweepAxis::kBufferSize, SweepAxis::kIriVariance}) {
    if (axis_name(a) == name) return a;
  }
  throw ConfigError("sweep.axis", "unknown axis '" + std::string(name) +
                                      "' (expected snr, antennas, relays, buffer_size, iri_variance)");
}

NetworkConfig apply_sweep_point(const NetworkConfig& base, SweepAxis axis, double point) {
  NetworkConfig c = base;
  const auto integral = [&](int lo) {
    if (!(point >= lo) || point != std::floor(point) || point > 1e6) {
      throw ConfigError("sweep.points", std::string(axis_name(axis)) + " must be an integer >= " +
                                            std::to_string(lo));
    }
    return static_cast<int>(point);
  };
  switch (axis) {
    case SweepAxis::kSnr:
      if (!std::isfinite(point)) throw ConfigError("sweep.points", "snr must be finite");
      c.rho_s = c.rho_r = db_to_linear(point);
      break;
    case SweepAxis::kAntennas:
      c.antennas = integral(1);
      break;
    case SweepAxis::kRelays: {
      c.relays = integral(2);
      if (!uniform(base.var_sr) || !uniform(base.var_rd)) {
        throw ConfigError("sweep.axis", "the relays axis needs identical per-relay gains");
      }
      double rr = -1.0;
      for (std::size_t j = 0; j < base.var_rr.size(); ++j)
        for (std::size_t i = 0; i < base.var_rr.size(); ++i) {
          if (i == j) continue;
          if (rr >= 0.0 && base.var_rr[j][i] != rr) {
            throw ConfigError("sweep.axis", "the relays axis needs identical inter-relay gains");
          }
          rr = base.var_rr[j][i];
        }
      const auto k = static_cast<std::size_t>(c.relays);
      c.var_sr.assign(k, base.var_sr.front());
      c.var_rd.assign(k, base.var_rd.front());
      c.var_rr.assign(k, std::vector<double>(k, rr));
      break;
    }
    case SweepAxis::kBufferSize:
      if (!(point > 0.0)) throw ConfigError("sweep.points", "buffer_size must be > 0");
      c.buffer_max = point;
      break;
    case SweepAxis::kIriVariance:
      if (!std::isfinite(point)) throw ConfigError("sweep.points", "iri_variance must be finite");
      for (auto& row : c.var_rr) row.assign(row.size(), db_to_linear(point));
      break;
  }
  return c;
}

SweepResult run_one(Scheme scheme, const NetworkConfig& base, SweepAxis axis, double point,
                    int repetition, const RunOptions& options) {
  NetworkConfig config = apply_sweep_point(base, axis, point);
  config.seed = base.seed + static_cast<std::uint64_t>(repetition);
  if (config.antennas < min_antennas(scheme)) {
    throw UnsupportedConfigurationError("scheme '" + std::string(scheme_name(scheme)) + "' needs " +
                                        std::to_string(min_antennas(scheme)) + " antennas");
  }
  SweepResult r;
  r.scheme = scheme;
  r.point = point;
  r.repetition = repetition;
  r.seed = config.seed;
  const AlphaState trained =
      run_pretraining(scheme, config, options.alpha_mode, options.pretraining_slots, options.selection);
  r.alpha = trained.trained(options.alpha_mode);
  r.metrics = run_episode(scheme, config, r.alpha, options.slots, false, options.selection);
  return r;
}

std::vector<SweepResult> run_sweep(const std::vector<Scheme>& schemes, SweepAxis axis,
                                   const std::vector<double>& points, const NetworkConfig& base,
                                   const RunOptions& options) {
  if (points.empty()) throw ConfigError("sweep.points", "must not be empty");
  if (options.repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
  for (std::size_t p = 0; p < points.size(); ++p) {
    try {
      apply_sweep_point(base, axis, points[p]).validate();
    } catch (const ConfigError& e) {
      if (e.key_path() != "sweep.points") throw;
      const std::string what = e.what();
      throw ConfigError(point_key(p), what.substr(what.find(": ") + 2));
    }
  }

  struct Job {
    Scheme scheme;
    double point;
    int repetition;
  };
  std::vector<Job> jobs;
  for (Scheme s : schemes)
    for (double p : points)
      for (int r = 0; r < options.repetitions; ++r) jobs.push_back({s, p, r});

  std::vector<SweepResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t n = next++; n < jobs.size(); n = next++) {
      try {
        const Job& job = jobs[n];
        results[n] = run_one(job.scheme, base, axis, job.point, job.repetition, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

}  // namespace relaysim
