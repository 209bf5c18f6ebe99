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

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace relaysim {

// Mixes a seed with a list of stream tags into a single 64-bit key
// (splitmix64 finalizer applied per tag). Distinct tag tuples give
// statistically independent streams.
std::uint64_t derive_stream_key(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> tags);

// Reproducible random source for one substream.
//
// Every (seed, tags...) tuple selects its own stream, so e.g. the channel draw
// of slot t never depends on how many numbers earlier slots consumed. That
// keeps episodes deterministic and lets independent episodes run in parallel.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(derive_stream_key(seed, {})) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
      : engine_(derive_stream_key(seed, tags)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }

  // Circularly-symmetric CN(0, variance): real and imaginary parts each
  // N(0, variance / 2).
  std::complex<double> complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream tags used by the simulator. Kept in one place so that two consumers
// never share a stream by accident.
namespace stream {
inline constexpr std::uint64_t kEpisodeChannel = 0x11;
inline constexpr std::uint64_t kPretrainChannel = 0x12;
inline constexpr std::uint64_t kWarmupChannel = 0x13;
inline constexpr std::uint64_t kOrthonormalBasis = 0x21;
}  // namespace stream

}  // namespace relaysim
