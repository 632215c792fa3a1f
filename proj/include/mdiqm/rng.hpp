// Copyright 2026 The mdiqm Authors
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

#ifndef MDIQM_RNG_HPP
#define MDIQM_RNG_HPP

#include <cstdint>

namespace mdiqm {

/// Stream labels for statistically independent substreams of one seed.
enum class RngDomain : std::uint64_t {
  Game = 1,
  Tomography = 2,
  Adversary = 3,
  Bootstrap = 4,
};

/// Counter-based generator (SplitMix64 finalizer over an incrementing
/// counter).  Substreams are keyed by (seed, domain, index), so the draw
/// sequence for round k never depends on how rounds are batched across
/// workers: simulate(n) and two workers covering [0,n) produce identical
/// tallies.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

  static Rng substream(std::uint64_t seed, RngDomain domain,
                       std::uint64_t index) {
    std::uint64_t key = mix_key(seed, static_cast<std::uint64_t>(domain));
    key = mix_key(key, index);
    return Rng(key);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return finalize(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, k) without modulo bias (Lemire reduction).
  std::uint64_t next_index(std::uint64_t k) {
    const auto x = next_u64();
    const auto wide = static_cast<unsigned __int128>(x) * k;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed) {
    return finalize(seed + 0x9e3779b97f4a7c15ull);
  }

  static std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    return finalize(a ^ (finalize(b) + 0x9e3779b97f4a7c15ull + (a << 6) +
                         (a >> 2)));
  }

  std::uint64_t state_;
};

}  // namespace mdiqm

#endif  // MDIQM_RNG_HPP
