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

#ifndef MDIQM_GAME_HPP
#define MDIQM_GAME_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "mdiqm/bsm.hpp"
#include "mdiqm/channels.hpp"
#include "mdiqm/qcore.hpp"

namespace mdiqm {

/// Outcome counts N(b | x, y) accumulated over game rounds.
struct Tally {
  std::uint64_t seed = 0;
  std::int64_t rounds_attempted = 0;
  // Indexed [x][y][b] with x, y over (H,V,D,R) and b over (+,-,0).
  std::array<std::array<std::array<std::int64_t, 3>, 4>, 4> counts{};

  std::int64_t& at(StateLabel x, StateLabel y, Outcome b);
  std::int64_t at(StateLabel x, StateLabel y, Outcome b) const;
  std::int64_t cell_total(StateLabel x, StateLabel y) const;
  std::int64_t detected_total() const;
};

struct WitnessResult {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t rounds_used = 0;
};

enum class ErrorMethod { Delta, Bootstrap };

struct EstimateOptions {
  ErrorMethod method = ErrorMethod::Delta;
  // Bootstrap resampling is a cross-check; its cost grows with both the
  // resample count and the tally size.
  int bootstrap_resamples = 1000;
  // Defaults to the tally's own seed.
  std::optional<std::uint64_t> bootstrap_seed;
};

struct SimulateOptions {
  // Per-round survival probability; rounds lost to detection are
  // attempted but never tallied.  Exactly 1.0 means the loss draw is
  // skipped entirely, so the lossless path is unaffected.
  double detection_efficiency = 1.0;
  int workers = 1;
};

/// Born-rule probabilities (P+, P-, P0) of the announced outcome when
/// the memory holds state x and the reference photon is state y.
std::array<double, 3> outcome_distribution(const Channel& n,
                                           const BsmModel& bsm, StateLabel x,
                                           StateLabel y);

/// Infinite-statistics witness: sum over all 16 challenge pairs and the
/// two paying outcomes of P(b|xy) w^b(x,y).  Positive value certifies
/// the channel is not entanglement-breaking.
double exact_witness(const Channel& n, const BsmModel& bsm);

/// Runs n seeded rounds: x and y drawn uniformly, the outcome sampled
/// from outcome_distribution.  Each round consumes an independent
/// substream keyed by (seed, round index), so any partition of rounds
/// across workers merges to the same tally bit for bit.
Tally simulate_rounds(const Channel& n, const BsmModel& bsm, std::int64_t n_rounds,
                      std::uint64_t seed, const SimulateOptions& options = {});

/// Normalizes each (x, y) cell over its own detected events and sums
/// the paid outcomes.  Errors if any cell has no events, naming the
/// first empty cell.
WitnessResult witness_estimate(const Tally& tally,
                               const EstimateOptions& options = {});

/// Tabular tally format: header `x,y,b,count`, one row per nonzero
/// cell, written in (x, y, b) scan order.
void save_tally_csv(const std::string& path, const Tally& tally);
Tally load_tally_csv(const std::string& path);

/// Sidecar describing how a tally was produced.
void save_tally_meta(const std::string& path, const Tally& tally,
                     const std::string& channel_name, double lambda,
                     double detection_efficiency);

void save_witness_json(const std::string& path, const WitnessResult& result);

}  // namespace mdiqm

#endif  // MDIQM_GAME_HPP
