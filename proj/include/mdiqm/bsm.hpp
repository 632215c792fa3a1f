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

#ifndef MDIQM_BSM_HPP
#define MDIQM_BSM_HPP

#include "mdiqm/qcore.hpp"

namespace mdiqm {

/// Bell-state-measurement outcome announced by the untrusted device.
/// Zero stands for "no conclusive projection" and always pays zero.
enum class Outcome { Plus = 0, Minus = 1, Zero = 2 };

inline constexpr int kNumOutcomes = 3;

char to_char(Outcome b);
Outcome outcome_from_char(char c);

/// Payoff w^b(x, y).  Rows are indexed by the state sent through the
/// memory (x), columns by the fresh reference state (y), both over
/// (H, V, D, R).  Entries are exact multiples of 1/2.
double payoff(Outcome b, StateLabel x, StateLabel y);

/// Sum of all w^+ and w^- entries; equals -2 exactly and serves as a
/// table checksum.
double payoff_checksum();

/// Two-outcome-plus-failure POVM of a partial Bell-state measurement
/// that distinguishes Phi+ from Phi-.  lambda is the probability that
/// imperfect interference swaps the two conclusive outcomes.
struct BsmModel {
  double lambda;
  CMat s_plus;
  CMat s_minus;
  CMat s_zero;

  const CMat& element(Outcome b) const;
};

/// S_pm = (1-lambda)|Phi_pm><Phi_pm| + lambda|Phi_mp><Phi_mp|,
/// S_0 = 1 - S_+ - S_-.  Requires 0 <= lambda <= 1/2.
BsmModel bsm_povm(double lambda);

/// lambda = (1 - V^2) / 2 for interference visibility V in [0, 1].
double lambda_from_visibility(double v);

/// Mode-overlap model: the retrieved photon occupies the matched
/// spatiotemporal mode with amplitude alpha.  Visibility equals alpha;
/// the orthogonal-mode fraction is beta^2 = 1 - alpha^2.
double visibility_from_overlap(double alpha);
double orthogonal_fraction(double alpha);

}  // namespace mdiqm

#endif  // MDIQM_BSM_HPP
