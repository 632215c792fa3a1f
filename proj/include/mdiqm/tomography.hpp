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

#ifndef MDIQM_TOMOGRAPHY_HPP
#define MDIQM_TOMOGRAPHY_HPP

#include <array>
#include <cstdint>
#include <string>

#include "mdiqm/channels.hpp"
#include "mdiqm/game.hpp"
#include "mdiqm/qcore.hpp"

namespace mdiqm {

/// Pauli measurement bases used by the process-tomography verifier.
enum class MeasBasis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<MeasBasis, 3> kMeasBases = {
    MeasBasis::X, MeasBasis::Y, MeasBasis::Z};

char to_char(MeasBasis basis);
MeasBasis meas_basis_from_char(char c);

/// Binary outcome counts for the 12 settings (input state x Pauli
/// basis).  In adversary runs some shots produce no output at all, so
/// per-setting totals may fall short of `shots`.
struct TomographyRecord {
  std::uint64_t seed = 0;
  std::int64_t shots = 0;  // attempted per setting
  // counts[input][basis][k]: k = 0 counts +1 outcomes, k = 1 counts -1.
  std::array<std::array<std::array<std::int64_t, 2>, 3>, 4> counts{};

  std::int64_t setting_total(StateLabel input, MeasBasis basis) const;
  std::int64_t recorded_total() const;
};

/// Samples the 12 tomography settings against a real channel.  Each
/// (setting, shot) consumes its own seed substream, so shot loops can
/// be partitioned arbitrarily without changing the record.
TomographyRecord run_tomography(const Channel& n, std::int64_t shots,
                                std::uint64_t seed);

/// Empirical Pauli expectation values, indexed [input][basis].
std::array<std::array<double, 3>, 4> expectations_from_record(
    const TomographyRecord& record);

/// Infinite-shot expectation values of a channel, same layout.
std::array<std::array<double, 3>, 4> exact_expectations(const Channel& n);

/// Linear inversion: Bloch vectors of the four output states determine
/// the process matrix over (I, X, -iY, Z) exactly.
CMat chi_from_expectations(const std::array<std::array<double, 3>, 4>& e);
CMat reconstruct_chi(const TomographyRecord& record);

/// Overlap of a (trace-normalized) process matrix with the identity
/// process: Re chi(0,0) / Re Tr chi.
double process_fidelity_to_identity(const CMat& chi);

/// Clip negative eigenvalues and rescale; linear inversion on finite
/// samples routinely lands slightly outside the physical set.
CMat project_chi_psd(const CMat& chi);

/// When the intercepting adversary learns the verifier's basis choice:
/// After means he guesses among {X, Y, Z} before it is revealed, Before
/// means the choice leaked ahead of the round.
enum class LeakMode { After, Before };

std::string to_string(LeakMode mode);
LeakMode leak_mode_from_string(const std::string& s);

/// Tomography rounds against the intercepting adversary: he measures
/// each incoming photon immediately, then spoofs the verifier's
/// detector on matched-basis rounds and suppresses the rest.
TomographyRecord run_tomography_against(LeakMode leak, std::int64_t shots,
                                        std::uint64_t seed);

/// The channel the adversary actually implements between the two time
/// slots: equal-weight measure-and-prepare over {X, Y, Z}; identical
/// for both leak modes because the game's challenges carry no basis.
Channel induced_channel();

struct AttackReport {
  LeakMode leak = LeakMode::After;
  double apparent_efficiency = 0.0;  // fraction of shots with any output
  double reported_fidelity = 0.0;    // raw linear-inversion estimate
  double reported_fidelity_psd = 0.0;
  WitnessResult mdi_witness;
};

/// The two verifications side by side: process tomography against the
/// detector-controlling adversary, and the signaling game against the
/// channel his strategy induces.
AttackReport run_attack_comparison(LeakMode leak, std::int64_t shots,
                                   std::int64_t rounds, std::uint64_t seed);

void save_record_json(const std::string& path, const TomographyRecord& record);
TomographyRecord load_record_json(const std::string& path);
void save_attack_report_json(const std::string& path,
                             const AttackReport& report);

}  // namespace mdiqm

#endif  // MDIQM_TOMOGRAPHY_HPP
