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

#ifndef MDIQM_PREDICT_HPP
#define MDIQM_PREDICT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mdiqm/bsm.hpp"
#include "mdiqm/channels.hpp"

namespace mdiqm {

/// Experimental parameters driving the prediction model.  The memory
/// stores the photon in two spatial modes with separate retrieval
/// efficiencies and lifetimes.
struct MemoryParams {
  double p_ph = 0.0;      // single-photon generation efficiency
  double eta_opt = 0.0;   // optical path transmission
  double eta_det = 0.0;   // detector efficiency
  std::array<double, 2> eta_m0 = {0.0, 0.0};  // zero-delay mode efficiencies
  std::array<double, 2> tau_m = {1.0, 1.0};   // mode lifetimes, microseconds
  double p_noise = 0.0;   // background counts per trial
  double visibility = 1.0;
};

/// Fixture values measured on the reference apparatus.
MemoryParams default_memory_params();

/// Throws ConfigError naming the first field outside its domain.
void validate(const MemoryParams& params);

/// How the two spatial modes enter the scalar signal probability.
enum class ModeCombine { Mean, Min, Mode1, Mode2 };

ModeCombine mode_combine_from_string(const std::string& s);
std::string to_string(ModeCombine mode);

/// Gaussian memory decay eta0 * exp(-t^2 / tau^2), t in microseconds.
double storage_efficiency(double t_us, double eta0, double tau_us);

/// Depolarizing strength induced by background noise at storage time t:
/// p = P_noise / (P_signal + P_noise) with
/// P_signal = P_ph * eta_m(t) * eta_opt * eta_det.
double noise_strength(double t_us, const MemoryParams& params,
                      ModeCombine combine = ModeCombine::Mean);

struct CurvePoint {
  double t_us = 0.0;
  double witness = 0.0;
  double lambda = 0.0;
  double p = 0.0;  // NaN when the point does not come from the noise model
};

struct TheoryOptions {
  bool include_bsm_noise = false;
  ModeCombine combine = ModeCombine::Mean;
  // Takes precedence over the visibility-derived value when set.
  std::optional<double> lambda_override;
};

/// Predicted witness at each storage time: the noise model sets the
/// depolarizing strength, optionally combined with the imperfect
/// Bell-state measurement.  Times must be nonnegative and strictly
/// ascending.
std::vector<CurvePoint> theory_curve(const MemoryParams& params,
                                     const std::vector<double>& times_us,
                                     const TheoryOptions& options = {});

struct ChiCurveEntry {
  double t_us = 0.0;
  CMat chi;
  std::string name;
};

/// Witness computed directly from measured process matrices, one per
/// storage time.  Invalid entries are reported with their index.
std::vector<CurvePoint> simulated_curve(const std::vector<ChiCurveEntry>& chis,
                                        const BsmModel& bsm);

/// Tabular curve format: header `t_us,witness,lambda,p`.
void save_curve_csv(const std::string& path,
                    const std::vector<CurvePoint>& points);

}  // namespace mdiqm

#endif  // MDIQM_PREDICT_HPP
