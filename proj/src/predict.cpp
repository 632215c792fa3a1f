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

#include "mdiqm/predict.hpp"

#include <cmath>
#include <fstream>

#include "mdiqm/errors.hpp"
#include "mdiqm/game.hpp"
#include "textutil.hpp"

namespace mdiqm {

MemoryParams default_memory_params() {
  MemoryParams p;
  p.p_ph = 0.060;
  p.eta_opt = 0.108;
  p.eta_det = 0.70;
  p.eta_m0 = {0.269, 0.250};
  p.tau_m = {58.2, 56.6};
  p.p_noise = 8.57e-5;
  p.visibility = 0.875;
  return p;
}

void validate(const MemoryParams& params) {
  const auto check_prob = [](double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(field) + " must lie in [0, 1], got " +
                        format_double(v));
    }
  };
  check_prob(params.p_ph, "p_ph");
  check_prob(params.eta_opt, "eta_opt");
  check_prob(params.eta_det, "eta_det");
  check_prob(params.eta_m0[0], "eta_m0[0]");
  check_prob(params.eta_m0[1], "eta_m0[1]");
  check_prob(params.p_noise, "p_noise");
  check_prob(params.visibility, "visibility");
  if (!(params.tau_m[0] > 0.0)) {
    throw ConfigError("tau_m[0] must be positive, got " +
                      format_double(params.tau_m[0]));
  }
  if (!(params.tau_m[1] > 0.0)) {
    throw ConfigError("tau_m[1] must be positive, got " +
                      format_double(params.tau_m[1]));
  }
}

ModeCombine mode_combine_from_string(const std::string& s) {
  if (s == "mean") return ModeCombine::Mean;
  if (s == "min") return ModeCombine::Min;
  if (s == "mode1") return ModeCombine::Mode1;
  if (s == "mode2") return ModeCombine::Mode2;
  throw ConfigError("unknown mode combination '" + s +
                    "' (expected mean, min, mode1 or mode2)");
}

std::string to_string(ModeCombine mode) {
  switch (mode) {
    case ModeCombine::Mean:
      return "mean";
    case ModeCombine::Min:
      return "min";
    case ModeCombine::Mode1:
      return "mode1";
    case ModeCombine::Mode2:
      return "mode2";
  }
  throw ConfigError("invalid mode combination");
}

double storage_efficiency(double t_us, double eta0, double tau_us) {
  if (!(t_us >= 0.0)) {
    throw ConfigError("storage time must be nonnegative, got " +
                      format_double(t_us));
  }
  if (!(tau_us > 0.0)) {
    throw ConfigError("memory lifetime must be positive, got " +
                      format_double(tau_us));
  }
  const double r = t_us / tau_us;
  return eta0 * std::exp(-r * r);
}

double noise_strength(double t_us, const MemoryParams& params,
                      ModeCombine combine) {
  validate(params);
  const double m1 = storage_efficiency(t_us, params.eta_m0[0], params.tau_m[0]);
  const double m2 = storage_efficiency(t_us, params.eta_m0[1], params.tau_m[1]);
  double eta_m = 0.0;
  switch (combine) {
    case ModeCombine::Mean:
      eta_m = 0.5 * (m1 + m2);
      break;
    case ModeCombine::Min:
      eta_m = std::min(m1, m2);
      break;
    case ModeCombine::Mode1:
      eta_m = m1;
      break;
    case ModeCombine::Mode2:
      eta_m = m2;
      break;
  }
  const double p_signal = params.p_ph * eta_m * params.eta_opt * params.eta_det;
  const double denom = p_signal + params.p_noise;
  if (denom <= 0.0) {
    throw ConfigError(
        "signal and noise probabilities are both zero; the signal-to-noise "
        "ratio is undefined");
  }
  return params.p_noise / denom;
}

std::vector<CurvePoint> theory_curve(const MemoryParams& params,
                                     const std::vector<double>& times_us,
                                     const TheoryOptions& options) {
  validate(params);
  if (times_us.empty()) {
    throw ConfigError("time grid must not be empty");
  }
  for (std::size_t i = 0; i < times_us.size(); ++i) {
    if (!(times_us[i] >= 0.0)) {
      throw ConfigError("storage times must be nonnegative");
    }
    if (i > 0 && !(times_us[i] > times_us[i - 1])) {
      throw ConfigError("storage times must be strictly ascending");
    }
  }

  double lambda = 0.0;
  if (options.lambda_override) {
    lambda = *options.lambda_override;
  } else if (options.include_bsm_noise) {
    lambda = lambda_from_visibility(params.visibility);
  }
  const BsmModel bsm = bsm_povm(lambda);

  std::vector<CurvePoint> curve;
  curve.reserve(times_us.size());
  for (double t : times_us) {
    CurvePoint point;
    point.t_us = t;
    point.lambda = lambda;
    point.p = noise_strength(t, params, options.combine);
    point.witness = exact_witness(Channel::depolarizing(point.p), bsm);
    curve.push_back(point);
  }
  return curve;
}

std::vector<CurvePoint> simulated_curve(const std::vector<ChiCurveEntry>& chis,
                                        const BsmModel& bsm) {
  std::vector<CurvePoint> curve;
  curve.reserve(chis.size());
  for (std::size_t i = 0; i < chis.size(); ++i) {
    const ChiCurveEntry& entry = chis[i];
    CurvePoint point;
    point.t_us = entry.t_us;
    point.lambda = bsm.lambda;
    point.p = std::nan("");
    try {
      const Channel ch = Channel::from_chi(
          entry.chi, entry.name.empty() ? "chi" : entry.name);
      point.witness = exact_witness(ch, bsm);
    } catch (const DataError& e) {
      throw DataError("chi entry " + std::to_string(i) +
                      (entry.name.empty() ? "" : " (" + entry.name + ")") +
                      ": " + e.what());
    }
    curve.push_back(point);
  }
  return curve;
}

void save_curve_csv(const std::string& path,
                    const std::vector<CurvePoint>& points) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write curve file: " + path);
  }
  out << "t_us,witness,lambda,p\n";
  for (const CurvePoint& point : points) {
    out << format_double(point.t_us) << ',' << format_double(point.witness)
        << ',' << format_double(point.lambda) << ',' << format_double(point.p)
        << '\n';
  }
}

}  // namespace mdiqm
