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

#ifndef MDIQM_CONFIG_HPP
#define MDIQM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdiqm/game.hpp"
#include "mdiqm/predict.hpp"

namespace mdiqm {

/// One document drives every command; flags override individual fields.
/// Unknown keys are rejected so typos cannot silently fall back to
/// defaults ("notes" is allowed anywhere for annotations).
struct Config {
  MemoryParams memory_params;
  std::optional<double> lambda_override;
  std::vector<double> times_us;
  std::int64_t rounds = 100000;
  std::int64_t shots = 2000;
  std::uint64_t seed = 1;
  std::string output_path;
  bool include_bsm_noise = false;
  ModeCombine mode_combine = ModeCombine::Mean;
  double detection_efficiency = 1.0;
  int workers = 1;
  ErrorMethod error_method = ErrorMethod::Delta;
};

/// Reference-apparatus parameters and a 0..60 us grid in 5 us steps.
Config default_config();

/// Parses and validates a JSON config document.  Missing fields keep
/// their defaults; any unknown key or out-of-range value raises
/// ConfigError naming the offender.
Config load_config(const std::string& path);

}  // namespace mdiqm

#endif  // MDIQM_CONFIG_HPP
