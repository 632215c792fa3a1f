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

#include "mdiqm/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mdiqm/errors.hpp"
#include "textutil.hpp"

namespace mdiqm {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (known.count(item.key()) == 0) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw ConfigError(where + " must be a number");
  }
  return v.get<double>();
}

std::int64_t require_positive_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw ConfigError(where + " must be an integer");
  }
  const auto n = v.get<std::int64_t>();
  if (n < 1) {
    throw ConfigError(where + " must be at least 1");
  }
  return n;
}

MemoryParams parse_memory_params(const json& obj) {
  if (!obj.is_object()) {
    throw ConfigError("memory_params must be an object");
  }
  reject_unknown_keys(obj,
                      {"p_ph", "eta_opt", "eta_det", "eta_m0", "tau_m",
                       "p_noise", "visibility", "notes"},
                      "memory_params");

  MemoryParams params = default_memory_params();
  if (obj.contains("p_ph")) {
    params.p_ph = require_number(obj["p_ph"], "memory_params.p_ph");
  }
  if (obj.contains("eta_opt")) {
    params.eta_opt = require_number(obj["eta_opt"], "memory_params.eta_opt");
  }
  if (obj.contains("eta_det")) {
    params.eta_det = require_number(obj["eta_det"], "memory_params.eta_det");
  }
  if (obj.contains("p_noise")) {
    params.p_noise = require_number(obj["p_noise"], "memory_params.p_noise");
  }
  if (obj.contains("visibility")) {
    params.visibility =
        require_number(obj["visibility"], "memory_params.visibility");
  }
  const auto parse_pair = [&](const char* key, std::array<double, 2>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
      throw ConfigError(std::string("memory_params.") + key +
                        " must be a [mode1, mode2] number pair");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  };
  parse_pair("eta_m0", params.eta_m0);
  parse_pair("tau_m", params.tau_m);

  validate(params);
  return params;
}

}  // namespace

Config default_config() {
  Config config;
  config.memory_params = default_memory_params();
  for (int t = 0; t <= 60; t += 5) {
    config.times_us.push_back(static_cast<double>(t));
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config file " + path + ": top level must be an object");
  }
  reject_unknown_keys(
      doc,
      {"memory_params", "lambda_override", "times_us", "rounds", "shots",
       "seed", "output_path", "include_bsm_noise", "mode_combine",
       "detection_efficiency", "workers", "error_method", "notes"},
      "config");

  Config config = default_config();

  if (doc.contains("memory_params")) {
    config.memory_params = parse_memory_params(doc["memory_params"]);
  }
  if (doc.contains("lambda_override")) {
    const double lambda =
        require_number(doc["lambda_override"], "lambda_override");
    if (!(lambda >= 0.0 && lambda <= 0.5)) {
      throw ConfigError("lambda_override must lie in [0, 1/2], got " +
                        format_double(lambda));
    }
    config.lambda_override = lambda;
  }
  if (doc.contains("times_us")) {
    const json& times = doc["times_us"];
    if (!times.is_array() || times.empty()) {
      throw ConfigError("times_us must be a non-empty array of numbers");
    }
    config.times_us.clear();
    for (const auto& t : times) {
      config.times_us.push_back(require_number(t, "times_us entry"));
    }
  }
  if (doc.contains("rounds")) {
    config.rounds = require_positive_int(doc["rounds"], "rounds");
  }
  if (doc.contains("shots")) {
    config.shots = require_positive_int(doc["shots"], "shots");
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_integer() ||
        (s.is_number_integer() && !s.is_number_unsigned() &&
         s.get<std::int64_t>() < 0)) {
      throw ConfigError("seed must be a nonnegative integer");
    }
    config.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_path")) {
    if (!doc["output_path"].is_string()) {
      throw ConfigError("output_path must be a string");
    }
    config.output_path = doc["output_path"].get<std::string>();
  }
  if (doc.contains("include_bsm_noise")) {
    if (!doc["include_bsm_noise"].is_boolean()) {
      throw ConfigError("include_bsm_noise must be a boolean");
    }
    config.include_bsm_noise = doc["include_bsm_noise"].get<bool>();
  }
  if (doc.contains("mode_combine")) {
    if (!doc["mode_combine"].is_string()) {
      throw ConfigError("mode_combine must be a string");
    }
    config.mode_combine =
        mode_combine_from_string(doc["mode_combine"].get<std::string>());
  }
  if (doc.contains("detection_efficiency")) {
    const double eff =
        require_number(doc["detection_efficiency"], "detection_efficiency");
    if (!(eff >= 0.0 && eff <= 1.0)) {
      throw ConfigError("detection_efficiency must lie in [0, 1], got " +
                        format_double(eff));
    }
    config.detection_efficiency = eff;
  }
  if (doc.contains("workers")) {
    const std::int64_t workers =
        require_positive_int(doc["workers"], "workers");
    if (workers > 4096) {
      throw ConfigError("workers must be at most 4096");
    }
    config.workers = static_cast<int>(workers);
  }
  if (doc.contains("error_method")) {
    if (!doc["error_method"].is_string()) {
      throw ConfigError("error_method must be a string");
    }
    const std::string method = doc["error_method"].get<std::string>();
    if (method == "delta") {
      config.error_method = ErrorMethod::Delta;
    } else if (method == "bootstrap") {
      config.error_method = ErrorMethod::Bootstrap;
    } else {
      throw ConfigError("unknown error_method '" + method +
                        "' (expected delta or bootstrap)");
    }
  }
  return config;
}

}  // namespace mdiqm
