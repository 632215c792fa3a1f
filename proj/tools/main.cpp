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

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdiqm/bsm.hpp"
#include "mdiqm/channels.hpp"
#include "mdiqm/config.hpp"
#include "mdiqm/errors.hpp"
#include "mdiqm/game.hpp"
#include "mdiqm/predict.hpp"
#include "mdiqm/tomography.hpp"

namespace {

using namespace mdiqm;

// Exit codes shared by every command.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

Channel parse_channel_spec(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("channel spec '" + spec +
                      "' must look like depolarizing:<p>, chi:<file> or "
                      "intercept:<basis>[+<basis>...]");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);

  if (kind == "depolarizing") {
    double p = 0.0;
    const char* first = rest.data();
    const char* last = first + rest.size();
    const auto parsed = std::from_chars(first, last, p);
    if (parsed.ec != std::errc() || parsed.ptr != last) {
      throw ConfigError("channel spec: cannot parse depolarizing strength '" +
                        rest + "'");
    }
    return Channel::depolarizing(p);
  }
  if (kind == "chi") {
    if (rest.empty()) {
      throw ConfigError("channel spec: chi: needs a file path");
    }
    const ChiFile file = load_chi_file(rest);
    Channel ch = Channel::from_chi(
        file.chi, file.name.empty() ? "chi:" + rest : file.name);
    if (ch.chi_was_projected()) {
      std::cerr << "note: chi matrix from " << rest
                << " was clipped to the nearest positive semidefinite form\n";
    }
    return ch;
  }
  if (kind == "intercept") {
    if (rest.empty()) {
      throw ConfigError("channel spec: intercept: needs at least one basis");
    }
    std::vector<Basis> bases;
    std::size_t start = 0;
    while (start <= rest.size()) {
      const std::size_t plus = rest.find('+', start);
      const std::string token =
          rest.substr(start, plus == std::string::npos ? std::string::npos
                                                       : plus - start);
      if (token.size() != 1 ||
          (token[0] != 'X' && token[0] != 'Y' && token[0] != 'Z')) {
        throw ConfigError("channel spec: intercept basis '" + token +
                          "' must be one of X, Y, Z");
      }
      bases.push_back(pauli_basis(token[0]));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    const std::vector<double> weights(bases.size(),
                                      1.0 / static_cast<double>(bases.size()));
    return Channel::intercept_resend(bases, weights);
  }
  throw ConfigError("channel spec: unknown kind '" + kind +
                    "' (expected depolarizing, chi or intercept)");
}

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

Config resolve_config(const CommonArgs& args) {
  Config config =
      args.config_path.empty() ? default_config() : load_config(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (!args.out_path.empty()) config.output_path = args.out_path;
  return config;
}

std::string resolve_out(const Config& config, const char* fallback) {
  return config.output_path.empty() ? fallback : config.output_path;
}

// Lambda used when simulating the measurement: an explicit flag wins,
// then the config override, then the visibility model if enabled.
double resolve_lambda(const Config& config,
                      const std::optional<double>& flag_lambda) {
  if (flag_lambda) return *flag_lambda;
  if (config.lambda_override) return *config.lambda_override;
  if (config.include_bsm_noise) {
    return lambda_from_visibility(config.memory_params.visibility);
  }
  return 0.0;
}

nlohmann::json witness_to_json(const WitnessResult& result) {
  return {{"value", result.value},
          {"std_error", result.std_error},
          {"rounds_used", result.rounds_used}};
}

int run_predict(const CommonArgs& common, bool include_bsm_noise,
                const std::optional<double>& lambda,
                const std::string& mode_combine) {
  Config config = resolve_config(common);
  TheoryOptions options;
  options.include_bsm_noise = include_bsm_noise || config.include_bsm_noise;
  options.combine = mode_combine.empty()
                        ? config.mode_combine
                        : mode_combine_from_string(mode_combine);
  options.lambda_override =
      lambda ? lambda : config.lambda_override;

  const auto curve = theory_curve(config.memory_params, config.times_us, options);
  const std::string out = resolve_out(config, "curve.csv");
  save_curve_csv(out, curve);
  std::cerr << "wrote " << out << "\n";
  return kExitOk;
}

int run_simulate(const CommonArgs& common, const std::string& channel_spec,
                 const std::optional<std::int64_t>& rounds,
                 const std::optional<double>& lambda,
                 const std::optional<double>& detection_efficiency,
                 const std::optional<int>& workers,
                 const std::string& error_method) {
  Config config = resolve_config(common);
  if (rounds) config.rounds = *rounds;
  if (detection_efficiency) config.detection_efficiency = *detection_efficiency;
  if (workers) config.workers = *workers;
  if (!error_method.empty()) {
    if (error_method == "delta") {
      config.error_method = ErrorMethod::Delta;
    } else if (error_method == "bootstrap") {
      config.error_method = ErrorMethod::Bootstrap;
    } else {
      throw ConfigError("unknown error method '" + error_method +
                        "' (expected delta or bootstrap)");
    }
  }

  const Channel channel = parse_channel_spec(channel_spec);
  const double bsm_lambda = resolve_lambda(config, lambda);
  const BsmModel bsm = bsm_povm(bsm_lambda);

  SimulateOptions sim;
  sim.detection_efficiency = config.detection_efficiency;
  sim.workers = config.workers;
  const Tally tally =
      simulate_rounds(channel, bsm, config.rounds, config.seed, sim);

  EstimateOptions est;
  est.method = config.error_method;
  const WitnessResult result = witness_estimate(tally, est);

  const std::string out = resolve_out(config, "tally.csv");
  save_tally_csv(out, tally);
  save_tally_meta(out + ".meta.json", tally, channel.name(), bsm_lambda,
                  config.detection_efficiency);
  save_witness_json(out + ".result.json", result);
  std::cerr << "wrote " << out << "\n";

  std::cout << witness_to_json(result).dump(2) << "\n";
  return kExitOk;
}

int run_witness(const std::string& tally_path, const std::string& out_path,
                const std::string& error_method,
                const std::optional<std::uint64_t>& bootstrap_seed) {
  const Tally tally = load_tally_csv(tally_path);
  EstimateOptions est;
  if (error_method == "bootstrap") {
    est.method = ErrorMethod::Bootstrap;
  } else if (!error_method.empty() && error_method != "delta") {
    throw ConfigError("unknown error method '" + error_method +
                      "' (expected delta or bootstrap)");
  }
  est.bootstrap_seed = bootstrap_seed;

  const WitnessResult result = witness_estimate(tally, est);
  if (!out_path.empty()) {
    save_witness_json(out_path, result);
    std::cerr << "wrote " << out_path << "\n";
  }
  std::cout << witness_to_json(result).dump(2) << "\n";
  return kExitOk;
}

int run_tomography_cmd(const CommonArgs& common,
                       const std::string& channel_spec,
                       const std::optional<std::int64_t>& shots) {
  Config config = resolve_config(common);
  if (shots) config.shots = *shots;

  const Channel channel = parse_channel_spec(channel_spec);
  const TomographyRecord record =
      run_tomography(channel, config.shots, config.seed);

  const std::string out = resolve_out(config, "record.json");
  save_record_json(out, record);
  const CMat chi = reconstruct_chi(record);
  save_chi_file(out + ".chi.json", chi, channel.name(), std::nullopt);
  std::cerr << "wrote " << out << "\n";

  const nlohmann::json summary = {
      {"process_fidelity", process_fidelity_to_identity(chi)},
      {"process_fidelity_psd",
       process_fidelity_to_identity(project_chi_psd(chi))}};
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int run_attack(const CommonArgs& common, const std::string& leak,
               const std::optional<std::int64_t>& shots,
               const std::optional<std::int64_t>& rounds) {
  Config config = resolve_config(common);
  if (shots) config.shots = *shots;
  if (rounds) config.rounds = *rounds;

  const AttackReport report = run_attack_comparison(
      leak_mode_from_string(leak), config.shots, config.rounds, config.seed);

  const std::string out = resolve_out(config, "attack.json");
  save_attack_report_json(out, report);
  std::cerr << "wrote " << out << "\n";

  const nlohmann::json summary = {
      {"leak", to_string(report.leak)},
      {"apparent_efficiency", report.apparent_efficiency},
      {"reported_fidelity", report.reported_fidelity},
      {"reported_fidelity_psd", report.reported_fidelity_psd},
      {"mdi_witness", witness_to_json(report.mdi_witness)}};
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Certification games for single-qubit memories: witness prediction, "
      "seeded simulation, and the tomography-spoofing comparison"};
  app.require_subcommand(1);

  CommonArgs common;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path,
                    "JSON configuration document");
    cmd->add_option("--seed", common.seed, "override the RNG seed");
    cmd->add_option("--out", common.out_path, "output path");
  };

  // predict
  auto* predict = app.add_subcommand(
      "predict", "theory curve: witness versus storage time");
  bool include_bsm_noise = false;
  std::optional<double> predict_lambda;
  std::string predict_combine;
  add_common(predict);
  predict->add_flag("--include-bsm-noise", include_bsm_noise,
                    "fold the visibility-derived lambda into the curve");
  predict->add_option("--lambda", predict_lambda,
                      "explicit measurement confusion probability");
  predict->add_option("--mode-combine", predict_combine,
                      "mean, min, mode1 or mode2");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "play seeded game rounds on a channel");
  std::string sim_channel;
  std::optional<std::int64_t> sim_rounds;
  std::optional<double> sim_lambda;
  std::optional<double> sim_eff;
  std::optional<int> sim_workers;
  std::string sim_error_method;
  simulate
      ->add_option("channel", sim_channel,
                   "depolarizing:<p> | chi:<file> | "
                   "intercept:<basis>[+<basis>...]")
      ->required();
  add_common(simulate);
  simulate->add_option("--rounds", sim_rounds, "number of game rounds");
  simulate->add_option("--lambda", sim_lambda,
                       "measurement confusion probability");
  simulate->add_option("--detection-efficiency", sim_eff,
                       "per-round survival probability");
  simulate->add_option("--workers", sim_workers, "worker thread count");
  simulate->add_option("--error-method", sim_error_method,
                       "delta or bootstrap");

  // witness
  auto* witness =
      app.add_subcommand("witness", "score a stored tally file");
  std::string witness_tally;
  std::string witness_out;
  std::string witness_error_method;
  std::optional<std::uint64_t> witness_bootstrap_seed;
  witness->add_option("tally", witness_tally, "tally CSV file")->required();
  witness->add_option("--out", witness_out, "also write the result here");
  witness->add_option("--error-method", witness_error_method,
                      "delta or bootstrap");
  witness->add_option("--bootstrap-seed", witness_bootstrap_seed,
                      "seed for bootstrap resampling");

  // tomography
  auto* tomography = app.add_subcommand(
      "tomography", "standard process tomography of a channel");
  std::string tomo_channel;
  std::optional<std::int64_t> tomo_shots;
  tomography
      ->add_option("channel", tomo_channel,
                   "depolarizing:<p> | chi:<file> | "
                   "intercept:<basis>[+<basis>...]")
      ->required();
  add_common(tomography);
  tomography->add_option("--shots", tomo_shots, "shots per setting");

  // attack
  auto* attack = app.add_subcommand(
      "attack", "detector-control spoof: tomography versus the game");
  std::string attack_leak = "after";
  std::optional<std::int64_t> attack_shots;
  std::optional<std::int64_t> attack_rounds;
  add_common(attack);
  attack->add_option("--leak", attack_leak,
                     "when the verifier's basis leaks: after or before");
  attack->add_option("--shots", attack_shots, "tomography shots per setting");
  attack->add_option("--rounds", attack_rounds, "game rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(predict)) {
      return run_predict(common, include_bsm_noise, predict_lambda,
                         predict_combine);
    }
    if (app.got_subcommand(simulate)) {
      return run_simulate(common, sim_channel, sim_rounds, sim_lambda,
                          sim_eff, sim_workers, sim_error_method);
    }
    if (app.got_subcommand(witness)) {
      return run_witness(witness_tally, witness_out, witness_error_method,
                         witness_bootstrap_seed);
    }
    if (app.got_subcommand(tomography)) {
      return run_tomography_cmd(common, tomo_channel, tomo_shots);
    }
    if (app.got_subcommand(attack)) {
      return run_attack(common, attack_leak, attack_shots, attack_rounds);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
