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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mdiqm/errors.hpp"
#include "mdiqm/game.hpp"
#include "mdiqm/predict.hpp"

using namespace mdiqm;

namespace {

struct FileGuard {
  std::string path;
  explicit FileGuard(std::string p) : path(std::move(p)) {}
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("reference apparatus parameters") {
  const MemoryParams p = default_memory_params();
  CHECK(p.p_ph == 0.060);
  CHECK(p.eta_opt == 0.108);
  CHECK(p.eta_det == 0.70);
  CHECK(p.eta_m0[0] == 0.269);
  CHECK(p.eta_m0[1] == 0.250);
  CHECK(p.tau_m[0] == 58.2);
  CHECK(p.tau_m[1] == 56.6);
  CHECK(p.p_noise == 8.57e-5);
  CHECK(p.visibility == 0.875);
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("parameter validation names the offending field") {
  MemoryParams p = default_memory_params();
  p.eta_opt = 1.4;
  CHECK_THROWS_WITH_AS(validate(p), "eta_opt must lie in [0, 1], got 1.4",
                       ConfigError);
  p = default_memory_params();
  p.tau_m[1] = 0.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = default_memory_params();
  p.p_noise = -1e-6;
  CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("gaussian storage decay") {
  CHECK(storage_efficiency(0.0, 0.269, 58.2) == 0.269);
  // One lifetime costs a factor of e.
  CHECK(storage_efficiency(58.2, 0.269, 58.2) ==
        doctest::Approx(0.098959569675118).epsilon(1e-14));
  // Faster than exponential: two lifetimes cost e^4.
  CHECK(storage_efficiency(116.4, 0.269, 58.2) ==
        doctest::Approx(0.269 * std::exp(-4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(storage_efficiency(-1.0, 0.269, 58.2), ConfigError);
  CHECK_THROWS_AS(storage_efficiency(1.0, 0.269, 0.0), ConfigError);
}

TEST_CASE("noise strength against frozen values") {
  const MemoryParams params = default_memory_params();
  // Frozen from the closed-form chain evaluated independently:
  // P_signal(0) = 0.060 * 0.2595 * 0.108 * 0.70 = 1.177092e-3.
  CHECK(noise_strength(0.0, params) ==
        doctest::Approx(0.06786549170409695).epsilon(1e-12));
  CHECK(noise_strength(10.0, params) ==
        doctest::Approx(0.0698099826113303).epsilon(1e-12));
  CHECK(noise_strength(30.0, params) ==
        doctest::Approx(0.08730954306639939).epsilon(1e-12));
  CHECK(noise_strength(60.0, params) ==
        doctest::Approx(0.17825031634314842).epsilon(1e-12));

  // Mode combination strategies bracket the mean.
  CHECK(noise_strength(0.0, params, ModeCombine::Min) ==
        doctest::Approx(0.07026317947036158).epsilon(1e-12));
  const double mean = noise_strength(25.0, params, ModeCombine::Mean);
  const double lo = noise_strength(25.0, params, ModeCombine::Mode1);
  const double hi = noise_strength(25.0, params, ModeCombine::Mode2);
  CHECK(mean > std::min(lo, hi));
  CHECK(mean < std::max(lo, hi));

  // All noise and no signal is refused.
  MemoryParams dark = params;
  dark.p_ph = 0.0;
  dark.p_noise = 0.0;
  CHECK_THROWS_AS(noise_strength(0.0, dark), ConfigError);
}

TEST_CASE("mode combine strings round-trip") {
  for (ModeCombine mode : {ModeCombine::Mean, ModeCombine::Min,
                           ModeCombine::Mode1, ModeCombine::Mode2}) {
    CHECK(mode_combine_from_string(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(mode_combine_from_string("median"), ConfigError);
}

TEST_CASE("theory curve frozen endpoints") {
  const MemoryParams params = default_memory_params();
  const std::vector<double> times = {0.0, 30.0, 60.0};

  const auto ideal = theory_curve(params, times);
  REQUIRE(ideal.size() == 3);
  CHECK(ideal[0].witness ==
        doctest::Approx(0.8982017624438541).epsilon(1e-12));
  CHECK(ideal[1].witness ==
        doctest::Approx(0.8690356854004004).epsilon(1e-12));
  CHECK(ideal[0].lambda == 0.0);
  CHECK(ideal[0].p == doctest::Approx(0.06786549170409695).epsilon(1e-12));
  CHECK(ideal[0].t_us == 0.0);

  TheoryOptions noisy;
  noisy.include_bsm_noise = true;
  const auto with_bsm = theory_curve(params, times, noisy);
  CHECK(with_bsm[0].lambda == doctest::Approx(0.1171875).epsilon(1e-15));
  CHECK(with_bsm[0].witness ==
        doctest::Approx(0.6797327370620019).epsilon(1e-12));
  CHECK(with_bsm[2].witness ==
        doctest::Approx(0.5400269433782023).epsilon(1e-12));

  // An explicit lambda wins over the visibility-derived one.
  TheoryOptions overridden = noisy;
  overridden.lambda_override = 0.0;
  const auto forced = theory_curve(params, times, overridden);
  CHECK(forced[0].lambda == 0.0);
  CHECK(forced[0].witness ==
        doctest::Approx(0.8982017624438541).epsilon(1e-12));
}

TEST_CASE("theory curve is positive and strictly decreasing on the grid") {
  const MemoryParams params = default_memory_params();
  std::vector<double> times;
  for (int t = 0; t <= 60; t += 5) times.push_back(static_cast<double>(t));

  for (bool noisy : {false, true}) {
    TheoryOptions options;
    options.include_bsm_noise = noisy;
    const auto curve = theory_curve(params, times, options);
    REQUIRE(curve.size() == times.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
      CHECK(curve[i].witness > 0.0);
      if (i > 0) CHECK(curve[i].witness < curve[i - 1].witness);
    }
  }
}

TEST_CASE("theory curve rejects bad grids") {
  const MemoryParams params = default_memory_params();
  CHECK_THROWS_AS(theory_curve(params, {}), ConfigError);
  CHECK_THROWS_AS(theory_curve(params, {0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(theory_curve(params, {10.0, 5.0}), ConfigError);
  CHECK_THROWS_AS(theory_curve(params, {-1.0, 5.0}), ConfigError);
}

TEST_CASE("chi-driven curve matches the noise model it came from") {
  const MemoryParams params = default_memory_params();
  const BsmModel bsm = bsm_povm(0.0);

  std::vector<ChiCurveEntry> entries;
  for (double t : {0.0, 20.0, 40.0}) {
    ChiCurveEntry entry;
    entry.t_us = t;
    entry.chi = Channel::depolarizing(noise_strength(t, params)).chi_matrix();
    entry.name = "t" + std::to_string(static_cast<int>(t));
    entries.push_back(entry);
  }

  const auto measured = simulated_curve(entries, bsm);
  const auto predicted =
      theory_curve(params, {0.0, 20.0, 40.0});
  REQUIRE(measured.size() == predicted.size());
  for (std::size_t i = 0; i < measured.size(); ++i) {
    CHECK(measured[i].witness ==
          doctest::Approx(predicted[i].witness).epsilon(1e-10));
    CHECK(std::isnan(measured[i].p));
  }
}

TEST_CASE("chi-driven curve reports the failing entry") {
  CMat broken(4, 4);
  broken.at(0, 0) = 1.0;
  broken.at(3, 3) = -0.2;

  ChiCurveEntry entry;
  entry.t_us = 5.0;
  entry.chi = broken;
  entry.name = "bad-point";

  try {
    simulated_curve({entry}, bsm_povm(0.0));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    const std::string message = e.what();
    CHECK(message.find("chi entry 0") != std::string::npos);
    CHECK(message.find("bad-point") != std::string::npos);
  }
}

TEST_CASE("curve csv bytes are stable") {
  const std::string path = "mdiqm_test_curve.csv";
  FileGuard guard(path);

  std::vector<CurvePoint> points(2);
  points[0].t_us = 0.0;
  points[0].witness = 1.0;
  points[0].lambda = 0.0;
  points[0].p = 0.25;
  points[1].t_us = 12.5;
  points[1].witness = 0.125;
  points[1].lambda = 0.1171875;
  points[1].p = std::nan("");

  save_curve_csv(path, points);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() ==
        "t_us,witness,lambda,p\n"
        "0,1,0,0.25\n"
        "12.5,0.125,0.1171875,nan\n");
}
