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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "mdiqm/bsm.hpp"
#include "mdiqm/channels.hpp"
#include "mdiqm/errors.hpp"
#include "mdiqm/game.hpp"

using namespace mdiqm;

namespace {

struct FileGuard {
  std::string path;
  explicit FileGuard(std::string p) : path(std::move(p)) {}
  ~FileGuard() { std::remove(path.c_str()); }
};

Tally tally_from_triples(
    std::initializer_list<std::array<char, 3>> triples) {
  Tally tally;
  for (const auto& t : triples) {
    ++tally.at(state_label_from_char(t[0]), state_label_from_char(t[1]),
               outcome_from_char(t[2]));
    ++tally.rounds_attempted;
  }
  return tally;
}

}  // namespace

TEST_CASE("outcome distributions of the ideal memory") {
  const Channel id = Channel::identity();
  const BsmModel bsm = bsm_povm(0.0);

  // Frozen from direct projector algebra: matched diagonal challenges
  // answer + half the time and fail otherwise; matched circular ones
  // answer -; rectilinear pairs always answer conclusively.
  const auto dd = outcome_distribution(id, bsm, StateLabel::D, StateLabel::D);
  CHECK(dd[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dd[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dd[2] == doctest::Approx(0.5).epsilon(1e-12));

  const auto rr = outcome_distribution(id, bsm, StateLabel::R, StateLabel::R);
  CHECK(rr[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rr[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto hh = outcome_distribution(id, bsm, StateLabel::H, StateLabel::H);
  CHECK(hh[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hh[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hh[2] == doctest::Approx(0.0).epsilon(1e-12));

  // Distributions always normalize.
  for (StateLabel x : kStateLabels) {
    for (StateLabel y : kStateLabels) {
      const auto d = outcome_distribution(id, bsm, x, y);
      CHECK(d[0] + d[1] + d[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  // Half-depolarized crossed rectilinear challenges leak into the
  // conclusive outcomes: (1/8, 1/8, 3/4).
  const auto hv = outcome_distribution(Channel::depolarizing(0.5), bsm,
                                       StateLabel::H, StateLabel::V);
  CHECK(hv[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(hv[1] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(hv[2] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("exact witness closed forms") {
  const BsmModel ideal = bsm_povm(0.0);

  CHECK(exact_witness(Channel::identity(), ideal) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Depolarizing line 1 - 3p/2.
  for (double p : {0.0, 0.1, 0.3, 0.5, 2.0 / 3.0, 0.9, 1.0}) {
    CHECK(exact_witness(Channel::depolarizing(p), ideal) ==
          doctest::Approx(1.0 - 1.5 * p).epsilon(1e-12));
  }

  // Measurement confusion scales the ideal-memory witness as 1 - 2l.
  for (double lambda : {0.1, 0.25, 0.1171875}) {
    CHECK(exact_witness(Channel::identity(), bsm_povm(lambda)) ==
          doctest::Approx(1.0 - 2.0 * lambda).epsilon(1e-12));
  }

  // Combined noise: (1-2l)(1-p) - p/2. The crossed rectilinear cells pay
  // the same for both conclusive outcomes, so their -p/2 share of the
  // depolarizing loss is immune to outcome swaps.
  CHECK(exact_witness(Channel::depolarizing(0.2), bsm_povm(0.1)) ==
        doctest::Approx(0.54).epsilon(1e-12));

  // Every measure-and-prepare strategy stays at or below zero.
  const Channel xyz = Channel::intercept_resend(
      {pauli_basis('X'), pauli_basis('Y'), pauli_basis('Z')},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(exact_witness(xyz, ideal) == doctest::Approx(0.0).epsilon(1e-12));
  const Channel zir = Channel::intercept_resend({pauli_basis('Z')}, {1.0});
  CHECK(exact_witness(zir, ideal) <= 1e-12);
}

TEST_CASE("simulated rounds follow the pinned substreams") {
  // Frozen from an independent reimplementation of the generator and
  // the round recipe (x, y, then the outcome variate).
  const Tally tally =
      simulate_rounds(Channel::identity(), bsm_povm(0.0), 8, 7);
  const Tally expected = tally_from_triples({{'H', 'R', '0'},
                                             {'V', 'H', '0'},
                                             {'R', 'H', '-'},
                                             {'D', 'D', '+'},
                                             {'R', 'V', '+'},
                                             {'R', 'D', '+'},
                                             {'H', 'V', '0'},
                                             {'R', 'V', '+'}});
  CHECK(tally.counts == expected.counts);
  CHECK(tally.rounds_attempted == 8);
  CHECK(tally.detected_total() == 8);
  CHECK(tally.seed == 7);

  const Tally noisy =
      simulate_rounds(Channel::depolarizing(0.3), bsm_povm(0.1), 12, 2026);
  const Tally noisy_expected = tally_from_triples({{'V', 'V', '-'},
                                                   {'V', 'V', '+'},
                                                   {'D', 'H', '-'},
                                                   {'H', 'D', '0'},
                                                   {'V', 'R', '+'},
                                                   {'H', 'V', '0'},
                                                   {'D', 'D', '-'},
                                                   {'V', 'R', '+'},
                                                   {'D', 'R', '-'},
                                                   {'D', 'V', '0'},
                                                   {'V', 'R', '0'},
                                                   {'D', 'D', '0'}});
  CHECK(noisy.counts == noisy_expected.counts);
}

TEST_CASE("thousand-round tally and its estimate are pinned") {
  const Tally tally =
      simulate_rounds(Channel::identity(), bsm_povm(0.0), 1000, 5);
  CHECK(tally.detected_total() == 1000);
  CHECK(tally.at(StateLabel::H, StateLabel::H, Outcome::Plus) == 20);
  CHECK(tally.at(StateLabel::H, StateLabel::H, Outcome::Minus) == 29);
  CHECK(tally.at(StateLabel::H, StateLabel::H, Outcome::Zero) == 0);
  CHECK(tally.at(StateLabel::D, StateLabel::D, Outcome::Plus) == 38);
  CHECK(tally.at(StateLabel::D, StateLabel::D, Outcome::Zero) == 29);

  const WitnessResult result = witness_estimate(tally);
  CHECK(result.value == doctest::Approx(1.1081351018289418).epsilon(1e-12));
  CHECK(result.std_error ==
        doctest::Approx(0.1533157902729719).epsilon(1e-12));
  CHECK(result.rounds_used == 1000);
}

TEST_CASE("detection efficiency thins the tally deterministically") {
  SimulateOptions lossy;
  lossy.detection_efficiency = 0.25;
  const Tally tally =
      simulate_rounds(Channel::identity(), bsm_povm(0.0), 1000, 5, lossy);
  CHECK(tally.rounds_attempted == 1000);
  CHECK(tally.detected_total() == 226);

  SimulateOptions bad;
  bad.detection_efficiency = 1.5;
  CHECK_THROWS_AS(
      simulate_rounds(Channel::identity(), bsm_povm(0.0), 10, 1, bad),
      ConfigError);
}

TEST_CASE("worker count never changes the tally") {
  const Channel ch = Channel::depolarizing(0.15);
  const BsmModel bsm = bsm_povm(0.05);
  const Tally reference = simulate_rounds(ch, bsm, 10000, 99);
  for (int workers : {2, 3, 7, 16}) {
    SimulateOptions options;
    options.workers = workers;
    const Tally split = simulate_rounds(ch, bsm, 10000, 99, options);
    CHECK(split.counts == reference.counts);
  }

  // More workers than rounds is fine too.
  SimulateOptions wide;
  wide.workers = 64;
  const Tally tiny_ref = simulate_rounds(ch, bsm, 5, 42);
  const Tally tiny = simulate_rounds(ch, bsm, 5, 42, wide);
  CHECK(tiny.counts == tiny_ref.counts);
}

TEST_CASE("estimator converges to the exact witness") {
  const Channel ch = Channel::depolarizing(0.2);
  const BsmModel bsm = bsm_povm(0.0);
  const double exact = exact_witness(ch, bsm);
  const Tally tally = simulate_rounds(ch, bsm, 200000, 11);
  const WitnessResult result = witness_estimate(tally);
  CHECK(std::abs(result.value - exact) < 4.0 * result.std_error);
  // Error bar shrinks like 1/sqrt(n).
  CHECK(result.std_error < 0.03);
  CHECK(result.std_error > 0.003);
}

TEST_CASE("delta error of a hand-built tally") {
  // Every cell (10, 8, 7): value -0.72, error frozen from the
  // independently computed per-cell multinomial variance.
  Tally hand;
  for (StateLabel x : kStateLabels) {
    for (StateLabel y : kStateLabels) {
      hand.at(x, y, Outcome::Plus) = 10;
      hand.at(x, y, Outcome::Minus) = 8;
      hand.at(x, y, Outcome::Zero) = 7;
    }
  }
  hand.rounds_attempted = 400;
  const WitnessResult result = witness_estimate(hand);
  CHECK(result.value == doctest::Approx(-0.72).epsilon(1e-12));
  CHECK(result.std_error ==
        doctest::Approx(0.34381390315110877).epsilon(1e-12));
  CHECK(result.rounds_used == 400);
}

TEST_CASE("empty cells are reported by name") {
  Tally empty;
  CHECK_THROWS_WITH_AS(witness_estimate(empty),
                       "insufficient data: no detected events in cell (H,H)",
                       DataError);

  Tally partial;
  for (StateLabel x : kStateLabels) {
    for (StateLabel y : kStateLabels) {
      partial.at(x, y, Outcome::Plus) = 1;
    }
  }
  partial.at(StateLabel::D, StateLabel::R, Outcome::Plus) = 0;
  CHECK_THROWS_WITH_AS(witness_estimate(partial),
                       "insufficient data: no detected events in cell (D,R)",
                       DataError);
}

TEST_CASE("bootstrap errors track the delta method") {
  const Tally tally =
      simulate_rounds(Channel::depolarizing(0.3), bsm_povm(0.0), 20000, 31);

  EstimateOptions delta;
  const WitnessResult d = witness_estimate(tally, delta);

  EstimateOptions boot;
  boot.method = ErrorMethod::Bootstrap;
  boot.bootstrap_resamples = 400;
  const WitnessResult b = witness_estimate(tally, boot);

  CHECK(b.value == d.value);  // the point estimate never changes
  CHECK(b.std_error > 0.5 * d.std_error);
  CHECK(b.std_error < 2.0 * d.std_error);

  // Same resampling seed, same answer.
  const WitnessResult b2 = witness_estimate(tally, boot);
  CHECK(b2.std_error == b.std_error);

  // An explicit seed decouples the resampling from the tally seed.
  EstimateOptions reseeded = boot;
  reseeded.bootstrap_seed = 777;
  const WitnessResult b3 = witness_estimate(tally, reseeded);
  CHECK(b3.std_error != b.std_error);
  CHECK(b3.std_error == doctest::Approx(b.std_error).epsilon(0.25));

  EstimateOptions degenerate = boot;
  degenerate.bootstrap_resamples = 1;
  CHECK_THROWS_AS(witness_estimate(tally, degenerate), ConfigError);
}

TEST_CASE("tally csv round-trips") {
  const std::string path = "mdiqm_test_tally.csv";
  FileGuard guard(path);

  const Tally tally =
      simulate_rounds(Channel::depolarizing(0.4), bsm_povm(0.1), 500, 13);
  save_tally_csv(path, tally);

  const Tally loaded = load_tally_csv(path);
  CHECK(loaded.counts == tally.counts);
  CHECK(loaded.rounds_attempted == tally.detected_total());

  // The writer emits the fixed header and scan order.
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,b,count");
}

TEST_CASE("tally csv loader rejects malformed input") {
  const std::string path = "mdiqm_test_tally_bad.csv";
  FileGuard guard(path);

  CHECK_THROWS_AS(load_tally_csv("missing_file.csv"), DataError);

  std::ofstream(path) << "x,y,count\nH,H,3\n";
  CHECK_THROWS_AS(load_tally_csv(path), DataError);

  std::ofstream(path) << "x,y,b,count\nH,H,+\n";
  CHECK_THROWS_AS(load_tally_csv(path), DataError);

  std::ofstream(path) << "x,y,b,count\nH,H,+,-3\n";
  CHECK_THROWS_AS(load_tally_csv(path), DataError);

  std::ofstream(path) << "x,y,b,count\nQ,H,+,3\n";
  CHECK_THROWS_AS(load_tally_csv(path), DataError);

  // A bare header is the round-trip image of an all-zero tally; it loads
  // as empty and only fails once someone tries to score it.
  std::ofstream(path) << "x,y,b,count\n";
  const Tally empty = load_tally_csv(path);
  CHECK(empty.detected_total() == 0);
  CHECK_THROWS_AS(witness_estimate(empty, {}), DataError);

  // Repeated rows accumulate rather than overwrite.
  std::ofstream(path) << "x,y,b,count\nD,D,+,2\nD,D,+,3\n";
  const Tally dup = load_tally_csv(path);
  CHECK(dup.at(StateLabel::D, StateLabel::D, Outcome::Plus) == 5);
}

TEST_CASE("result and metadata sidecars are well-formed json") {
  const std::string result_path = "mdiqm_test_result.json";
  const std::string meta_path = "mdiqm_test_meta.json";
  FileGuard guard1(result_path);
  FileGuard guard2(meta_path);

  const Tally tally =
      simulate_rounds(Channel::identity(), bsm_povm(0.0), 1000, 5);
  const WitnessResult result = witness_estimate(tally);
  save_witness_json(result_path, result);
  save_tally_meta(meta_path, tally, "identity", 0.0, 1.0);

  std::ifstream result_in(result_path);
  std::stringstream result_buf;
  result_buf << result_in.rdbuf();
  const std::string result_doc = result_buf.str();
  CHECK(result_doc.find("\"value\"") != std::string::npos);
  CHECK(result_doc.find("\"std_error\"") != std::string::npos);
  CHECK(result_doc.find("\"rounds_used\"") != std::string::npos);

  std::ifstream meta_in(meta_path);
  std::stringstream meta_buf;
  meta_buf << meta_in.rdbuf();
  const std::string meta_doc = meta_buf.str();
  CHECK(meta_doc.find("\"channel\"") != std::string::npos);
  CHECK(meta_doc.find("\"seed\"") != std::string::npos);
  CHECK(meta_doc.find("identity") != std::string::npos);
}
