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

#include "mdiqm/tomography.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mdiqm/bsm.hpp"
#include "mdiqm/errors.hpp"
#include "mdiqm/rng.hpp"

namespace mdiqm {
namespace {

// P(+1) when state rho is measured in the given Pauli basis.
double plus_probability(const CMat& rho, MeasBasis basis) {
  const Basis b = pauli_basis(to_char(basis));
  return std::max(0.0, (b.v0.adjoint() * rho * b.v0).at(0, 0).real());
}

std::string setting_name(StateLabel input, MeasBasis basis) {
  return std::string("(input ") + to_char(input) + ", basis " +
         to_char(basis) + ")";
}

// Output state with the given Pauli expectations: (1 + r.sigma)/2.
CMat state_from_bloch(double ex, double ey, double ez) {
  CMat rho = CMat::identity(2);
  rho += ex * pauli_x();
  rho += ey * pauli_y();
  rho += ez * pauli_z();
  rho *= cplx(0.5, 0.0);
  return rho;
}

}  // namespace

char to_char(MeasBasis basis) {
  switch (basis) {
    case MeasBasis::X:
      return 'X';
    case MeasBasis::Y:
      return 'Y';
    case MeasBasis::Z:
      return 'Z';
  }
  throw ConfigError("invalid measurement basis");
}

MeasBasis meas_basis_from_char(char c) {
  switch (c) {
    case 'X':
      return MeasBasis::X;
    case 'Y':
      return MeasBasis::Y;
    case 'Z':
      return MeasBasis::Z;
    default:
      throw DataError(std::string("unknown measurement basis '") + c +
                      "' (expected X, Y or Z)");
  }
}

std::int64_t TomographyRecord::setting_total(StateLabel input,
                                             MeasBasis basis) const {
  const auto& c = counts[static_cast<std::size_t>(input)]
                        [static_cast<std::size_t>(basis)];
  return c[0] + c[1];
}

std::int64_t TomographyRecord::recorded_total() const {
  std::int64_t total = 0;
  for (const auto& row : counts) {
    for (const auto& c : row) total += c[0] + c[1];
  }
  return total;
}

TomographyRecord run_tomography(const Channel& n, std::int64_t shots,
                                std::uint64_t seed) {
  if (shots < 1) {
    throw ConfigError("shot count must be at least 1");
  }
  TomographyRecord record;
  record.seed = seed;
  record.shots = shots;

  for (int input = 0; input < 4; ++input) {
    const CMat out = n.apply(prepared_state(static_cast<StateLabel>(input)));
    for (int basis = 0; basis < 3; ++basis) {
      const double p_plus =
          plus_probability(out, static_cast<MeasBasis>(basis));
      const std::uint64_t setting =
          static_cast<std::uint64_t>(input * 3 + basis);
      auto& cell = record.counts[static_cast<std::size_t>(input)]
                                [static_cast<std::size_t>(basis)];
      for (std::int64_t s = 0; s < shots; ++s) {
        Rng rng = Rng::substream(
            seed, RngDomain::Tomography,
            setting * static_cast<std::uint64_t>(shots) +
                static_cast<std::uint64_t>(s));
        ++cell[rng.next_double() < p_plus ? 0 : 1];
      }
    }
  }
  return record;
}

std::array<std::array<double, 3>, 4> expectations_from_record(
    const TomographyRecord& record) {
  std::array<std::array<double, 3>, 4> e{};
  for (int input = 0; input < 4; ++input) {
    for (int basis = 0; basis < 3; ++basis) {
      const auto& c = record.counts[static_cast<std::size_t>(input)]
                                   [static_cast<std::size_t>(basis)];
      const std::int64_t total = c[0] + c[1];
      if (total == 0) {
        throw DataError("insufficient data: no outcomes recorded for "
                        "setting " +
                        setting_name(static_cast<StateLabel>(input),
                                     static_cast<MeasBasis>(basis)));
      }
      e[static_cast<std::size_t>(input)][static_cast<std::size_t>(basis)] =
          static_cast<double>(c[0] - c[1]) / static_cast<double>(total);
    }
  }
  return e;
}

std::array<std::array<double, 3>, 4> exact_expectations(const Channel& n) {
  std::array<std::array<double, 3>, 4> e{};
  for (int input = 0; input < 4; ++input) {
    const CMat out = n.apply(prepared_state(static_cast<StateLabel>(input)));
    for (int basis = 0; basis < 3; ++basis) {
      e[static_cast<std::size_t>(input)][static_cast<std::size_t>(basis)] =
          2.0 * plus_probability(out, static_cast<MeasBasis>(basis)) - 1.0;
    }
  }
  return e;
}

CMat chi_from_expectations(const std::array<std::array<double, 3>, 4>& e) {
  // Output states of the four probe inputs, in (H, V, D, R) order.
  std::array<CMat, 4> rho;
  for (int input = 0; input < 4; ++input) {
    const auto& row = e[static_cast<std::size_t>(input)];
    rho[static_cast<std::size_t>(input)] =
        state_from_bloch(row[0], row[1], row[2]);
  }

  // Outputs for the non-physical basis elements |H><V| and |V><H| follow
  // by linearity from the D and R rows.
  CMat s_d = 2.0 * rho[2] - rho[0] - rho[1];
  CMat s_r = 2.0 * rho[3] - rho[0] - rho[1];
  CMat n01(2, 2);
  CMat n10(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      n01.at(r, c) = 0.5 * (s_d.at(r, c) + cplx(0.0, 1.0) * s_r.at(r, c));
      n10.at(r, c) = 0.5 * (s_d.at(r, c) - cplx(0.0, 1.0) * s_r.at(r, c));
    }
  }

  // Block matrix beta = [[N(|H><H|), N(|H><V|)], [N(|V><H|), N(|V><V|)]];
  // chi = Lambda beta Lambda with Lambda = (1/2) [[I, X], [X, -I]].
  CMat beta(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      beta.at(r, c) = rho[0].at(r, c);
      beta.at(r, c + 2) = n01.at(r, c);
      beta.at(r + 2, c) = n10.at(r, c);
      beta.at(r + 2, c + 2) = rho[1].at(r, c);
    }
  }

  CMat lambda(4, 4);
  lambda.at(0, 0) = 0.5;
  lambda.at(0, 3) = 0.5;
  lambda.at(1, 1) = 0.5;
  lambda.at(1, 2) = 0.5;
  lambda.at(2, 1) = 0.5;
  lambda.at(2, 2) = -0.5;
  lambda.at(3, 0) = 0.5;
  lambda.at(3, 3) = -0.5;

  return lambda * beta * lambda;
}

CMat reconstruct_chi(const TomographyRecord& record) {
  return chi_from_expectations(expectations_from_record(record));
}

double process_fidelity_to_identity(const CMat& chi) {
  if (chi.rows() != 4 || chi.cols() != 4) {
    throw ConfigError("process matrix must be 4x4");
  }
  const double trace = chi.trace().real();
  if (trace <= 0.0) {
    throw DataError("process matrix has non-positive trace");
  }
  return chi.at(0, 0).real() / trace;
}

CMat project_chi_psd(const CMat& chi) {
  if (chi.rows() != 4 || chi.cols() != 4) {
    throw ConfigError("process matrix must be 4x4");
  }
  // Symmetrize first: linear inversion keeps Hermiticity only up to
  // sampling noise in principle, and clip_to_psd requires it.
  CMat herm(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      herm.at(r, c) = 0.5 * (chi.at(r, c) + std::conj(chi.at(c, r)));
    }
  }
  return clip_to_psd(herm);
}

std::string to_string(LeakMode mode) {
  return mode == LeakMode::After ? "after" : "before";
}

LeakMode leak_mode_from_string(const std::string& s) {
  if (s == "after") return LeakMode::After;
  if (s == "before") return LeakMode::Before;
  throw ConfigError("unknown leak mode '" + s +
                    "' (expected after or before)");
}

TomographyRecord run_tomography_against(LeakMode leak, std::int64_t shots,
                                        std::uint64_t seed) {
  if (shots < 1) {
    throw ConfigError("shot count must be at least 1");
  }
  TomographyRecord record;
  record.seed = seed;
  record.shots = shots;

  for (int input = 0; input < 4; ++input) {
    const CMat state = prepared_state(static_cast<StateLabel>(input));
    // P(+1) of the input in each of the adversary's candidate bases.
    double p_plus[3];
    for (int b = 0; b < 3; ++b) {
      p_plus[b] = plus_probability(state, static_cast<MeasBasis>(b));
    }
    for (int basis = 0; basis < 3; ++basis) {
      const std::uint64_t setting =
          static_cast<std::uint64_t>(input * 3 + basis);
      auto& cell = record.counts[static_cast<std::size_t>(input)]
                                [static_cast<std::size_t>(basis)];
      for (std::int64_t s = 0; s < shots; ++s) {
        Rng rng = Rng::substream(
            seed, RngDomain::Adversary,
            setting * static_cast<std::uint64_t>(shots) +
                static_cast<std::uint64_t>(s));
        // The adversary measures the photon the moment it arrives; with
        // the basis leaked ahead of time he always matches, otherwise
        // he guesses uniformly and suppresses mismatched rounds.
        const int guess = leak == LeakMode::Before
                              ? basis
                              : static_cast<int>(rng.next_index(3));
        const bool outcome_plus = rng.next_double() < p_plus[guess];
        if (guess != basis) continue;
        ++cell[outcome_plus ? 0 : 1];
      }
    }
  }
  return record;
}

Channel induced_channel() {
  const std::vector<Basis> bases = {pauli_basis('X'), pauli_basis('Y'),
                                    pauli_basis('Z')};
  const std::vector<double> weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return Channel::intercept_resend(bases, weights);
}

AttackReport run_attack_comparison(LeakMode leak, std::int64_t shots,
                                   std::int64_t rounds, std::uint64_t seed) {
  if (shots < 1) {
    throw ConfigError("shot count must be at least 1");
  }
  if (rounds < 1) {
    throw ConfigError("round count must be at least 1");
  }

  AttackReport report;
  report.leak = leak;

  const TomographyRecord record = run_tomography_against(leak, shots, seed);
  report.apparent_efficiency =
      static_cast<double>(record.recorded_total()) /
      static_cast<double>(12 * shots);
  const CMat chi = reconstruct_chi(record);
  report.reported_fidelity = process_fidelity_to_identity(chi);
  report.reported_fidelity_psd =
      process_fidelity_to_identity(project_chi_psd(chi));

  // The game leg scores the channel the adversary actually implements.
  // His detector control is worthless there: the outcome announcement
  // is untrusted to begin with, and without a quantum memory his whole
  // strategy collapses to measure-and-prepare.
  const Tally tally =
      simulate_rounds(induced_channel(), bsm_povm(0.0), rounds, seed);
  report.mdi_witness = witness_estimate(tally);
  return report;
}

void save_record_json(const std::string& path,
                      const TomographyRecord& record) {
  nlohmann::json counts;
  for (int input = 0; input < 4; ++input) {
    nlohmann::json per_basis;
    for (int basis = 0; basis < 3; ++basis) {
      const auto& c = record.counts[static_cast<std::size_t>(input)]
                                   [static_cast<std::size_t>(basis)];
      per_basis[std::string(1, to_char(static_cast<MeasBasis>(basis)))] = {
          c[0], c[1]};
    }
    counts[std::string(1, to_char(static_cast<StateLabel>(input)))] =
        per_basis;
  }

  nlohmann::json doc;
  doc["format"] = "tomography-record";
  doc["seed"] = record.seed;
  doc["shots"] = record.shots;
  doc["counts"] = counts;

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write tomography record: " + path);
  }
  out << doc.dump(2) << '\n';
}

TomographyRecord load_record_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open tomography record: " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("tomography record " + path + ": " + e.what());
  }

  TomographyRecord record;
  if (!doc.is_object() || !doc.contains("counts") ||
      !doc["counts"].is_object()) {
    throw DataError("tomography record " + path +
                    ": missing counts object");
  }
  if (doc.contains("seed")) {
    record.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("shots")) {
    record.shots = doc["shots"].get<std::int64_t>();
  }
  for (int input = 0; input < 4; ++input) {
    const std::string in_key(1, to_char(static_cast<StateLabel>(input)));
    if (!doc["counts"].contains(in_key)) {
      throw DataError("tomography record " + path + ": missing input " +
                      in_key);
    }
    for (int basis = 0; basis < 3; ++basis) {
      const std::string b_key(1, to_char(static_cast<MeasBasis>(basis)));
      if (!doc["counts"][in_key].contains(b_key)) {
        throw DataError("tomography record " + path + ": missing basis " +
                        b_key + " for input " + in_key);
      }
      const auto& pair = doc["counts"][in_key][b_key];
      if (!pair.is_array() || pair.size() != 2 ||
          !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
        throw DataError("tomography record " + path + ": counts for (" +
                        in_key + ", " + b_key +
                        ") must be a [plus, minus] integer pair");
      }
      auto& cell = record.counts[static_cast<std::size_t>(input)]
                                [static_cast<std::size_t>(basis)];
      cell[0] = pair[0].get<std::int64_t>();
      cell[1] = pair[1].get<std::int64_t>();
      if (cell[0] < 0 || cell[1] < 0) {
        throw DataError("tomography record " + path +
                        ": counts must be nonnegative");
      }
    }
  }
  return record;
}

void save_attack_report_json(const std::string& path,
                             const AttackReport& report) {
  nlohmann::json doc;
  doc["format"] = "attack-report";
  doc["leak"] = to_string(report.leak);
  doc["apparent_efficiency"] = report.apparent_efficiency;
  doc["reported_fidelity"] = report.reported_fidelity;
  doc["reported_fidelity_psd"] = report.reported_fidelity_psd;
  doc["mdi_witness"] = {{"value", report.mdi_witness.value},
                        {"std_error", report.mdi_witness.std_error},
                        {"rounds_used", report.mdi_witness.rounds_used}};
  doc["mdi_channel"] = "intercept[X+Y+Z]";
  doc["note"] =
      "tomography scores only the rounds the adversary chose to answer; "
      "the game scores the measure-and-prepare channel his strategy "
      "implements between the two time slots";

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write attack report: " + path);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace mdiqm
