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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdiqm/bsm.hpp"
#include "mdiqm/channels.hpp"
#include "mdiqm/config.hpp"
#include "mdiqm/errors.hpp"
#include "mdiqm/game.hpp"
#include "mdiqm/predict.hpp"
#include "mdiqm/qcore.hpp"
#include "mdiqm/tomography.hpp"

namespace py = pybind11;

namespace {

using namespace mdiqm;

// Matrices cross the boundary as nested lists of complex numbers; the
// operators here are at most 4x4, so no array machinery is warranted.
using PyMat = std::vector<std::vector<std::complex<double>>>;

CMat to_cmat(const PyMat& rows) {
  const auto n_rows = static_cast<int>(rows.size());
  if (n_rows == 0) throw ConfigError("matrix must not be empty");
  const auto n_cols = static_cast<int>(rows[0].size());
  CMat m(n_rows, n_cols);
  for (int r = 0; r < n_rows; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n_cols) {
      throw ConfigError("matrix rows must all have the same length");
    }
    for (int c = 0; c < n_cols; ++c) {
      m.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

PyMat from_cmat(const CMat& m) {
  PyMat rows(static_cast<std::size_t>(m.rows()));
  for (int r = 0; r < m.rows(); ++r) {
    auto& row = rows[static_cast<std::size_t>(r)];
    row.resize(static_cast<std::size_t>(m.cols()));
    for (int c = 0; c < m.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = m.at(r, c);
    }
  }
  return rows;
}

StateLabel state_arg(const std::string& s) {
  if (s.size() != 1) {
    throw ConfigError("state label must be one of H, V, D, R");
  }
  return state_label_from_char(s[0]);
}

Outcome outcome_arg(const std::string& s) {
  if (s.size() != 1) {
    throw ConfigError("outcome label must be one of +, -, 0");
  }
  return outcome_from_char(s[0]);
}

ErrorMethod error_method_arg(const std::string& s) {
  if (s == "delta") return ErrorMethod::Delta;
  if (s == "bootstrap") return ErrorMethod::Bootstrap;
  throw ConfigError("unknown error method '" + s +
                    "' (expected delta or bootstrap)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Single-qubit memory certification: channels, the signaling game, "
      "witness estimation, prediction curves, and process tomography";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<Channel>(m, "Channel")
      .def_static("identity", &Channel::identity)
      .def_static("depolarizing", &Channel::depolarizing, py::arg("p"))
      .def_static(
          "from_chi",
          [](const PyMat& chi, const std::string& name) {
            return Channel::from_chi(to_cmat(chi), name);
          },
          py::arg("chi"), py::arg("name") = "chi")
      .def_static(
          "intercept_resend",
          [](const std::string& bases) {
            std::vector<Basis> parsed;
            for (char c : bases) parsed.push_back(pauli_basis(c));
            if (parsed.empty()) {
              throw ConfigError("intercept_resend needs at least one basis");
            }
            const std::vector<double> weights(
                parsed.size(), 1.0 / static_cast<double>(parsed.size()));
            return Channel::intercept_resend(parsed, weights);
          },
          py::arg("bases"),
          "Equal-weight measure-and-prepare channel over Pauli bases "
          "given as a string such as 'XYZ'")
      .def("apply",
           [](const Channel& ch, const PyMat& rho) {
             return from_cmat(ch.apply(to_cmat(rho)));
           })
      .def("choi", [](const Channel& ch) { return from_cmat(ch.choi()); })
      .def("chi_matrix",
           [](const Channel& ch) { return from_cmat(ch.chi_matrix()); })
      .def_property_readonly("name", &Channel::name)
      .def_property_readonly("chi_was_projected", &Channel::chi_was_projected);

  m.def(
      "is_entanglement_breaking",
      [](const Channel& ch) {
        const EbReport report = is_entanglement_breaking(ch);
        return py::make_tuple(report.entanglement_breaking, report.margin);
      },
      py::arg("channel"),
      "Returns (is_breaking, margin); margin is the smallest eigenvalue "
      "of the partially transposed Choi state");

  py::class_<BsmModel>(m, "BsmModel")
      .def_property_readonly("lambda_",
                             [](const BsmModel& b) { return b.lambda; })
      .def("element", [](const BsmModel& b, const std::string& outcome) {
        return from_cmat(b.element(outcome_arg(outcome)));
      });

  m.def("bsm_povm", &bsm_povm, py::arg("lambda_"));
  m.def("lambda_from_visibility", &lambda_from_visibility, py::arg("v"));
  m.def("visibility_from_overlap", &visibility_from_overlap, py::arg("alpha"));
  m.def(
      "payoff",
      [](const std::string& b, const std::string& x, const std::string& y) {
        return payoff(outcome_arg(b), state_arg(x), state_arg(y));
      },
      py::arg("b"), py::arg("x"), py::arg("y"));

  m.def(
      "prepared_state",
      [](const std::string& x) { return from_cmat(prepared_state(state_arg(x))); },
      py::arg("x"));

  m.def(
      "outcome_distribution",
      [](const Channel& ch, const BsmModel& bsm, const std::string& x,
         const std::string& y) {
        const auto d = outcome_distribution(ch, bsm, state_arg(x), state_arg(y));
        return py::make_tuple(d[0], d[1], d[2]);
      },
      py::arg("channel"), py::arg("bsm"), py::arg("x"), py::arg("y"),
      "(P+, P-, P0) for one challenge pair");

  m.def("exact_witness", &exact_witness, py::arg("channel"), py::arg("bsm"));

  py::class_<Tally>(m, "Tally")
      .def_readonly("seed", &Tally::seed)
      .def_readonly("rounds_attempted", &Tally::rounds_attempted)
      .def("count",
           [](const Tally& t, const std::string& x, const std::string& y,
              const std::string& b) {
             return t.at(state_arg(x), state_arg(y), outcome_arg(b));
           })
      .def("detected_total", &Tally::detected_total);

  m.def(
      "simulate_rounds",
      [](const Channel& ch, const BsmModel& bsm, std::int64_t rounds,
         std::uint64_t seed, double detection_efficiency, int workers) {
        SimulateOptions options;
        options.detection_efficiency = detection_efficiency;
        options.workers = workers;
        return simulate_rounds(ch, bsm, rounds, seed, options);
      },
      py::arg("channel"), py::arg("bsm"), py::arg("rounds"), py::arg("seed"),
      py::arg("detection_efficiency") = 1.0, py::arg("workers") = 1);

  py::class_<WitnessResult>(m, "WitnessResult")
      .def_readonly("value", &WitnessResult::value)
      .def_readonly("std_error", &WitnessResult::std_error)
      .def_readonly("rounds_used", &WitnessResult::rounds_used);

  m.def(
      "witness_estimate",
      [](const Tally& tally, const std::string& method, int resamples) {
        EstimateOptions options;
        options.method = error_method_arg(method);
        options.bootstrap_resamples = resamples;
        return witness_estimate(tally, options);
      },
      py::arg("tally"), py::arg("method") = "delta",
      py::arg("bootstrap_resamples") = 1000);

  py::class_<MemoryParams>(m, "MemoryParams")
      .def(py::init<>())
      .def_readwrite("p_ph", &MemoryParams::p_ph)
      .def_readwrite("eta_opt", &MemoryParams::eta_opt)
      .def_readwrite("eta_det", &MemoryParams::eta_det)
      .def_readwrite("eta_m0", &MemoryParams::eta_m0)
      .def_readwrite("tau_m", &MemoryParams::tau_m)
      .def_readwrite("p_noise", &MemoryParams::p_noise)
      .def_readwrite("visibility", &MemoryParams::visibility);

  m.def("default_memory_params", &default_memory_params);
  m.def("storage_efficiency", &storage_efficiency, py::arg("t_us"),
        py::arg("eta0"), py::arg("tau_us"));
  m.def(
      "noise_strength",
      [](double t_us, const MemoryParams& params, const std::string& combine) {
        return noise_strength(t_us, params, mode_combine_from_string(combine));
      },
      py::arg("t_us"), py::arg("params"), py::arg("combine") = "mean");

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("t_us", &CurvePoint::t_us)
      .def_readonly("witness", &CurvePoint::witness)
      .def_readonly("lambda_", &CurvePoint::lambda)
      .def_readonly("p", &CurvePoint::p);

  m.def(
      "theory_curve",
      [](const MemoryParams& params, const std::vector<double>& times_us,
         bool include_bsm_noise, const std::string& combine,
         const std::optional<double>& lambda_override) {
        TheoryOptions options;
        options.include_bsm_noise = include_bsm_noise;
        options.combine = mode_combine_from_string(combine);
        options.lambda_override = lambda_override;
        return theory_curve(params, times_us, options);
      },
      py::arg("params"), py::arg("times_us"),
      py::arg("include_bsm_noise") = false, py::arg("combine") = "mean",
      py::arg("lambda_override") = py::none());

  py::class_<TomographyRecord>(m, "TomographyRecord")
      .def_readonly("seed", &TomographyRecord::seed)
      .def_readonly("shots", &TomographyRecord::shots)
      .def("recorded_total", &TomographyRecord::recorded_total);

  m.def("run_tomography", &run_tomography, py::arg("channel"),
        py::arg("shots"), py::arg("seed"));
  m.def(
      "reconstruct_chi",
      [](const TomographyRecord& record) {
        return from_cmat(reconstruct_chi(record));
      },
      py::arg("record"));
  m.def(
      "process_fidelity_to_identity",
      [](const PyMat& chi) { return process_fidelity_to_identity(to_cmat(chi)); },
      py::arg("chi"));

  py::class_<AttackReport>(m, "AttackReport")
      .def_property_readonly(
          "leak", [](const AttackReport& r) { return to_string(r.leak); })
      .def_readonly("apparent_efficiency", &AttackReport::apparent_efficiency)
      .def_readonly("reported_fidelity", &AttackReport::reported_fidelity)
      .def_readonly("reported_fidelity_psd",
                    &AttackReport::reported_fidelity_psd)
      .def_readonly("mdi_witness", &AttackReport::mdi_witness);

  m.def(
      "run_attack_comparison",
      [](const std::string& leak, std::int64_t shots, std::int64_t rounds,
         std::uint64_t seed) {
        return run_attack_comparison(leak_mode_from_string(leak), shots,
                                     rounds, seed);
      },
      py::arg("leak"), py::arg("shots"), py::arg("rounds"), py::arg("seed"));
}
