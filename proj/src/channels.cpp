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

#include "mdiqm/channels.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "mdiqm/errors.hpp"
#include "textutil.hpp"

namespace mdiqm {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void check_qubit_state(const CMat& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw ConfigError("channel input must be a 2x2 operator");
  }
}

void check_pair_state(const CMat& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw ConfigError("two-qubit channel input must be a 4x4 operator");
  }
}

CMat outer(const CMat& ket) { return ket * ket.adjoint(); }

// Completeness operator sum_mn chi_mn E_n^dag E_m; equals 1 exactly
// for a trace-preserving process.
CMat completeness_operator(const CMat& chi) {
  CMat c(2, 2);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const cplx w = chi.at(m, n);
      if (std::abs(w) == 0.0) continue;
      c += w * (chi_basis_op(n).adjoint() * chi_basis_op(m));
    }
  }
  return c;
}

}  // namespace

Basis pauli_basis(char label) {
  Basis b;
  b.name = std::string(1, label);
  switch (label) {
    case 'Z':
      b.v0 = ket(StateLabel::H);
      b.v1 = ket(StateLabel::V);
      return b;
    case 'X': {
      b.v0 = ket(StateLabel::D);
      CMat a(2, 1);
      a.at(0, 0) = kInvSqrt2;
      a.at(1, 0) = -kInvSqrt2;
      b.v1 = a;
      return b;
    }
    case 'Y': {
      b.v0 = ket(StateLabel::R);
      CMat l(2, 1);
      l.at(0, 0) = kInvSqrt2;
      l.at(1, 0) = cplx(0.0, -kInvSqrt2);
      b.v1 = l;
      return b;
    }
    default:
      throw ConfigError(std::string("unknown measurement basis '") + label +
                        "' (expected X, Y or Z)");
  }
}

Basis random_basis(Rng& rng) {
  // Columns of a Haar-random unitary, up to irrelevant global phases:
  // cos^2(theta) uniform on [0,1], relative phase uniform.
  const double theta = std::acos(std::sqrt(rng.next_double()));
  const double phi = kTwoPi * rng.next_double();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const cplx e = std::polar(1.0, phi);

  Basis b;
  b.name = "haar";
  b.v0 = CMat(2, 1);
  b.v0.at(0, 0) = c;
  b.v0.at(1, 0) = s * e;
  b.v1 = CMat(2, 1);
  b.v1.at(0, 0) = -s * std::conj(e);
  b.v1.at(1, 0) = c;
  return b;
}

Channel Channel::identity() {
  Channel ch;
  ch.form_ = Form::Kraus;
  ch.name_ = "identity";
  ch.kraus_ = {CMat::identity(2)};
  return ch;
}

Channel Channel::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("depolarizing strength must lie in [0, 1], got " +
                      format_double(p));
  }
  Channel ch;
  ch.form_ = Form::Kraus;
  ch.name_ = "depolarizing:" + format_double(p);

  const double w0 = 1.0 - 0.75 * p;
  const double w1 = 0.25 * p;
  if (w0 > 0.0) ch.kraus_.push_back(std::sqrt(w0) * CMat::identity(2));
  if (w1 > 0.0) {
    ch.kraus_.push_back(std::sqrt(w1) * pauli_x());
    ch.kraus_.push_back(std::sqrt(w1) * pauli_y());
    ch.kraus_.push_back(std::sqrt(w1) * pauli_z());
  }
  return ch;
}

Channel Channel::from_kraus(std::vector<CMat> kraus, std::string name) {
  if (kraus.empty()) {
    throw ConfigError("Kraus set must not be empty");
  }
  CMat sum(2, 2);
  for (const CMat& k : kraus) {
    if (k.rows() != 2 || k.cols() != 2) {
      throw ConfigError("Kraus operators must be 2x2");
    }
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, CMat::identity(2)) > kEpsHerm) {
    throw ConfigError("Kraus set is not trace preserving (completeness " +
                      format_double(max_abs_diff(sum, CMat::identity(2))) +
                      ")");
  }
  Channel ch;
  ch.form_ = Form::Kraus;
  ch.name_ = std::move(name);
  ch.kraus_ = std::move(kraus);
  return ch;
}

Channel Channel::from_chi(const CMat& chi, std::string name) {
  if (chi.rows() != 4 || chi.cols() != 4) {
    throw DataError("chi matrix must be 4x4");
  }
  if (!chi.is_hermitian(kEpsHerm)) {
    throw DataError("chi matrix is not Hermitian within tolerance");
  }
  CMat work = chi;
  bool projected = false;

  const double min_eig = hermitian_eigenvalues(work).front();
  if (min_eig < -kChiPsdRejectTol) {
    throw DataError("chi matrix is not positive semidefinite: minimum "
                    "eigenvalue " +
                    format_double(min_eig));
  }
  if (min_eig < -kEpsPsd) {
    // Linear-inversion estimates can dip slightly negative; clip and
    // rescale rather than refuse the file.
    if (work.trace().real() <= 0.0) {
      throw DataError("chi matrix has non-positive trace");
    }
    work = clip_to_psd(work);
    projected = true;
  }

  const double defect =
      max_abs_diff(completeness_operator(work), CMat::identity(2));
  if (defect > kChiCompletenessTol) {
    throw DataError("chi matrix is not trace preserving (completeness "
                    "defect " +
                    format_double(defect) + ")");
  }

  Channel ch;
  ch.form_ = Form::Chi;
  ch.name_ = std::move(name);
  ch.chi_ = work;
  ch.chi_projected_ = projected;
  ch.renormalize_ = projected || defect > kEpsHerm;
  return ch;
}

Channel Channel::intercept_resend(const std::vector<Basis>& bases,
                                  const std::vector<double>& weights) {
  if (bases.empty() || bases.size() != weights.size()) {
    throw ConfigError("intercept-resend needs one weight per basis");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw ConfigError("intercept-resend weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kEpsHerm) {
    throw ConfigError("intercept-resend weights must sum to 1, got " +
                      format_double(total));
  }

  std::vector<CMat> kraus;
  std::string name = "intercept[";
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const Basis& b = bases[k];
    const bool unit0 =
        std::abs((b.v0.adjoint() * b.v0).at(0, 0) - cplx(1.0)) <=
        kEpsHerm;
    const bool unit1 =
        std::abs((b.v1.adjoint() * b.v1).at(0, 0) - cplx(1.0)) <=
        kEpsHerm;
    const bool ortho =
        std::abs((b.v0.adjoint() * b.v1).at(0, 0)) <= kEpsHerm;
    if (!unit0 || !unit1 || !ortho) {
      throw ConfigError("intercept-resend basis '" + b.name +
                        "' is not orthonormal");
    }
    if (weights[k] > 0.0) {
      const double root = std::sqrt(weights[k]);
      kraus.push_back(root * outer(b.v0));
      kraus.push_back(root * outer(b.v1));
    }
    if (k > 0) name += '+';
    name += b.name;
  }
  name += ']';

  Channel ch = from_kraus(std::move(kraus), std::move(name));
  return ch;
}

CMat Channel::apply(const CMat& rho) const {
  check_qubit_state(rho);
  CMat out(2, 2);
  if (form_ == Form::Kraus) {
    for (const CMat& k : kraus_) {
      out += k * rho * k.adjoint();
    }
    return out;
  }
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const cplx w = chi_.at(m, n);
      if (std::abs(w) == 0.0) continue;
      out += w * (chi_basis_op(m) * rho * chi_basis_op(n).adjoint());
    }
  }
  if (renormalize_) {
    const double tr = out.trace().real();
    if (tr <= 0.0) {
      throw DataError("chi application produced a non-positive trace");
    }
    out *= cplx(1.0 / tr, 0.0);
  }
  return out;
}

CMat Channel::apply_to_first(const CMat& rho) const {
  check_pair_state(rho);
  const CMat eye = CMat::identity(2);
  CMat out(4, 4);
  if (form_ == Form::Kraus) {
    for (const CMat& k : kraus_) {
      const CMat big = tensor_product(k, eye);
      out += big * rho * big.adjoint();
    }
    return out;
  }
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const cplx w = chi_.at(m, n);
      if (std::abs(w) == 0.0) continue;
      const CMat em = tensor_product(chi_basis_op(m), eye);
      const CMat en = tensor_product(chi_basis_op(n), eye);
      out += w * (em * rho * en.adjoint());
    }
  }
  if (renormalize_) {
    const double tr = out.trace().real();
    if (tr <= 0.0) {
      throw DataError("chi application produced a non-positive trace");
    }
    out *= cplx(1.0 / tr, 0.0);
  }
  return out;
}

ChoiState Channel::choi() const {
  return apply_to_first(bell_state(BellLabel::PhiPlus));
}

CMat Channel::chi_matrix() const {
  if (form_ == Form::Chi) return chi_;
  // Expand each Kraus operator in the basis: K = sum_m c_m E_m with
  // c_m = Tr[E_m^dag K] / 2, then chi_mn = sum_i c_im conj(c_in).
  CMat chi(4, 4);
  for (const CMat& k : kraus_) {
    cplx c[4];
    for (int m = 0; m < 4; ++m) {
      c[m] = 0.5 * (chi_basis_op(m).adjoint() * k).trace();
    }
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        chi.at(m, n) += c[m] * std::conj(c[n]);
      }
    }
  }
  return chi;
}

EbReport is_entanglement_breaking(const Channel& n) {
  const CMat pt = partial_transpose(n.choi(), 1);
  const std::vector<double> eigs = hermitian_eigenvalues(pt);
  EbReport report;
  report.margin = eigs.front();
  report.entanglement_breaking = report.margin >= -kEbTol;
  return report;
}

ChiFile load_chi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open chi file: " + path);
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("chi file " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw DataError("chi file " + path + ": top level must be an object");
  }

  static const std::vector<std::string> kBasis = {"I", "X", "-iY", "Z"};
  if (!doc.contains("basis") || doc["basis"] != kBasis) {
    throw DataError("chi file " + path +
                    ": basis must be [\"I\",\"X\",\"-iY\",\"Z\"]");
  }
  if (!doc.contains("matrix") || !doc["matrix"].is_array() ||
      doc["matrix"].size() != 4) {
    throw DataError("chi file " + path + ": matrix must be a 4x4 array");
  }

  ChiFile file;
  file.chi = CMat(4, 4);
  for (int r = 0; r < 4; ++r) {
    const auto& row = doc["matrix"][static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) {
      throw DataError("chi file " + path + ": matrix row " +
                      std::to_string(r) + " must have 4 entries");
    }
    for (int c = 0; c < 4; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_array() || cell.size() != 2 ||
          !cell[0].is_number() || !cell[1].is_number()) {
        throw DataError("chi file " + path + ": entry (" +
                        std::to_string(r) + "," + std::to_string(c) +
                        ") must be an [re, im] pair");
      }
      file.chi.at(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
    }
  }

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) {
      throw DataError("chi file " + path + ": name must be a string");
    }
    file.name = doc["name"].get<std::string>();
  }
  if (doc.contains("storage_time_us")) {
    if (!doc["storage_time_us"].is_number()) {
      throw DataError("chi file " + path +
                      ": storage_time_us must be a number");
    }
    file.storage_time_us = doc["storage_time_us"].get<double>();
  }
  return file;
}

void save_chi_file(const std::string& path, const CMat& chi,
                   const std::string& name,
                   std::optional<double> storage_time_us) {
  if (chi.rows() != 4 || chi.cols() != 4) {
    throw ConfigError("chi matrix must be 4x4");
  }
  nlohmann::json doc;
  doc["format"] = "chi-matrix";
  doc["basis"] = {"I", "X", "-iY", "Z"};
  if (!name.empty()) doc["name"] = name;
  if (storage_time_us) doc["storage_time_us"] = *storage_time_us;

  nlohmann::json matrix = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      const cplx v = chi.at(r, c);
      row.push_back({v.real(), v.imag()});
    }
    matrix.push_back(row);
  }
  doc["matrix"] = matrix;

  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write chi file: " + path);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace mdiqm
