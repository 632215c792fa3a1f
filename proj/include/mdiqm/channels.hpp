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

#ifndef MDIQM_CHANNELS_HPP
#define MDIQM_CHANNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mdiqm/qcore.hpp"
#include "mdiqm/rng.hpp"

namespace mdiqm {

/// Orthonormal qubit basis used by measure-and-prepare channels.
struct Basis {
  CMat v0;  // 2x1 ket
  CMat v1;  // 2x1 ket, orthogonal to v0
  std::string name;
};

/// Eigenbasis of a Pauli operator, label in {X, Y, Z}.
Basis pauli_basis(char label);

/// Haar-distributed random basis (columns of a random unitary).
Basis random_basis(Rng& rng);

/// The Choi state (N x id)|Phi+><Phi+| of a channel N; a 4x4 density
/// operator whose second subsystem always reduces to 1/2.
using ChoiState = CMat;

// Chi matrices that fail positivity by more than this are rejected;
// smaller violations (linear-inversion noise) are clipped to the
// nearest positive semidefinite matrix.
inline constexpr double kChiPsdRejectTol = 0.05;

// Completeness defect allowed in a chi matrix before from_chi refuses
// it; defects above kEpsHerm but below this switch on per-application
// trace renormalization.
inline constexpr double kChiCompletenessTol = 1e-6;

// A channel is declared entanglement-breaking when the smallest
// eigenvalue of the partially transposed Choi state clears this floor.
inline constexpr double kEbTol = 1e-10;

struct EbReport {
  bool entanglement_breaking;
  double margin;  // min eigenvalue of the partially transposed Choi state
};

/// Single-qubit channel in Kraus form or as a process (chi) matrix over
/// the operator basis (I, X, -iY, Z).  Immutable after construction.
class Channel {
 public:
  enum class Form { Kraus, Chi };

  static Channel identity();

  /// N(rho) = (1-p) rho + p/2, via the Kraus weights
  /// {1-3p/4, p/4, p/4, p/4} on {I, X, Y, Z}.
  static Channel depolarizing(double p);

  /// Validates completeness sum K_i^dag K_i = 1 within kEpsHerm.
  static Channel from_kraus(std::vector<CMat> kraus, std::string name);

  /// Accepts a measured process matrix: Hermitian within kEpsHerm,
  /// positive within kChiPsdRejectTol (small negative eigenvalues are
  /// clipped and the matrix rescaled, flagged via chi_was_projected),
  /// complete within kChiCompletenessTol (triggering trace
  /// renormalization on application when not exact).
  static Channel from_chi(const CMat& chi, std::string name = "chi");

  /// rho -> sum_k w_k sum_i |i_k><i_k| rho |i_k><i_k|.  Weights must sum
  /// to 1; every such channel is entanglement-breaking.
  static Channel intercept_resend(const std::vector<Basis>& bases,
                                  const std::vector<double>& weights);

  /// Applies the channel to a qubit density operator.
  CMat apply(const CMat& rho) const;

  /// Applies (N x id) to a two-qubit operator; subsystem 1 is the qubit
  /// the channel acts on.
  CMat apply_to_first(const CMat& rho) const;

  ChoiState choi() const;

  /// Process matrix over (I, X, -iY, Z); extracted from the Kraus set
  /// when the channel was built in Kraus form.
  CMat chi_matrix() const;

  Form form() const { return form_; }
  const std::string& name() const { return name_; }
  const std::vector<CMat>& kraus() const { return kraus_; }
  bool chi_was_projected() const { return chi_projected_; }

 private:
  Channel() = default;

  Form form_ = Form::Kraus;
  std::string name_;
  std::vector<CMat> kraus_;
  CMat chi_;
  bool chi_projected_ = false;
  bool renormalize_ = false;
};

/// PPT test on the Choi state; exact for qubit channels.
EbReport is_entanglement_breaking(const Channel& n);

/// Chi-matrix file: the process matrix plus optional acquisition
/// metadata.  Serialized as JSON with the basis spelled out and each
/// entry written as an [re, im] pair.
struct ChiFile {
  CMat chi;
  std::string name;
  std::optional<double> storage_time_us;
};

ChiFile load_chi_file(const std::string& path);
void save_chi_file(const std::string& path, const CMat& chi,
                   const std::string& name,
                   std::optional<double> storage_time_us);

}  // namespace mdiqm

#endif  // MDIQM_CHANNELS_HPP
