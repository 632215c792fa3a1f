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

#ifndef MDIQM_QCORE_HPP
#define MDIQM_QCORE_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mdiqm {

using cplx = std::complex<double>;

// Centralized numerical tolerances. Property tests reference these as the one
// source of truth; do not introduce ad-hoc epsilons elsewhere.
inline constexpr double kEpsHerm = 1e-10;     // Hermiticity checks and eigendecomposition residuals
inline constexpr double kEpsEig = 1e-13;      // Jacobi off-diagonal convergence target
inline constexpr double kEpsPsd = 1e-10;      // eigenvalue floor for positivity decisions
inline constexpr double kEpsDensity = 1e-12;  // trace/Hermiticity tolerance for density operators

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Dense complex matrix for the small operators this library works with.
// Dimensions are restricted to at most 4x4 (2x2 and 4x4 operators, 2- and
// 4-component kets); storage is a fixed inline array, so values are cheap to
// copy and never allocate.
//
// Conventions, used everywhere: qubit basis ordered (H, V); two-qubit basis
// ordered (HH, HV, VH, VV); qubit 1 (the first tensor factor) is the photon
// that traverses the memory.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(int rows, int cols);

  static CMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  CMat adjoint() const;
  cplx trace() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cplx s);

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(const CMat& a, const CMat& b);

 private:
  int rows_, cols_;
  std::array<cplx, 16> a_{};
};

double max_abs_diff(const CMat& a, const CMat& b);

// Kronecker product of two single-qubit operators; the first factor is the
// stored (through-memory) photon.
CMat tensor_product(const CMat& a, const CMat& b);

// Transpose of the chosen subsystem (1 or 2) of a two-qubit operator.
CMat partial_transpose(const CMat& rho, int subsystem);

// Trace out the chosen subsystem (1 or 2) of a two-qubit operator.
CMat partial_trace(const CMat& rho, int subsystem);

struct EigResult {
  std::vector<double> values;  // ascending
  CMat vectors;                // column k is the eigenvector of values[k]
};

// Eigendecomposition of a Hermitian 2x2 or 4x4 matrix by cyclic Jacobi
// rotations. Input must be Hermitian within kEpsHerm; the reconstruction
// V diag(values) V^dagger matches the input within kEpsHerm.
EigResult hermitian_eig(const CMat& hm);
std::vector<double> hermitian_eigenvalues(const CMat& hm);

// |rho| as a density operator: Hermitian, unit trace, positive semidefinite
// within the kEpsDensity / kEpsPsd tolerances.
bool is_density_operator(const CMat& rho);

// Nearest positive semidefinite matrix obtained by clipping negative
// eigenvalues, rescaled back to the input's trace. Input must be Hermitian
// with positive trace and at least some positive spectral weight.
CMat clip_to_psd(const CMat& hm);

// Challenge-state vocabulary. D = (H+V)/sqrt(2), R = (H+iV)/sqrt(2).
enum class StateLabel { H, V, D, R };
inline constexpr std::array<StateLabel, 4> kStateLabels = {StateLabel::H, StateLabel::V,
                                                           StateLabel::D, StateLabel::R};

char to_char(StateLabel x);
StateLabel state_label_from_char(char c);

CMat ket(StateLabel x);             // 2x1 column vector
CMat prepared_state(StateLabel x);  // |x><x|

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

CMat bell_ket(BellLabel b);    // 4x1 column vector
CMat bell_state(BellLabel b);  // rank-1 projector

CMat pauli_x();
CMat pauli_y();
CMat pauli_z();

// Fixed process-matrix operator basis: E0 = I, E1 = sigma_x, E2 = -i sigma_y,
// E3 = sigma_z. All chi matrices in this library are expansions over it.
CMat chi_basis_op(int m);

}  // namespace mdiqm

#endif  // MDIQM_QCORE_HPP
