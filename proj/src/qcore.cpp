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

#include "mdiqm/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdiqm {

namespace {

void check_dims(int rows, int cols) {
  const bool ok = (rows == 2 && cols == 2) || (rows == 4 && cols == 4) ||
                  (rows == 2 && cols == 1) || (rows == 4 && cols == 1) ||
                  (rows == 1 && cols == 2) || (rows == 1 && cols == 4) ||
                  (rows == 1 && cols == 1);
  if (!ok) {
    throw std::invalid_argument("CMat: unsupported dimensions " + std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

}  // namespace

CMat::CMat(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
}

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat CMat::adjoint() const {
  CMat out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

cplx CMat::trace() const {
  if (rows_ != cols_) throw std::invalid_argument("trace: matrix is not square");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

double CMat::max_abs() const {
  double m = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) m = std::max(m, std::abs(at(r, c)));
  return m;
}

bool CMat::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (int r = 0; r < rows_; ++r)
    for (int c = r; c < cols_; ++c)
      if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
  return true;
}

CMat& CMat::operator+=(const CMat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMat: shape mismatch in +");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMat: shape mismatch in -");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat& CMat::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

CMat operator*(const CMat& a, const CMat& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("CMat: shape mismatch in *");
  CMat out(a.rows_, b.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int k = 0; k < a.cols_; ++k) {
      const cplx ark = a.at(r, k);
      if (ark == cplx{}) continue;
      for (int c = 0; c < b.cols_; ++c) out.at(r, c) += ark * b.at(k, c);
    }
  return out;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a.at(r, c) - b.at(r, c)));
  return m;
}

CMat tensor_product(const CMat& a, const CMat& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
    throw std::invalid_argument("tensor_product: both factors must be 2x2");
  CMat out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out.at(2 * i + k, 2 * j + l) = a.at(i, j) * b.at(k, l);
  return out;
}

CMat partial_transpose(const CMat& rho, int subsystem) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("partial_transpose: operator must be 4x4");
  if (subsystem != 1 && subsystem != 2)
    throw std::invalid_argument("partial_transpose: subsystem must be 1 or 2");
  CMat out(4, 4);
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2) {
          if (subsystem == 1)
            out.at(2 * i1 + i2, 2 * j1 + j2) = rho.at(2 * j1 + i2, 2 * i1 + j2);
          else
            out.at(2 * i1 + i2, 2 * j1 + j2) = rho.at(2 * i1 + j2, 2 * j1 + i2);
        }
  return out;
}

CMat partial_trace(const CMat& rho, int subsystem) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("partial_trace: operator must be 4x4");
  if (subsystem != 1 && subsystem != 2)
    throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
  CMat out(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (subsystem == 1)
          out.at(i, j) += rho.at(2 * k + i, 2 * k + j);
        else
          out.at(i, j) += rho.at(2 * i + k, 2 * j + k);
      }
  return out;
}

// Cyclic Jacobi for complex Hermitian matrices. Each rotation annihilates one
// off-diagonal element with a complex Givens rotation whose phase absorbs
// arg(h_pq); sweeps repeat until the off-diagonal norm drops below kEpsEig.
EigResult hermitian_eig(const CMat& hm) {
  if (hm.rows() != hm.cols() || (hm.rows() != 2 && hm.rows() != 4))
    throw std::invalid_argument("hermitian_eig: matrix must be 2x2 or 4x4");
  if (!hm.is_hermitian(kEpsHerm))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");

  const int n = hm.rows();
  CMat h = hm;
  // Exact symmetrization so rounding in the input cannot accumulate.
  for (int r = 0; r < n; ++r) {
    h.at(r, r) = cplx(h.at(r, r).real(), 0.0);
    for (int c = r + 1; c < n; ++c) {
      const cplx m = 0.5 * (h.at(r, c) + std::conj(h.at(c, r)));
      h.at(r, c) = m;
      h.at(c, r) = std::conj(m);
    }
  }
  CMat v = CMat::identity(n);

  const auto off_norm = [&]() {
    double s = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) s += std::norm(h.at(r, c));
    return std::sqrt(2.0 * s);
  };

  for (int sweep = 0; sweep < 64 && off_norm() > kEpsEig; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx hpq = h.at(p, q);
        const double apq = std::abs(hpq);
        if (apq <= kEpsEig * 1e-3) continue;
        const cplx phase = hpq / apq;
        const double app = h.at(p, p).real();
        const double aqq = h.at(q, q).real();
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const cplx s = t * c * phase;

        // h <- G^dagger h G with G = [[c, s], [-conj(s), c]] on rows/cols (p, q).
        for (int k = 0; k < n; ++k) {
          const cplx hkp = h.at(k, p);
          const cplx hkq = h.at(k, q);
          h.at(k, p) = c * hkp - std::conj(s) * hkq;
          h.at(k, q) = s * hkp + c * hkq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx hpk = h.at(p, k);
          const cplx hqk = h.at(q, k);
          h.at(p, k) = c * hpk - s * hqk;
          h.at(q, k) = std::conj(s) * hpk + c * hqk;
        }
        h.at(p, q) = 0.0;
        h.at(q, p) = 0.0;
        h.at(p, p) = cplx(h.at(p, p).real(), 0.0);
        h.at(q, q) = cplx(h.at(q, q).real(), 0.0);
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v.at(k, p);
          const cplx vkq = v.at(k, q);
          v.at(k, p) = c * vkp - std::conj(s) * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  EigResult res;
  res.values.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return h.at(a, a).real() < h.at(b, b).real(); });
  res.vectors = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = h.at(order[k], order[k]).real();
    for (int r = 0; r < n; ++r) res.vectors.at(r, k) = v.at(r, order[k]);
  }
  return res;
}

std::vector<double> hermitian_eigenvalues(const CMat& hm) {
  return hermitian_eig(hm).values;
}

bool is_density_operator(const CMat& rho) {
  if (rho.rows() != rho.cols()) return false;
  if (!rho.is_hermitian(kEpsDensity)) return false;
  if (std::abs(rho.trace() - cplx(1.0)) > kEpsDensity) return false;
  const auto eigs = hermitian_eigenvalues(rho);
  return eigs.front() >= -kEpsPsd;
}

CMat clip_to_psd(const CMat& hm) {
  const double trace_before = hm.trace().real();
  if (trace_before <= 0.0)
    throw std::invalid_argument("clip_to_psd: matrix trace must be positive");
  const EigResult eig = hermitian_eig(hm);

  const int n = hm.rows();
  CMat out(n, n);
  double kept = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = eig.values[static_cast<size_t>(k)];
    if (v <= 0.0) continue;
    kept += v;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out.at(r, c) += v * eig.vectors.at(r, k) * std::conj(eig.vectors.at(c, k));
  }
  if (kept <= 0.0)
    throw std::invalid_argument("clip_to_psd: no positive spectral weight");
  out *= cplx(trace_before / kept, 0.0);
  return out;
}

char to_char(StateLabel x) {
  switch (x) {
    case StateLabel::H: return 'H';
    case StateLabel::V: return 'V';
    case StateLabel::D: return 'D';
    case StateLabel::R: return 'R';
  }
  throw std::invalid_argument("unknown state label");
}

StateLabel state_label_from_char(char c) {
  switch (c) {
    case 'H': return StateLabel::H;
    case 'V': return StateLabel::V;
    case 'D': return StateLabel::D;
    case 'R': return StateLabel::R;
    default: throw std::invalid_argument(std::string("unknown state label '") + c + "'");
  }
}

CMat ket(StateLabel x) {
  CMat v(2, 1);
  switch (x) {
    case StateLabel::H:
      v.at(0, 0) = 1.0;
      break;
    case StateLabel::V:
      v.at(1, 0) = 1.0;
      break;
    case StateLabel::D:
      v.at(0, 0) = kInvSqrt2;
      v.at(1, 0) = kInvSqrt2;
      break;
    case StateLabel::R:
      v.at(0, 0) = kInvSqrt2;
      v.at(1, 0) = cplx(0.0, kInvSqrt2);
      break;
  }
  return v;
}

CMat prepared_state(StateLabel x) {
  const CMat v = ket(x);
  return v * v.adjoint();
}

CMat bell_ket(BellLabel b) {
  CMat v(4, 1);
  switch (b) {
    case BellLabel::PhiPlus:
      v.at(0, 0) = kInvSqrt2;
      v.at(3, 0) = kInvSqrt2;
      break;
    case BellLabel::PhiMinus:
      v.at(0, 0) = kInvSqrt2;
      v.at(3, 0) = -kInvSqrt2;
      break;
    case BellLabel::PsiPlus:
      v.at(1, 0) = kInvSqrt2;
      v.at(2, 0) = kInvSqrt2;
      break;
    case BellLabel::PsiMinus:
      v.at(1, 0) = kInvSqrt2;
      v.at(2, 0) = -kInvSqrt2;
      break;
  }
  return v;
}

CMat bell_state(BellLabel b) {
  const CMat v = bell_ket(b);
  return v * v.adjoint();
}

CMat pauli_x() {
  CMat m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return m;
}

CMat pauli_y() {
  CMat m(2, 2);
  m.at(0, 1) = cplx(0.0, -1.0);
  m.at(1, 0) = cplx(0.0, 1.0);
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = -1.0;
  return m;
}

CMat chi_basis_op(int m) {
  switch (m) {
    case 0: return CMat::identity(2);
    case 1: return pauli_x();
    case 2: return cplx(0.0, -1.0) * pauli_y();
    case 3: return pauli_z();
    default: throw std::invalid_argument("chi_basis_op: index must be 0..3");
  }
}

}  // namespace mdiqm
