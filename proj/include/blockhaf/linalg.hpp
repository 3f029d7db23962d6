// Copyright 2026 The blockhaf Authors
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

#pragma once

#include <algorithm>
#include <cmath>

#include "blockhaf/error.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

inline constexpr double kStructureTol = 1e-10;
inline constexpr double kValueTol = 1e-9;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto& x = m(i, j);
      if (!std::isfinite(std::real(x)) || !std::isfinite(std::imag(x))) return false;
    }
  }
  return true;
}

// Largest entrywise |m - m^dagger|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Largest entrywise |m - m^T|.
template <typename Derived>
double symmetric_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  require(all_finite(m), ErrorCode::kNonFinite, std::string(what) + " has NaN or Inf entries");
}

// X m, i.e. m with the two row halves exchanged.
template <typename Derived>
Matrix<typename Derived::Scalar> swap_row_halves(const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index h = m.rows() / 2;
  Matrix<typename Derived::Scalar> out(m.rows(), m.cols());
  out.topRows(h) = m.bottomRows(h);
  out.bottomRows(h) = m.topRows(h);
  return out;
}

// X = [[0, I], [I, 0]] of size 2n.
CMatrix x_matrix(Eigen::Index n);

struct HermitianEig {
  RVector values;  // ascending
  CMatrix vectors;
};

HermitianEig hermitian_eig(const CMatrix& m, double tol = kStructureTol);

CMatrix hermitian_power(const CMatrix& m, double p, double tol = kStructureTol);

struct TakagiResult {
  CMatrix factors;  // F, unitary
  RVector values;   // sigma, descending
};

// s = F diag(sigma) F^T for complex symmetric s.
TakagiResult takagi(const CMatrix& s, double tol = kStructureTol);

// Entry k-1 holds tr(m^k), by repeated multiplication of a running power.
template <typename Derived>
Vector<typename Derived::Scalar> power_traces(const Eigen::MatrixBase<Derived>& m, int kmax) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> out(std::max(kmax, 0));
  if (kmax <= 0) return out;
  Matrix<Scalar> base = m;
  Matrix<Scalar> running = base;
  out(0) = running.trace();
  for (int k = 2; k <= kmax; ++k) {
    running = (running * base).eval();
    out(k - 1) = running.trace();
  }
  require(all_finite(out), ErrorCode::kNonFinite, "power trace overflow");
  return out;
}

// Smallest singular value bound check: all singular values <= 1 + tol.
bool is_subunitary(const CMatrix& t, double tol = kStructureTol);

}  // namespace blockhaf
