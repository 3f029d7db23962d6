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

#include "blockhaf/linalg.hpp"

#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace blockhaf {

CMatrix x_matrix(Eigen::Index n) {
  CMatrix x = CMatrix::Zero(2 * n, 2 * n);
  x.topRightCorner(n, n).setIdentity();
  x.bottomLeftCorner(n, n).setIdentity();
  return x;
}

HermitianEig hermitian_eig(const CMatrix& m, double tol) {
  require_finite(m, "matrix");
  require(m.rows() == m.cols(), ErrorCode::kLengthMismatch, "matrix is not square");
  require(hermitian_defect(m) <= tol, ErrorCode::kNotHermitian, "matrix is not Hermitian");
  CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  require(solver.info() == Eigen::Success, ErrorCode::kNonFinite, "eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix hermitian_power(const CMatrix& m, double p, double tol) {
  HermitianEig eig = hermitian_eig(m, tol);
  const bool integral = std::floor(p) == p && p >= 0;
  RVector lam = eig.values;
  if (!integral) {
    require(lam.size() == 0 || lam.minCoeff() > 1e-12, ErrorCode::kNotPositiveDefinite,
            "fractional or negative power of a matrix that is not positive definite");
  }
  CVector powered(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    powered(i) = integral ? std::pow(lam(i), static_cast<int>(p)) : std::pow(lam(i), p);
  }
  CMatrix out = eig.vectors * powered.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

// Real symmetric embedding H = [[Re s, Im s], [Im s, -Re s]] has eigenpairs
// (sigma, [x; y]) with s conj(f) = sigma f for f = x + i y.
TakagiResult takagi(const CMatrix& s, double tol) {
  require_finite(s, "matrix");
  require(s.rows() == s.cols(), ErrorCode::kLengthMismatch, "matrix is not square");
  require(symmetric_defect(s) <= tol, ErrorCode::kNotSymmetric, "matrix is not symmetric");
  const Eigen::Index n = s.rows();
  TakagiResult out{CMatrix::Identity(n, n), RVector::Zero(n)};
  if (n == 0) return out;
  CMatrix sym = 0.5 * (s + s.transpose());
  RMatrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = sym.real();
  h.topRightCorner(n, n) = sym.imag();
  h.bottomLeftCorner(n, n) = sym.imag();
  h.bottomRightCorner(n, n) = -sym.real();
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(h);
  require(solver.info() == Eigen::Success, ErrorCode::kNonFinite, "eigensolver failed");
  const RVector& lam = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(lam(2 * n - 1)));
  const double cut = 1e-11 * scale;

  Eigen::Index kept = 0;
  for (Eigen::Index i = 2 * n - 1; i >= n && lam(i) > cut; --i) {
    RVector v = solver.eigenvectors().col(i);
    out.factors.col(kept) = v.head(n).cast<Complex>() + Complex(0, 1) * v.tail(n).cast<Complex>();
    out.values(kept) = lam(i);
    ++kept;
  }
  if (kept < n) {
    // Complete the null space with an orthonormal complement of the range.
    CMatrix basis(n, kept + n);
    basis.leftCols(kept) = out.factors.leftCols(kept);
    basis.rightCols(n) = CMatrix::Identity(n, n);
    Eigen::HouseholderQR<CMatrix> qr(basis);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    out.factors.rightCols(n - kept) = q.rightCols(n - kept);
  }
  return out;
}

bool is_subunitary(const CMatrix& t, double tol) {
  if (t.size() == 0) return true;
  Eigen::JacobiSVD<CMatrix> svd(t);
  return svd.singularValues()(0) <= 1.0 + tol;
}

}  // namespace blockhaf
