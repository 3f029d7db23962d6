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

#include "blockhaf/gaussian.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "blockhaf/error.hpp"
#include "blockhaf/linalg.hpp"
#include "blockhaf/rng.hpp"

namespace blockhaf {

namespace {

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void check_layout(const ModeLayout& layout, std::size_t modes) {
  require(layout.total() == modes, ErrorCode::kLayoutMismatch,
          "layout describes " + std::to_string(layout.total()) + " modes, state has " +
              std::to_string(modes));
}

}  // namespace

void GaussianState::validate(double tol) const {
  const Eigen::Index n2 = husimi_cov.rows();
  require(husimi_cov.cols() == n2 && means.size() == n2 && n2 % 2 == 0, ErrorCode::kLengthMismatch,
          "covariance and means sizes disagree");
  require_finite(husimi_cov, "covariance");
  require_finite(means, "means");
  check_layout(layout, n2 / 2);
  const double scale = husimi_cov.size() ? scale_of(husimi_cov) : 1.0;
  require(hermitian_defect(husimi_cov) <= tol * scale, ErrorCode::kNotHermitian,
          "covariance is not Hermitian");
  if (n2 == 0) return;
  Eigen::SelfAdjointEigenSolver<CMatrix> cov_eig(0.5 * (husimi_cov + husimi_cov.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  require(cov_eig.eigenvalues()(0) > 0, ErrorCode::kNotPositiveDefinite,
          "covariance is not positive definite");
  CMatrix shifted = husimi_cov;
  shifted.bottomRightCorner(n2 / 2, n2 / 2).diagonal().array() -= 1.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> unc_eig(0.5 * (shifted + shifted.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  require(unc_eig.eigenvalues()(0) >= -1e-9 * scale, ErrorCode::kNotPositiveDefinite,
          "covariance violates the uncertainty relation");
  const double mean_defect =
      (means.tail(n2 / 2) - means.head(n2 / 2).conjugate()).cwiseAbs().maxCoeff();
  require(mean_defect <= tol * std::max(1.0, means.cwiseAbs().maxCoeff()), ErrorCode::kNotHermitian,
          "second half of the means is not the conjugate of the first");
}

GaussianState vacuum_state(ModeLayout layout) {
  const Eigen::Index n = static_cast<Eigen::Index>(layout.total());
  return {CMatrix::Identity(2 * n, 2 * n), CVector::Zero(2 * n), layout};
}

GaussianState from_squeezing(const std::vector<Complex>& xi, ModeLayout layout) {
  check_layout(layout, xi.size());
  for (const Complex& x : xi) {
    require(std::isfinite(x.real()) && std::isfinite(x.imag()), ErrorCode::kNonFinite,
            "squeezing parameter");
  }
  GaussianState state = vacuum_state(layout);
  const Eigen::Index n = static_cast<Eigen::Index>(xi.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = std::abs(xi[k]);
    const Complex phase = r > 0 ? xi[k] / r : Complex(1.0);
    const double sh = std::sinh(r);
    state.husimi_cov(k, k) = 1.0 + sh * sh;
    state.husimi_cov(k + n, k + n) = 1.0 + sh * sh;
    state.husimi_cov(k, k + n) = phase * sh * std::cosh(r);
    state.husimi_cov(k + n, k) = std::conj(phase) * sh * std::cosh(r);
  }
  return state;
}

GaussianState from_symmetric_squeezing(const CMatrix& j, ModeLayout layout) {
  check_layout(layout, static_cast<std::size_t>(j.rows()));
  TakagiResult tk = takagi(j);
  const Eigen::Index n = j.rows();
  RVector sh2(n), shch(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sh2(i) = std::pow(std::sinh(tk.values(i)), 2);
    shch(i) = std::sinh(tk.values(i)) * std::cosh(tk.values(i));
  }
  const CMatrix& f = tk.factors;
  CMatrix n_block = f * sh2.cast<Complex>().asDiagonal() * f.adjoint();
  CMatrix m_block = f * shch.cast<Complex>().asDiagonal() * f.transpose();
  GaussianState state = vacuum_state(layout);
  state.husimi_cov.topLeftCorner(n, n) += n_block;
  state.husimi_cov.bottomRightCorner(n, n) += n_block.conjugate();
  state.husimi_cov.topRightCorner(n, n) = m_block;
  state.husimi_cov.bottomLeftCorner(n, n) = m_block.conjugate();
  return state;
}

GaussianState from_covariance(CMatrix husimi_cov, CVector means, ModeLayout layout) {
  GaussianState state{std::move(husimi_cov), std::move(means), layout};
  state.validate();
  return state;
}

GaussianState thermal_state(const std::vector<double>& nbar, ModeLayout layout) {
  check_layout(layout, nbar.size());
  GaussianState state = vacuum_state(layout);
  const Eigen::Index n = static_cast<Eigen::Index>(nbar.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    require(nbar[k] >= 0 && std::isfinite(nbar[k]), ErrorCode::kDomainError,
            "thermal occupation must be finite and non-negative");
    state.husimi_cov(k, k) += nbar[k];
    state.husimi_cov(k + n, k + n) += nbar[k];
  }
  return state;
}

GaussianState displace(const GaussianState& state, const std::vector<Complex>& alphas) {
  const std::size_t n = state.modes();
  require(alphas.size() == n, ErrorCode::kLengthMismatch, "one displacement per mode required");
  GaussianState out = state;
  for (std::size_t k = 0; k < n; ++k) {
    require(std::isfinite(alphas[k].real()) && std::isfinite(alphas[k].imag()),
            ErrorCode::kNonFinite, "displacement");
    out.means(k) += alphas[k];
    out.means(k + n) += std::conj(alphas[k]);
  }
  return out;
}

GaussianState apply_channel(const GaussianState& state, const CMatrix& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(state.modes());
  require(t.rows() == n && t.cols() == n, ErrorCode::kLengthMismatch,
          "channel matrix must be square over all modes");
  require_finite(t, "channel matrix");
  require(is_subunitary(t), ErrorCode::kNotSubunitary, "channel matrix has singular value > 1");
  CMatrix w = CMatrix::Zero(2 * n, 2 * n);
  w.topLeftCorner(n, n) = t.conjugate();
  w.bottomRightCorner(n, n) = t;
  GaussianState out = state;
  CMatrix cov = w * state.husimi_cov * w.adjoint() + CMatrix::Identity(2 * n, 2 * n) - w * w.adjoint();
  out.husimi_cov = 0.5 * (cov + cov.adjoint());
  out.means = w * state.means;
  return out;
}

CMatrix expand_channel(const CMatrix& t, std::size_t internals) {
  const Eigen::Index m = t.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(internals);
  require(t.cols() == m, ErrorCode::kLengthMismatch, "channel matrix must be square");
  CMatrix out = CMatrix::Zero(m * k, m * k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index l = 0; l < k; ++l) out(i * k + l, j * k + l) = t(i, j);
    }
  }
  return out;
}

GaussianState tensor_product(const GaussianState& x, const GaussianState& y) {
  require(x.layout.internals == y.layout.internals, ErrorCode::kLayoutMismatch,
          "internal-mode counts differ");
  const Eigen::Index a = static_cast<Eigen::Index>(x.modes());
  const Eigen::Index b = static_cast<Eigen::Index>(y.modes());
  const Eigen::Index n = a + b;
  GaussianState out{CMatrix::Zero(2 * n, 2 * n), CVector::Zero(2 * n),
                    {x.layout.externals + y.layout.externals, x.layout.internals}};
  std::vector<Eigen::Index> xi_idx, yi_idx;
  for (Eigen::Index i = 0; i < a; ++i) xi_idx.push_back(i);
  for (Eigen::Index i = 0; i < a; ++i) xi_idx.push_back(i + n);
  for (Eigen::Index i = 0; i < b; ++i) yi_idx.push_back(a + i);
  for (Eigen::Index i = 0; i < b; ++i) yi_idx.push_back(a + i + n);
  for (std::size_t r = 0; r < xi_idx.size(); ++r) {
    out.means(xi_idx[r]) = x.means(r);
    for (std::size_t c = 0; c < xi_idx.size(); ++c) out.husimi_cov(xi_idx[r], xi_idx[c]) = x.husimi_cov(r, c);
  }
  for (std::size_t r = 0; r < yi_idx.size(); ++r) {
    out.means(yi_idx[r]) = y.means(r);
    for (std::size_t c = 0; c < yi_idx.size(); ++c) out.husimi_cov(yi_idx[r], yi_idx[c]) = y.husimi_cov(r, c);
  }
  return out;
}

AdjacencyRep to_adjacency(const GaussianState& state) {
  const Eigen::Index n2 = state.husimi_cov.rows();
  require_finite(state.husimi_cov, "covariance");
  require(hermitian_defect(state.husimi_cov) <= 1e-10 * scale_of(state.husimi_cov),
          ErrorCode::kNotHermitian, "covariance is not Hermitian");
  AdjacencyRep rep;
  rep.layout = state.layout;
  if (n2 == 0) return rep;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (state.husimi_cov + state.husimi_cov.adjoint()));
  const RVector& lam = eig.eigenvalues();
  require(lam(0) > 0 && lam(n2 - 1) / lam(0) <= 1e12, ErrorCode::kSingularCovariance,
          "covariance is singular or too badly conditioned");
  const CMatrix& v = eig.eigenvectors();
  CMatrix inv = v * lam.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  CMatrix a = swap_row_halves(CMatrix(CMatrix::Identity(n2, n2) - inv));
  rep.a = 0.5 * (a + a.transpose());
  rep.gamma = swap_row_halves(CVector(inv * state.means));
  // (I - XA)^-1 = Sigma, so the exponent is gamma^T Sigma X gamma.
  const Complex exponent = -0.5 * (rep.gamma.transpose() * state.husimi_cov * swap_row_halves(rep.gamma))(0);
  double log_det = 0;
  for (Eigen::Index i = 0; i < n2; ++i) log_det += std::log(lam(i));
  rep.vacuum_prob = std::exp(exponent - 0.5 * log_det);
  return rep;
}

GaussianState from_adjacency(const AdjacencyRep& rep) {
  const Eigen::Index n2 = rep.a.rows();
  CMatrix resolvent = CMatrix::Identity(n2, n2) - swap_row_halves(rep.a);
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  CMatrix sigma = lu.inverse();
  GaussianState state{0.5 * (sigma + sigma.adjoint()), sigma * swap_row_halves(rep.gamma), rep.layout};
  return state;
}

AdjacencyRep reduce_modes(const AdjacencyRep& rep, const std::vector<std::size_t>& keep) {
  const std::size_t m = rep.modes();
  std::vector<Eigen::Index> idx;
  for (std::size_t k : keep) {
    require(k < m, ErrorCode::kIndexOutOfRange, "mode index " + std::to_string(k));
    idx.push_back(static_cast<Eigen::Index>(k));
  }
  for (std::size_t k : keep) idx.push_back(static_cast<Eigen::Index>(k + m));
  AdjacencyRep out;
  out.a = rep.a(idx, idx);
  out.gamma = rep.gamma(idx);
  out.vacuum_prob = rep.vacuum_prob;
  out.layout = {keep.size(), 1};
  return out;
}

GaussianState marginal(const GaussianState& state, const std::vector<std::size_t>& keep) {
  const std::size_t m = state.modes();
  std::vector<Eigen::Index> idx;
  for (std::size_t k : keep) {
    require(k < m, ErrorCode::kIndexOutOfRange, "mode index " + std::to_string(k));
    idx.push_back(static_cast<Eigen::Index>(k));
  }
  for (std::size_t k : keep) idx.push_back(static_cast<Eigen::Index>(k + m));
  return {state.husimi_cov(idx, idx), state.means(idx), {keep.size(), 1}};
}

Complex vacuum_probability(const CMatrix& a, const CVector& gamma) {
  const Eigen::Index n2 = a.rows();
  CMatrix resolvent = CMatrix::Identity(n2, n2) - swap_row_halves(a);
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  CVector solved = lu.solve(swap_row_halves(gamma));
  const Complex exponent = -0.5 * gamma.cwiseProduct(solved).sum();
  return std::exp(exponent) * std::sqrt(lu.determinant());
}

LowdinTable lowdin_internal_model(const OverlapModel& model) {
  const Eigen::Index m = model.overlap.rows();
  require(model.overlap.cols() == m && static_cast<std::size_t>(m) == model.squeeze.size(),
          ErrorCode::kLengthMismatch, "overlap matrix and squeezing list disagree");
  require(hermitian_defect(model.overlap) <= 1e-10, ErrorCode::kNotHermitian,
          "overlap matrix is not Hermitian");
  for (Eigen::Index k = 0; k < m; ++k) {
    require(std::abs(model.overlap(k, k) - 1.0) <= 1e-10, ErrorCode::kDomainError,
            "overlap diagonal must be 1");
  }
  // Gram matrices may be singular (identical internal states), so clamp.
  HermitianEig eig = hermitian_eig(model.overlap);
  require(eig.values.size() == 0 || eig.values.minCoeff() > -1e-10, ErrorCode::kNotPositiveDefinite,
          "overlap matrix is not positive semidefinite");
  CMatrix root = eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
                 eig.vectors.adjoint();
  LowdinTable out{RMatrix::Zero(m, m), {}};
  for (Eigen::Index k = 0; k < m; ++k) {
    CVector row = root.row(k).transpose();
    CMatrix j = model.squeeze[k] * row * row.transpose();
    TakagiResult tk = takagi(j);
    // Rank one: move the single nonzero value to slot k.
    if (k != 0) {
      tk.factors.col(0).swap(tk.factors.col(k));
      std::swap(tk.values(0), tk.values(k));
    }
    out.values.row(k) = tk.values.transpose();
    out.factors.push_back(tk.factors);
  }
  return out;
}

GaussianState lowdin_state(const OverlapModel& model) {
  LowdinTable table = lowdin_internal_model(model);
  const std::size_t m = static_cast<std::size_t>(table.values.rows());
  GaussianState state;
  for (std::size_t k = 0; k < m; ++k) {
    const CMatrix& f = table.factors[k];
    CMatrix j = f * table.values.row(k).transpose().cast<Complex>().asDiagonal() * f.transpose();
    GaussianState part = from_symmetric_squeezing(j, {1, m});
    state = k == 0 ? part : tensor_product(state, part);
  }
  return state;
}

GaussianState impure_source(const std::vector<double>& xi, double p) {
  require(p > 0 && p <= 1, ErrorCode::kDomainError, "spectral purity must lie in (0, 1]");
  std::vector<Complex> params;
  for (double x : xi) {
    require(x >= 0 && std::isfinite(x), ErrorCode::kDomainError, "squeezing must be >= 0");
    const double t2 = (1.0 - p) / p * std::pow(std::tanh(x), 2);
    require(t2 < 1.0, ErrorCode::kDomainError, "secondary squeezing is unbounded for this purity");
    params.emplace_back(x);
    params.emplace_back(std::atanh(std::sqrt(t2)));
  }
  return from_squeezing(params, {xi.size(), 2});
}

CMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  NormalStream rng(seed);
  const Eigen::Index d = static_cast<Eigen::Index>(n);
  CMatrix z(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

}  // namespace blockhaf
