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

#include <cstdint>
#include <vector>

#include "blockhaf/types.hpp"

namespace blockhaf {

// Husimi (s = -1) covariance and means in (a_1..a_n, a_1^dag..a_n^dag)
// ordering. Vacuum has covariance I.
struct GaussianState {
  CMatrix husimi_cov;
  CVector means;
  ModeLayout layout;

  std::size_t modes() const { return static_cast<std::size_t>(means.size() / 2); }
  // Throws on a Hermiticity, positivity, uncertainty or mean-structure violation.
  void validate(double tol = 1e-10) const;
};

// A = X(I - Sigma^-1), gamma = X Sigma^-1 zbar and the vacuum probability.
struct AdjacencyRep {
  CMatrix a;
  CVector gamma;
  Complex vacuum_prob = 1.0;
  ModeLayout layout;

  std::size_t modes() const { return static_cast<std::size_t>(gamma.size() / 2); }
};

struct OverlapModel {
  CMatrix overlap;               // O_jk = <phi_j|phi_k>
  std::vector<Complex> squeeze;  // xi_k
};

struct LowdinTable {
  RMatrix values;               // values(k, n) = Takagi value n of J^(k)
  std::vector<CMatrix> factors; // F^(k), J^(k) = F diag(values.row(k)) F^T
};

GaussianState vacuum_state(ModeLayout layout);

// Product of single-mode squeezed vacua S(xi) = exp[(xi a^dag^2 - xi^* a^2)/2].
GaussianState from_squeezing(const std::vector<Complex>& xi, ModeLayout layout);

// Multimode squeezed vacuum exp[(sum J_lm a_l^dag a_m^dag - h.c.)/2] for
// complex symmetric J.
GaussianState from_symmetric_squeezing(const CMatrix& j, ModeLayout layout);

GaussianState from_covariance(CMatrix husimi_cov, CVector means, ModeLayout layout);

GaussianState thermal_state(const std::vector<double>& nbar, ModeLayout layout);

GaussianState displace(const GaussianState& state, const std::vector<Complex>& alphas);

// Sigma' = W Sigma W^dag + I - W W^dag and zbar' = W zbar with W = t^* (+) t.
// A coherent amplitude alpha therefore maps to t^* alpha.
GaussianState apply_channel(const GaussianState& state, const CMatrix& t);

// T (+) ... (+) T acting on each internal mode separately, in layout order.
CMatrix expand_channel(const CMatrix& t, std::size_t internals);

// Direct product of independent states; layouts must share K.
GaussianState tensor_product(const GaussianState& x, const GaussianState& y);

AdjacencyRep to_adjacency(const GaussianState& state);

// Inverse of to_adjacency: Sigma = (I - XA)^-1, zbar = Sigma X gamma.
GaussianState from_adjacency(const AdjacencyRep& rep);

// Rows and columns k and k+M for k in keep; vacuum_prob is carried over as is.
AdjacencyRep reduce_modes(const AdjacencyRep& rep, const std::vector<std::size_t>& keep);

// Reduced state of the kept modes (partial trace over the rest).
GaussianState marginal(const GaussianState& state, const std::vector<std::size_t>& keep);

// Vacuum probability exp(-gamma^T (I-XA)^-1 X gamma / 2) sqrt(det(I - XA)).
Complex vacuum_probability(const CMatrix& a, const CVector& gamma);

LowdinTable lowdin_internal_model(const OverlapModel& model);

// Layout (M, M): external k carries the squeezed state built from J^(k).
GaussianState lowdin_state(const OverlapModel& model);

// tanh^2 xi' = ((1 - p)/p) tanh^2 xi; internal modes (xi_k, xi'_k) adjacent.
GaussianState impure_source(const std::vector<double>& xi, double p);

// Haar-distributed unitary from a seeded Ginibre matrix.
CMatrix haar_unitary(std::size_t n, std::uint64_t seed);

}  // namespace blockhaf
