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

#include <vector>

#include "blockhaf/gaussian.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

struct CoarsePattern {
  Partition partition;
  Pattern counts;
};

// Total photon-number distribution over N = 0..probabilities.size()-1.
struct Distribution {
  std::vector<double> probabilities;  // clipped at zero
  std::vector<double> raw;            // before clipping
  double deficit = 0.0;               // 1 - sum(probabilities)
};

// Real part of a probability-like value; throws kNonFinite if the imaginary
// residue exceeds tol (1 + |v|), tol = imaginary_tolerance().
double real_probability(Complex v);

double imaginary_tolerance();
// Process-wide; the default is 1e-9.
void set_imaginary_tolerance(double tol);

double prob_fine(const AdjacencyRep& rep, const Pattern& n);

// N photons in `subset`, vacuum on every other mode.
double prob_total(const AdjacencyRep& rep, const std::vector<std::size_t>& subset, int n);

// nmax < 0 extends the range until the tail falls below `tail`.
Distribution total_distribution(const AdjacencyRep& rep, int nmax = -1, double tail = 1e-7);

double prob_coarse(const AdjacencyRep& rep, const CoarsePattern& cp);

// n has one count per external mode; internal modes are unresolved.
double prob_external(const AdjacencyRep& rep, const Pattern& n);

// B_l = (X A)_l for internal mode l, a Hermitian rank <= 2 matrix over the M
// external modes. Requires gamma = 0.
double prob_external_distinguishable(const std::vector<CMatrix>& blocks, const Pattern& n);

// I - Sigma^-1 of one internal mode's M-mode state.
CMatrix distinguishable_block(const GaussianState& internal_state);

// Rep over layout (M, K) whose X A is the direct sum of the blocks.
AdjacencyRep assemble_distinguishable(const std::vector<CMatrix>& blocks);

// M(t) = exp(zbar^dag [I - G Sigma1]^-1 G zbar / 2) / sqrt(det(I - G Sigma1)),
// G = diag(e^t - 1) on both halves, Sigma1 = Sigma - I.
double moment_mgf(const GaussianState& state, const std::vector<double>& t);

// <n_B1 ... n_BL> for disjoint blocks, each used once.
double coarse_moment(const GaussianState& state, const Partition& blocks);

// Joint cumulant <<n_B1 ... n_BL>> for disjoint blocks, each used once.
double coarse_cumulant(const GaussianState& state, const Partition& blocks);

// Cumulants kappa_1..kappa_order of the photon number in one block.
std::vector<double> block_cumulants(const GaussianState& state, const std::vector<std::size_t>& block,
                                    int order);

}  // namespace blockhaf
