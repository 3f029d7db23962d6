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

#include <limits>
#include <vector>

#include "blockhaf/gaussian.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

// Origin of one half of an embedded mode; mode < 0 marks the padding half.
struct HalfSource {
  int mode = -1;
  int half = 0;
};

struct EmbeddingOptions {
  // Consecutive identical surplus pairs share one new mode with a larger count.
  bool merge = false;
  // Rows and columns of original modes with t = 0 are set to zero.
  bool zero_unused = true;
};

// lhaf(A'_{t (+) t}, gamma'_{t (+) t}) = lhaf(A_{n (+) m}, gamma_{n (+) m}).
struct Embedding {
  CMatrix a_prime;
  CVector gamma_prime;
  Pattern t;
  std::vector<HalfSource> source;  // 2M' entries, first halves then second halves
  std::size_t original_modes = 0;

  std::size_t modes() const { return t.size(); }
};

// n selects first-half copies, m second-half copies.
Embedding build_embedding(const AdjacencyRep& rep, const Pattern& n, const Pattern& m,
                          EmbeddingOptions options = {});

// <m|rho|n>.
Complex fock_element(const AdjacencyRep& rep, const Pattern& m, const Pattern& n);

// Measurement on a set of modes: every group of mode indices registers
// counts[i] photons in total.
struct HeraldSpec {
  Partition groups;
  Pattern counts;
  std::vector<std::size_t> trace_out;
  int cutoff = 0;  // maximum Fock index per kept mode, inclusive

  std::vector<std::size_t> herald_modes() const;

  static HeraldSpec fine(const std::vector<std::size_t>& modes, const Pattern& counts, int cutoff,
                         std::vector<std::size_t> trace_out = {});
  // One group per listed external, covering all of its internal modes.
  static HeraldSpec externals(const ModeLayout& layout, const std::vector<std::size_t>& externals,
                              const Pattern& counts, int cutoff, std::vector<std::size_t> trace_out = {});
};

// entries(i, j) = <v_i|rho|u_j>; index digits run over kept modes with the
// first kept mode most significant.
struct DensityMatrix {
  std::size_t modes = 0;
  int cutoff = 0;
  CMatrix entries;
  Complex trace = 0.0;
  // Probability of the herald outcome with kept modes summed to infinity;
  // NaN when not computed.
  double herald_probability = std::numeric_limits<double>::quiet_NaN();

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
  double truncation_deficit() const { return herald_probability - trace.real(); }
  Pattern pattern(std::size_t index) const;
  std::size_t index(const Pattern& p) const;
};

struct HeraldOptions {
  int threads = 1;
  // Also compute the lower triangle and compare it with the mirrored values.
  bool verify_hermitian = false;
  bool compute_herald_probability = true;
  // Expand every group into fine patterns instead of sieving over it.
  bool combinatorial = false;
};

DensityMatrix herald_fine(const AdjacencyRep& rep, const HeraldSpec& spec, const HeraldOptions& options = {});

DensityMatrix herald_grouped(const AdjacencyRep& rep, const HeraldSpec& spec,
                             const HeraldOptions& options = {});

DensityMatrix partial_trace(const DensityMatrix& dm, const std::vector<std::size_t>& drop);

DensityMatrix normalized(const DensityMatrix& dm);

// sqrt(<psi|rho|psi>) for a normalized dm and target.
double fidelity(const DensityMatrix& dm, const CVector& target);

double min_eigenvalue(const DensityMatrix& dm);

namespace detail {

// Shared element engine for Gaussian and Fock-input heralding. Modes of `rep`
// split into fixed groups (diagonal, with counts) and kept modes (u, v free).
struct HeraldProblem {
  CMatrix a;
  CVector gamma;
  Complex prefactor = 1.0;  // multiplies every element
  Partition groups;
  Pattern counts;
  std::vector<std::size_t> kept;
  int cutoff = 0;
  int max_photons = -1;  // photons in groups plus a side's kept photons; < 0: no bound
};

Complex herald_element(const HeraldProblem& problem, const Pattern& bra, const Pattern& ket,
                       bool combinatorial = false);

DensityMatrix assemble(const HeraldProblem& problem, const HeraldOptions& options);

}  // namespace detail

}  // namespace blockhaf
