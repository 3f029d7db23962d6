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

#include "blockhaf/distributions.hpp"
#include "blockhaf/heralding.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

// Fock state p entering the lossy linear circuit t.
struct FockInput {
  Pattern p;
  CMatrix t;
};

// Rows (inputs, outputs, inputs, outputs):
//   [0, T^dag, I - T^dag T, 0; T^*, 0, 0, 0; I - T^T T^*, 0, 0, T^T; 0, 0, T, 0].
CMatrix build_a_phi(const CMatrix& t);

// cp partitions the output modes.
double fock_coarse_prob(const FockInput& input, const CoarsePattern& cp);

inline constexpr int kPermanentMaxDim = 16;

// Ryser's formula over a Gray code, compensated summation.
Complex permanent(const CMatrix& m);

// Sum over compatible fine outputs of perm([[I - T^dag T, T^dag], [T, 0]]
// repeated by (p, n)) / (p! n!).
double fock_perm_oracle(const FockInput& input, const CoarsePattern& cp);

// spec.groups and spec.trace_out index output modes; the density matrix runs
// over the remaining outputs.
DensityMatrix fock_herald(const FockInput& input, const HeraldSpec& spec, const HeraldOptions& options = {});

}  // namespace blockhaf
