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

// Real single-mode squeezers xi_j feeding the circuit t.
struct PPRun {
  std::vector<double> squeeze;
  CMatrix t;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::vector<int> n_values;
  int threads = 1;
  std::size_t batch_size = 4096;  // batch b draws from NormalStream(seed, b)
};

struct PPResult {
  std::vector<int> n_values;
  std::vector<double> estimates;
  std::vector<double> standard_errors;
  std::size_t samples = 0;
};

// Mean of Re[n'^N e^-n' / N!] with n' = sum_j alpha'_j conj(beta'_j),
// alpha' = t alpha, beta' = t beta.
PPResult pp_estimate(const PPRun& run);

}  // namespace blockhaf
