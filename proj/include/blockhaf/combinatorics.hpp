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
#include <functional>
#include <vector>

#include "blockhaf/types.hpp"

namespace blockhaf {

// Exact for k <= 62 through integer arithmetic, log-space beyond.
double binomial(int k, int m);

double factorial(int n);

// Product of n_i! over a pattern.
double factorial_product(const Pattern& n);

int pattern_total(const Pattern& n);

// Checks that blocks are non-empty, disjoint and cover {0..modes-1}.
void validate_partition(const Partition& partition, std::size_t modes);

// Mixed-radix reflected Gray code over {0..radix_0} x ... x {0..radix_{L-1}}.
// Each step changes exactly one digit by +1 or -1.
class GrayCounter {
 public:
  explicit GrayCounter(Pattern radix);

  const Pattern& digits() const { return digits_; }
  // Advances; returns false when the sequence is exhausted. On success,
  // changed() and delta() describe the step.
  bool next();
  std::size_t changed() const { return changed_; }
  int delta() const { return delta_; }

 private:
  Pattern radix_;
  Pattern digits_;
  std::vector<int> dir_;
  std::size_t changed_ = 0;
  int delta_ = 0;
};

// Calls visit for every fine pattern over the modes of `partition` whose block
// sums equal b (the set of compatible fine patterns). The pattern passed has
// length `modes`.
void for_each_compatible(const Partition& partition, const Pattern& b, std::size_t modes,
                         const std::function<void(const Pattern&)>& visit);

// Calls visit for every pattern in {0..radix_0} x ... in lexicographic order,
// last index fastest.
void for_each_box(const Pattern& radix, const std::function<void(const Pattern&)>& visit);

}  // namespace blockhaf
