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

#include "blockhaf/combinatorics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "blockhaf/error.hpp"

namespace blockhaf {

double binomial(int k, int m) {
  if (m < 0 || m > k) return 0.0;
  m = std::min(m, k - m);
  if (k <= 62) {
    unsigned __int128 c = 1;
    for (int i = 0; i < m; ++i) c = c * static_cast<unsigned>(k - i) / static_cast<unsigned>(i + 1);
    return static_cast<double>(c);
  }
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c = c * (k - m + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double factorial_product(const Pattern& n) {
  double f = 1.0;
  for (int x : n) f *= factorial(x);
  return f;
}

int pattern_total(const Pattern& n) { return std::accumulate(n.begin(), n.end(), 0); }

void validate_partition(const Partition& partition, std::size_t modes) {
  std::vector<int> seen(modes, 0);
  for (const auto& block : partition) {
    require(!block.empty(), ErrorCode::kPartitionMismatch, "empty block");
    for (std::size_t i : block) {
      require(i < modes, ErrorCode::kPartitionMismatch,
              "block index " + std::to_string(i) + " out of range");
      require(seen[i]++ == 0, ErrorCode::kPartitionMismatch,
              "mode " + std::to_string(i) + " appears in more than one block");
    }
  }
  for (std::size_t i = 0; i < modes; ++i) {
    require(seen[i] == 1, ErrorCode::kPartitionMismatch,
            "mode " + std::to_string(i) + " is not covered");
  }
}

GrayCounter::GrayCounter(Pattern radix)
    : radix_(std::move(radix)), digits_(radix_.size(), 0), dir_(radix_.size(), 1) {}

bool GrayCounter::next() {
  // Lowest digit that can still move in its direction changes; digits below
  // it reverse direction.
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    int moved = digits_[i] + dir_[i];
    if (moved >= 0 && moved <= radix_[i]) {
      digits_[i] = moved;
      changed_ = i;
      delta_ = dir_[i];
      for (std::size_t j = 0; j < i; ++j) dir_[j] = -dir_[j];
      return true;
    }
  }
  return false;
}

namespace {

void distribute(const std::vector<std::size_t>& block, std::size_t pos, int remaining,
                Pattern& pattern, const std::function<void()>& done) {
  if (pos + 1 == block.size()) {
    pattern[block[pos]] = remaining;
    done();
    pattern[block[pos]] = 0;
    return;
  }
  for (int x = remaining; x >= 0; --x) {
    pattern[block[pos]] = x;
    distribute(block, pos + 1, remaining - x, pattern, done);
  }
  pattern[block[pos]] = 0;
}

void compatible_rec(const Partition& partition, const Pattern& b, std::size_t j, Pattern& pattern,
                    const std::function<void(const Pattern&)>& visit) {
  if (j == partition.size()) {
    visit(pattern);
    return;
  }
  distribute(partition[j], 0, b[j], pattern,
             [&] { compatible_rec(partition, b, j + 1, pattern, visit); });
}

}  // namespace

void for_each_compatible(const Partition& partition, const Pattern& b, std::size_t modes,
                         const std::function<void(const Pattern&)>& visit) {
  require(partition.size() == b.size(), ErrorCode::kPartitionMismatch,
          "one count per block required");
  Pattern pattern(modes, 0);
  compatible_rec(partition, b, 0, pattern, visit);
}

void for_each_box(const Pattern& radix, const std::function<void(const Pattern&)>& visit) {
  Pattern p(radix.size(), 0);
  for (;;) {
    visit(p);
    std::size_t i = radix.size();
    for (;;) {
      if (i == 0) return;
      --i;
      if (p[i] < radix[i]) {
        ++p[i];
        break;
      }
      p[i] = 0;
    }
  }
}

}  // namespace blockhaf
