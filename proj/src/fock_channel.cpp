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


#include "blockhaf/fock_channel.hpp"

#include <algorithm>
#include <cmath>

#include "blockhaf/combinatorics.hpp"
#include "blockhaf/error.hpp"
#include "blockhaf/hafnian.hpp"
#include "blockhaf/linalg.hpp"

namespace blockhaf {

namespace {

// t is (outputs x inputs); modes are the inputs followed by the outputs.
CMatrix a_phi(const CMatrix& t) {
  const Eigen::Index mo = t.rows(), mi = t.cols();
  const Eigen::Index n = mi + mo;
  CMatrix a = CMatrix::Zero(2 * n, 2 * n);
  const CMatrix loss = CMatrix::Identity(mi, mi) - t.adjoint() * t;
  a.block(0, mi, mi, mo) = t.adjoint();
  a.block(0, n, mi, mi) = loss;
  a.block(mi, 0, mo, mi) = t.conjugate();
  a.block(n, 0, mi, mi) = loss.transpose();
  a.block(n, n + mi, mi, mo) = t.transpose();
  a.block(n + mi, n, mo, mi) = t;
  return a;
}

void validate_input(const FockInput& input) {
  require(input.t.rows() == input.t.cols(), ErrorCode::kLengthMismatch, "transmission must be square");
  require(static_cast<Eigen::Index>(input.p.size()) == input.t.cols(), ErrorCode::kLengthMismatch,
          "one input count per port required");
  require_finite(input.t, "transmission");
  require(is_subunitary(input.t), ErrorCode::kNotSubunitary, "transmission has singular value > 1");
  for (int x : input.p) require(x >= 0, ErrorCode::kDomainError, "negative input photon number");
}

// Coarse probability for outputs given by the rows of t.
double coarse_prob_rows(const CMatrix& t, const Pattern& p, const Partition& partition, const Pattern& b) {
  const std::size_t mi = p.size();
  if (pattern_total(b) > pattern_total(p)) return 0.0;
  Partition full;
  Pattern counts = p;
  for (std::size_t k = 0; k < mi; ++k) full.push_back({k});
  for (const auto& block : partition) {
    std::vector<std::size_t> shifted;
    for (std::size_t i : block) shifted.push_back(i + mi);
    full.push_back(shifted);
  }
  counts.insert(counts.end(), b.begin(), b.end());
  const CMatrix a = a_phi(t);
  const Complex value = blocked_lhaf(a, CVector::Zero(a.rows()), full, counts);
  return real_probability(value / (factorial_product(p) * factorial_product(b)));
}

}  // namespace

CMatrix build_a_phi(const CMatrix& t) {
  require(t.rows() == t.cols(), ErrorCode::kLengthMismatch, "transmission must be square");
  require_finite(t, "transmission");
  require(is_subunitary(t), ErrorCode::kNotSubunitary, "transmission has singular value > 1");
  return a_phi(t);
}

double fock_coarse_prob(const FockInput& input, const CoarsePattern& cp) {
  validate_input(input);
  validate_partition(cp.partition, input.p.size());
  require(cp.partition.size() == cp.counts.size(), ErrorCode::kPartitionMismatch,
          "one count per block required");
  return coarse_prob_rows(input.t, input.p, cp.partition, cp.counts);
}

Complex permanent(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  require(m.cols() == n, ErrorCode::kLengthMismatch, "permanent needs a square matrix");
  require(n <= kPermanentMaxDim, ErrorCode::kTooLarge, "permanent limited to 16x16");
  if (n == 0) return 1.0;
  CVector row_sums = CVector::Zero(n);
  Complex sum = 0.0, carry = 0.0;
  std::uint32_t gray = 0;
  for (std::uint32_t k = 1; k < (1u << n); ++k) {
    const int j = __builtin_ctz(k);
    const std::uint32_t bit = 1u << j;
    gray ^= bit;
    if (gray & bit) {
      row_sums += m.col(j);
    } else {
      row_sums -= m.col(j);
    }
    Complex term = row_sums.prod();
    if (__builtin_popcount(gray) % 2) term = -term;
    // Kahan summation on each component.
    const Complex y = term - carry;
    const Complex s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return n % 2 ? -sum : sum;
}

double fock_perm_oracle(const FockInput& input, const CoarsePattern& cp) {
  validate_input(input);
  const std::size_t m = input.p.size();
  validate_partition(cp.partition, m);
  require(cp.partition.size() == cp.counts.size(), ErrorCode::kPartitionMismatch,
          "one count per block required");
  const int total = pattern_total(input.p) + pattern_total(cp.counts);
  require(total <= kPermanentMaxDim, ErrorCode::kTooLarge, "permanent oracle limited to N' <= 16");
  if (pattern_total(cp.counts) > pattern_total(input.p)) return 0.0;
  const Eigen::Index mm = static_cast<Eigen::Index>(m);
  CMatrix b = CMatrix::Zero(2 * mm, 2 * mm);
  b.topLeftCorner(mm, mm) = CMatrix::Identity(mm, mm) - input.t.adjoint() * input.t;
  b.topRightCorner(mm, mm) = input.t.adjoint();
  b.bottomLeftCorner(mm, mm) = input.t;
  Complex sum = 0.0;
  for_each_compatible(cp.partition, cp.counts, m, [&](const Pattern& n) {
    auto idx = repeat_indices(input.p, n);
    CMatrix sub = b(idx, idx);
    sum += permanent(sub) / (factorial_product(input.p) * factorial_product(n));
  });
  return real_probability(sum);
}

DensityMatrix fock_herald(const FockInput& input, const HeraldSpec& spec, const HeraldOptions& options) {
  validate_input(input);
  const std::size_t m = input.p.size();
  require(spec.cutoff >= 0, ErrorCode::kDomainError, "cutoff must be >= 0");
  require(spec.groups.size() == spec.counts.size(), ErrorCode::kPartitionMismatch,
          "one count per herald group required");
  std::vector<int> role(m, 0);  // 0 kept, 1 herald, 2 traced
  for (const auto& g : spec.groups) {
    require(!g.empty(), ErrorCode::kPartitionMismatch, "empty herald group");
    for (std::size_t i : g) {
      require(i < m, ErrorCode::kIndexOutOfRange, "herald mode out of range");
      require(role[i] == 0, ErrorCode::kPartitionMismatch, "herald groups overlap");
      role[i] = 1;
    }
  }
  for (std::size_t i : spec.trace_out) {
    require(i < m, ErrorCode::kIndexOutOfRange, "traced mode out of range");
    require(role[i] == 0, ErrorCode::kPartitionMismatch, "traced mode is heralded or repeated");
    role[i] = 2;
  }
  // Traced outputs are dropped from t; their photons join the loss.
  std::vector<Eigen::Index> rows;
  std::vector<std::size_t> local(m, 0);
  std::vector<std::size_t> herald_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (role[i] == 2) continue;
    local[i] = rows.size();
    rows.push_back(static_cast<Eigen::Index>(i));
  }
  const CMatrix t = input.t(rows, Eigen::all);

  detail::HeraldProblem problem;
  problem.a = a_phi(t);
  problem.gamma = CVector::Zero(problem.a.rows());
  problem.cutoff = spec.cutoff;
  // Group counts include the inputs, so N + b + |u| <= 2N encodes b + |u| <= N.
  problem.max_photons = 2 * pattern_total(input.p);
  for (std::size_t k = 0; k < m; ++k) {
    problem.groups.push_back({k});
    problem.counts.push_back(input.p[k]);
  }
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    std::vector<std::size_t> block;
    for (std::size_t i : spec.groups[g]) block.push_back(m + local[i]);
    problem.groups.push_back(block);
    problem.counts.push_back(spec.counts[g]);
  }
  for (std::size_t i = 0; i < m; ++i)
    if (role[i] == 0) problem.kept.push_back(m + local[i]);

  DensityMatrix dm = detail::assemble(problem, options);
  if (options.compute_herald_probability) {
    std::vector<Eigen::Index> hrows;
    std::vector<std::size_t> hlocal(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (role[i] == 1) {
        hlocal[i] = hrows.size();
        hrows.push_back(static_cast<Eigen::Index>(i));
      }
    Partition part;
    for (const auto& g : spec.groups) {
      std::vector<std::size_t> block;
      for (std::size_t i : g) block.push_back(hlocal[i]);
      part.push_back(block);
    }
    dm.herald_probability = coarse_prob_rows(input.t(hrows, Eigen::all), input.p, part, spec.counts);
  }
  return dm;
}

}  // namespace blockhaf
