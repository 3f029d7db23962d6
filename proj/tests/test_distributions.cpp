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


#include "blockhaf/distributions.hpp"

#include <gtest/gtest.h>

#include "blockhaf/combinatorics.hpp"
#include "blockhaf/hafnian.hpp"
#include "test_util.hpp"

using namespace blockhaf;
using namespace blockhaf::testing;

namespace {

double oracle_fine(const AdjacencyRep& rep, const Pattern& n) {
  return (rep.vacuum_prob * lhaf_repeated_oracle(rep.a, rep.gamma, n, n) / factorial_product(n)).real();
}

// Squeezer on (k, k) for every external k, then T on each internal mode.
GaussianState distinguishable_sources(const std::vector<double>& r, const CMatrix& t) {
  const std::size_t m = r.size();
  std::vector<Complex> xi(m * m, 0.0);
  for (std::size_t k = 0; k < m; ++k) xi[k * m + k] = r[k];
  return apply_channel(from_squeezing(xi, {m, m}), expand_channel(t, m));
}

}  // namespace

TEST(Distributions, squeezed_vacuum_fine) {
  const double r = 0.8;
  auto rep = to_adjacency(from_squeezing({r}, {1, 1}));
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(prob_fine(rep, {n}), squeezed_prob(r, n), 1e-13);
}

TEST(Distributions, coherent_state_is_poissonian) {
  const Complex alpha(0.9, 0.4);
  auto rep = to_adjacency(displace(vacuum_state({1, 1}), {alpha}));
  const double mu = std::norm(alpha);
  for (int n = 0; n <= 8; ++n)
    EXPECT_NEAR(prob_fine(rep, {n}), std::exp(-mu) * std::pow(mu, n) / fact(n), 1e-13);
}

TEST(Distributions, fine_matches_oracle) {
  NormalStream rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    auto rep = to_adjacency(random_state(3, rng, trial % 2 == 1));
    for_each_pattern(3, 3, 5, [&](const Pattern& n) {
      const double want = oracle_fine(rep, n);
      EXPECT_NEAR(prob_fine(rep, n), want, 1e-12 + 1e-9 * want);
    });
  }
}

TEST(Distributions, fine_sums_to_one) {
  NormalStream rng(32);
  auto rep = to_adjacency(random_state(2, rng, true, 0.3));
  double sum = 0.0;
  for_each_pattern(2, 30, 30, [&](const Pattern& n) { sum += prob_fine(rep, n); });
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Distributions, total_matches_fine_sum) {
  NormalStream rng(33);
  auto rep = to_adjacency(random_state(3, rng, true));
  for (int big_n = 0; big_n <= 4; ++big_n) {
    double want = 0.0;
    for_each_pattern(3, big_n, big_n, [&](const Pattern& n) {
      if (pattern_total(n) == big_n) want += prob_fine(rep, n);
    });
    EXPECT_NEAR(prob_total(rep, {0, 1, 2}, big_n), want, 1e-12);
  }
  // Subset: N in modes {0, 2}, vacuum in mode 1.
  double want = 0.0;
  for (int a = 0; a <= 3; ++a) want += prob_fine(rep, {a, 0, 3 - a});
  EXPECT_NEAR(prob_total(rep, {0, 2}, 3), want, 1e-12);
}

TEST(Distributions, total_distribution_of_pair_state) {
  const double r = 0.6;
  CMatrix u(2, 2);
  u << 1, Complex(0, 1), Complex(0, 1), 1;
  auto rep = to_adjacency(apply_channel(from_squeezing({r, r}, {2, 1}), u / std::sqrt(2.0)));
  auto dist = total_distribution(rep);
  EXPECT_LT(dist.deficit, 1e-7);
  for (std::size_t n = 0; n < 20; ++n) {
    const double want = n % 2 ? 0.0 : std::pow(std::tanh(r), static_cast<double>(n)) / std::pow(std::cosh(r), 2);
    EXPECT_NEAR(dist.probabilities[n], want, 1e-13);
  }
  auto fixed = total_distribution(rep, 5);
  EXPECT_EQ(fixed.probabilities.size(), 6u);
}

TEST(Distributions, coarse_matches_compatible_sum) {
  NormalStream rng(34);
  auto rep = to_adjacency(random_state(4, rng, true));
  Partition part{{0, 3}, {1}, {2}};
  for (const Pattern& b : {Pattern{2, 1, 0}, Pattern{1, 1, 1}, Pattern{3, 0, 2}, Pattern{0, 0, 0}}) {
    double want = 0.0;
    for_each_compatible(part, b, 4, [&](const Pattern& n) { want += prob_fine(rep, n); });
    EXPECT_NEAR(prob_coarse(rep, {part, b}), want, 1e-12);
  }
  EXPECT_THROW(prob_coarse(rep, {{{0, 1}, {1, 2}}, {1, 1}}), Error);
}

TEST(Distributions, external_uses_layout_blocks) {
  auto s = apply_channel(impure_source({0.7, 0.5}, 0.8), expand_channel(haar_unitary(2, 3), 2));
  auto rep = to_adjacency(s);
  Partition part{{0, 1}, {2, 3}};
  for (const Pattern& n : {Pattern{1, 1}, Pattern{2, 0}, Pattern{2, 2}})
    EXPECT_NEAR(prob_external(rep, n), prob_coarse(rep, {part, n}), 1e-14);
  EXPECT_THROW(prob_external(rep, {1, 1, 1}), Error);
}

TEST(Distributions, distinguishable_fast_path_matches_general_route) {
  NormalStream rng(35);
  CMatrix t = random_subunitary(3, rng, 0.5, 0.95);
  auto s = distinguishable_sources({0.6, 0.4, 0.7}, t);
  auto rep = to_adjacency(s);
  std::vector<CMatrix> blocks;
  for (std::size_t l = 0; l < 3; ++l) blocks.push_back(distinguishable_block(marginal(s, {l, 3 + l, 6 + l})));
  auto assembled = assemble_distinguishable(blocks);
  EXPECT_NEAR(assembled.vacuum_prob.real(), rep.vacuum_prob.real(), 1e-12);
  for_each_pattern(3, 3, 5, [&](const Pattern& n) {
    const double want = prob_external(rep, n);
    EXPECT_NEAR(prob_external_distinguishable(blocks, n), want, 1e-12 + 1e-9 * want);
    EXPECT_NEAR(prob_external(assembled, n), want, 1e-12 + 1e-9 * want);
  });
}

TEST(Distributions, distinguishable_rejects_high_rank) {
  auto s = from_squeezing({0.3, 0.4}, {2, 1});
  std::vector<CMatrix> blocks{distinguishable_block(s)};
  // Two independent squeezers give rank four.
  EXPECT_THROW(prob_external_distinguishable(blocks, {1, 1}), Error);
}

TEST(Distributions, thermal_generating_function) {
  const double nbar = 0.7;
  auto s = thermal_state({nbar}, {1, 1});
  for (double t : {-0.5, 0.1, 0.3})
    EXPECT_NEAR(moment_mgf(s, {t}), 1 / (1 - nbar * std::expm1(t)), 1e-13);
  auto cum = block_cumulants(s, {0}, 3);
  EXPECT_NEAR(cum[0], nbar, 1e-14);
  EXPECT_NEAR(cum[1], nbar * (1 + nbar), 1e-14);
  EXPECT_NEAR(cum[2], nbar * (1 + nbar) * (1 + 2 * nbar), 1e-13);
  EXPECT_THROW(moment_mgf(s, {std::log1p(1 / nbar)}), Error);
}

TEST(Distributions, squeezed_variance) {
  const double r = 0.9;
  auto s = from_squeezing({r}, {1, 1});
  auto cum = block_cumulants(s, {0}, 2);
  const double sh = std::sinh(r), ch = std::cosh(r);
  EXPECT_NEAR(cum[0], sh * sh, 1e-13);
  EXPECT_NEAR(cum[1], 2 * sh * sh * ch * ch, 1e-12);
}

TEST(Distributions, moments_match_distribution_sums) {
  NormalStream rng(36);
  auto s = random_state(3, rng, true, 0.3);
  auto rep = to_adjacency(s);
  double m0 = 0, m1 = 0, m01 = 0, m012 = 0, m0_12 = 0;
  for_each_pattern(3, 24, 24, [&](const Pattern& n) {
    const double p = prob_fine(rep, n);
    m0 += n[0] * p;
    m1 += n[1] * p;
    m01 += n[0] * n[1] * p;
    m012 += n[0] * n[1] * n[2] * p;
    m0_12 += n[0] * (n[1] + n[2]) * p;
  });
  EXPECT_NEAR(coarse_moment(s, {{0}}), m0, 1e-8);
  EXPECT_NEAR(coarse_moment(s, {{0}, {1}}), m01, 1e-8);
  EXPECT_NEAR(coarse_moment(s, {{0}, {1}, {2}}), m012, 1e-8);
  EXPECT_NEAR(coarse_moment(s, {{0}, {1, 2}}), m0_12, 1e-8);
  EXPECT_NEAR(coarse_cumulant(s, {{0}}), m0, 1e-8);
  EXPECT_NEAR(coarse_cumulant(s, {{0}, {1}}), m01 - m0 * m1, 1e-8);
  EXPECT_THROW(coarse_moment(s, {{0}, {0}}), Error);
}

TEST(Distributions, third_cumulant_from_moments) {
  NormalStream rng(37);
  auto s = random_state(3, rng, true, 0.4);
  const double e0 = coarse_moment(s, {{0}}), e1 = coarse_moment(s, {{1}}), e2 = coarse_moment(s, {{2}});
  const double e01 = coarse_moment(s, {{0}, {1}}), e02 = coarse_moment(s, {{0}, {2}}),
               e12 = coarse_moment(s, {{1}, {2}});
  const double e012 = coarse_moment(s, {{0}, {1}, {2}});
  const double want = e012 - e01 * e2 - e02 * e1 - e12 * e0 + 2 * e0 * e1 * e2;
  EXPECT_NEAR(coarse_cumulant(s, {{0}, {1}, {2}}), want, 1e-10);
}
