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

#include "blockhaf/hafnian.hpp"

#include <gtest/gtest.h>

#include <map>

#include "blockhaf/gaussian.hpp"
#include "test_util.hpp"

using namespace blockhaf;
using namespace blockhaf::testing;

TEST(LhafOracle, small_graphs) {
  CMatrix a(2, 2);
  a << 9.0, 0.7, 0.7, 9.0;
  CVector g(2);
  g << 2.0, 3.0;
  EXPECT_NEAR(std::abs(lhaf_oracle(a, g) - Complex(6.7)), 0, 1e-14);
  CMatrix ones = CMatrix::Ones(4, 4);
  EXPECT_NEAR(lhaf_oracle(ones, CVector(CVector::Zero(4))).real(), 3.0, 1e-14);
  EXPECT_NEAR(lhaf_oracle(ones, CVector(CVector::Ones(4))).real(), 10.0, 1e-14);
  CMatrix empty(0, 0);
  EXPECT_EQ(lhaf_oracle(empty, CVector(0)), Complex(1.0));
}

TEST(LhafOracle, guards) {
  EXPECT_THROW(lhaf_oracle(CMatrix(CMatrix::Ones(3, 3)), CVector(CVector::Ones(3))), Error);
  try {
    lhaf_oracle(CMatrix(CMatrix::Ones(16, 16)), CVector(CVector::Ones(16)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(FFromG, low_orders) {
  CVector none(0);
  EXPECT_EQ(f_from_g(none), Complex(1.0));
  CVector g(2);
  g << Complex(0.3, 0.1), Complex(-0.7, 0.4);
  EXPECT_LE(std::abs(f_from_g(g) - (g(1) + g(0) * g(0) / 2.0)), 1e-15);
}

TEST(FFromG, matches_partition_enumeration) {
  NormalStream rng(21);
  for (int n = 1; n <= 8; ++n) {
    CVector g = random_vector(n, rng);
    Complex want = 0;
    for_each_partition(n, [&](const std::vector<int>& parts) {
      std::map<int, int> mult;
      Complex term = 1;
      for (int p : parts) {
        term *= g(p - 1);
        ++mult[p];
      }
      for (auto [p, c] : mult) term /= fact(c);
      want += term;
    });
    EXPECT_LE(rel_err(f_from_g(g), want), 1e-12) << "N=" << n;
  }
}

TEST(GCoefficients, zero_and_trace_forms) {
  CMatrix zero = CMatrix::Zero(4, 4);
  CVector g0 = g_coefficients(zero, CVector(CVector::Zero(4)), 3);
  EXPECT_EQ(g0.cwiseAbs().maxCoeff(), 0.0);

  NormalStream rng(4);
  CMatrix a = random_symmetric(6, rng);
  CVector gamma0 = CVector::Zero(6);
  CVector g = g_coefficients(a, gamma0, 5);
  CVector traces = power_traces(swap_row_halves(a), 5);
  for (int k = 1; k <= 5; ++k) EXPECT_LE(rel_err(g(k - 1), traces(k - 1) / (2.0 * k)), 1e-12);

  CVector gamma = random_vector(6, rng);
  CVector ones = CVector::Ones(3);
  CVector plain = g_coefficients(a, gamma, 5);
  CVector scaled = g_coefficients(a, gamma, 5, ones);
  EXPECT_LE((plain - scaled).cwiseAbs().maxCoeff(), 1e-14);
  CVector eig = g_coefficients(a, gamma, 5, std::nullopt, TraceMethod::kEigenvalues);
  for (int k = 0; k < 5; ++k) EXPECT_LE(rel_err(eig(k), plain(k)), 1e-10);
}

TEST(FN, squeezed_vacuum_second_order) {
  const double r = 0.7;
  AdjacencyRep rep = to_adjacency(from_squeezing({Complex(r)}, {1, 1}));
  const Complex f2 = f_n(rep.a, rep.gamma, 2);
  EXPECT_NEAR((rep.vacuum_prob * f2).real(), squeezed_prob(r, 2), 1e-13);
  AdjacencyRep vac = to_adjacency(vacuum_state({2, 1}));
  EXPECT_EQ(std::abs(f_n(vac.a, vac.gamma, 3)), 0.0);
}

TEST(FN, mask_scale_equals_reduction) {
  NormalStream rng(9);
  AdjacencyRep rep = to_adjacency(random_state(3, rng, true));
  CVector mask(3);
  mask << 1.0, 0.0, 1.0;
  AdjacencyRep red = reduce_modes(rep, {0, 2});
  for (int n = 1; n <= 5; ++n) {
    EXPECT_LE(rel_err(f_n(rep.a, rep.gamma, n, mask), f_n(red.a, red.gamma, n)), 1e-12);
  }
}

TEST(Sieve, monomials) {
  Pattern none{0, 0};
  auto nodes0 = default_nodes(none);
  EXPECT_EQ(sieve([](const CVector& z) { return z(0) + 7.0; }, none, nodes0), Complex(7.0));
  Pattern p11{1, 1};
  auto v = sieve([](const CVector& z) { return z(0) * z(1); }, p11, default_nodes(p11));
  EXPECT_LE(std::abs(v - 1.0), 1e-14);
  Pattern p3{3};
  for (const auto& nodes : {default_nodes(p3), unit_nodes(p3), wide_nodes(p3)}) {
    auto c = sieve([](const CVector& z) { return z(0) * z(0) * z(0); }, p3, nodes);
    EXPECT_LE(std::abs(c - 6.0), 1e-12);
  }
  // Degree-3 polynomial, total-degree argument: (1,2) extracts 2! * coeff of z0 z1^2.
  Pattern p12{1, 2};
  auto poly = [](const CVector& z) {
    return 5.0 * z(0) * z(1) * z(1) + 3.0 * z(0) * z(0) * z(0) + 2.0 * z(1) * z(1) * z(1);
  };
  EXPECT_LE(std::abs(sieve(poly, p12, default_nodes(p12)) - 10.0), 1e-12);
  EXPECT_LE(std::abs(sieve(poly, p12, unit_nodes(p12)) - 10.0), 1e-12);
}

TEST(LhafSieve, matches_oracle) {
  NormalStream rng(31);
  CMatrix a = random_symmetric(4, rng);
  CVector g = random_vector(4, rng);
  EXPECT_EQ(lhaf_sieve(a, g, {0, 0}), Complex(1.0));
  EXPECT_LE(rel_err(lhaf_sieve(a, g, {1, 1}), lhaf_oracle(a, g)), 1e-10);
  EXPECT_LE(rel_err(lhaf_sieve(a, g, {2, 1}), lhaf_repeated_oracle(a, g, {2, 1}, {2, 1})), 1e-10);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 1 + trial % 3;
    CMatrix b = random_symmetric(2 * m, rng);
    CVector gb = random_vector(2 * m, rng);
    Pattern n(m);
    int total = 0;
    for (auto& x : n) total += (x = static_cast<int>(rng.uniform() * 3));
    if (total > 7) continue;
    EXPECT_LE(rel_err(lhaf_sieve(b, gb, n), lhaf_repeated_oracle(b, gb, n, n)), 1e-9);
  }
}

TEST(LhafSieve, scaling_law) {
  NormalStream rng(12);
  CMatrix a = random_symmetric(6, rng);
  CVector g = random_vector(6, rng);
  CVector c = random_vector(6, rng);
  CMatrix ac = c.asDiagonal() * a * c.asDiagonal();
  CVector gc = c.cwiseProduct(g);
  Complex prod = 1;
  for (int i = 0; i < 6; ++i) prod *= c(i);
  EXPECT_LE(rel_err(lhaf_sieve(ac, gc, {1, 1, 1}), prod * lhaf_sieve(a, g, {1, 1, 1})), 1e-9);
}

TEST(LhafSieve, permutation_invariance) {
  NormalStream rng(13);
  CMatrix a = random_symmetric(6, rng);
  CVector g = random_vector(6, rng);
  std::vector<Eigen::Index> perm{2, 0, 1, 5, 3, 4};
  CMatrix ap = a(perm, perm);
  CVector gp = g(perm);
  EXPECT_LE(rel_err(lhaf_sieve(ap, gp, {2, 1, 1}), lhaf_sieve(a, g, {1, 1, 2})), 1e-9);
}

TEST(LhafSieve, node_independence) {
  NormalStream rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a = random_symmetric(6, rng);
    CVector g = random_vector(6, rng);
    Pattern n{1 + trial % 3, trial % 2, 2};
    Complex base = lhaf_sieve(a, g, n);
    EXPECT_LE(rel_err(lhaf_sieve(a, g, n, unit_nodes(n)), base), 1e-8);
    EXPECT_LE(rel_err(lhaf_sieve(a, g, n, wide_nodes(n)), base), 1e-8);
    Partition part{{0, 1}, {2}};
    Pattern b{2, 1};
    Complex blocked = blocked_lhaf(a, g, part, b);
    EXPECT_LE(rel_err(blocked_lhaf(a, g, part, b, unit_nodes(b)), blocked), 1e-8);
    EXPECT_LE(rel_err(blocked_lhaf(a, g, part, b, wide_nodes(b)), blocked), 1e-8);
  }
}

TEST(LhafSieve, direct_sum_multiplicativity) {
  NormalStream rng(15);
  CMatrix a1 = random_symmetric(4, rng), a2 = random_symmetric(2, rng);
  CVector g1 = random_vector(4, rng), g2 = random_vector(2, rng);
  // Modes (0,1) from a1 and mode 2 from a2, interleaved into the doubled ordering.
  CMatrix a = CMatrix::Zero(6, 6);
  CVector g(6);
  std::vector<Eigen::Index> i1{0, 1, 3, 4}, i2{2, 5};
  a(i1, i1) = a1;
  a(i2, i2) = a2;
  g(i1) = g1;
  g(i2) = g2;
  EXPECT_LE(rel_err(lhaf_sieve(a, g, {1, 2, 2}), lhaf_sieve(a1, g1, {1, 2}) * lhaf_sieve(a2, g2, {2})),
            1e-9);
}

TEST(BlockedLhaf, reductions) {
  NormalStream rng(16);
  CMatrix a = random_symmetric(6, rng);
  CVector g = random_vector(6, rng);
  Partition single{{0}, {1}, {2}};
  EXPECT_LE(rel_err(blocked_lhaf(a, g, single, {1, 0, 2}), lhaf_sieve(a, g, {1, 0, 2})), 1e-10);
  Partition one{{0, 1, 2}};
  EXPECT_LE(rel_err(blocked_lhaf(a, g, one, {4}), 24.0 * f_n(a, g, 4)), 1e-10);
  Partition mixed{{0, 1}, {2}};
  EXPECT_LE(rel_err(blocked_lhaf(a, g, mixed, {2, 1}), blocked_lhaf_combinatorial(a, g, mixed, {2, 1})),
            1e-9);
  EXPECT_THROW(blocked_lhaf(a, g, {{0, 1}, {1, 2}}, {1, 1}), Error);
  EXPECT_THROW(blocked_lhaf(a, g, mixed, {1}), Error);
}

TEST(BlockedLhaf, random_partitions_match_combinatorial_sum) {
  NormalStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + trial % 3;
    CMatrix a = random_symmetric(2 * m, rng);
    CVector g = random_vector(2 * m, rng);
    Partition part;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = static_cast<std::size_t>(rng.uniform() * (part.size() + 1));
      if (j >= part.size()) part.emplace_back();
      part[std::min(j, part.size() - 1)].push_back(i);
    }
    Pattern b;
    int total = 0;
    for (std::size_t j = 0; j < part.size(); ++j) {
      b.push_back(static_cast<int>(rng.uniform() * 3));
      total += b.back();
    }
    if (total > 6) continue;
    EXPECT_LE(rel_err(blocked_lhaf(a, g, part, b), blocked_lhaf_combinatorial(a, g, part, b)), 1e-9);
    EXPECT_LE(rel_err(blocked_lhaf_combinatorial(a, g, part, b, FineLhaf::kSieve),
                      blocked_lhaf_combinatorial(a, g, part, b)),
              1e-9);
  }
}
