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


#include "blockhaf/gaussian.hpp"

#include <gtest/gtest.h>

#include "blockhaf/linalg.hpp"
#include "test_util.hpp"

using namespace blockhaf;
using namespace blockhaf::testing;

namespace {

CMatrix balanced_splitter() {
  CMatrix u(2, 2);
  u << 1, Complex(0, 1), Complex(0, 1), 1;
  return u / std::sqrt(2.0);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Gaussian, vacuum_has_zero_adjacency) {
  auto rep = to_adjacency(vacuum_state({3, 1}));
  EXPECT_LE(max_abs(rep.a), 1e-15);
  EXPECT_LE(rep.gamma.norm(), 1e-15);
  EXPECT_NEAR(rep.vacuum_prob.real(), 1.0, 1e-15);
}

TEST(Gaussian, single_mode_squeezer) {
  const double r = 0.7, phi = 0.4;
  auto s = from_squeezing({std::polar(r, phi)}, {1, 1});
  EXPECT_NEAR(s.husimi_cov(0, 0).real(), 1 + std::pow(std::sinh(r), 2), 1e-13);
  EXPECT_LE(std::abs(s.husimi_cov(0, 1) - std::polar(std::sinh(r) * std::cosh(r), phi)), 1e-13);
  auto rep = to_adjacency(s);
  EXPECT_NEAR(rep.vacuum_prob.real(), 1 / std::cosh(r), 1e-13);
  EXPECT_NEAR(rep.vacuum_prob.imag(), 0.0, 1e-15);
  // Only the a^dag a^dag entry survives.
  EXPECT_LE(std::abs(std::abs(rep.a(0, 0)) - std::tanh(r)), 1e-13);
  EXPECT_LE(std::abs(rep.a(0, 1)), 1e-13);
}

TEST(Gaussian, two_squeezers_on_a_splitter_make_a_pair_state) {
  const double r = 0.5;
  auto s = apply_channel(from_squeezing({r, r}, {2, 1}), balanced_splitter());
  auto rep = to_adjacency(s);
  EXPECT_NEAR(rep.vacuum_prob.real(), 1 / std::pow(std::cosh(r), 2), 1e-13);
  // No single-mode squeezing left; the cross term has modulus tanh r.
  EXPECT_LE(std::abs(rep.a(0, 0)) + std::abs(rep.a(1, 1)), 1e-13);
  EXPECT_NEAR(std::abs(rep.a(0, 1)), std::tanh(r), 1e-13);
}

TEST(Gaussian, coherent_vacuum_probability) {
  const Complex alpha(0.6, -0.3);
  auto rep = to_adjacency(displace(vacuum_state({1, 1}), {alpha}));
  EXPECT_NEAR(rep.vacuum_prob.real(), std::exp(-std::norm(alpha)), 1e-14);
  EXPECT_LE(max_abs(rep.a), 1e-15);
}

TEST(Gaussian, loss_scales_mean_photon_number) {
  const double r = 0.9, eta = 0.37;
  auto s = apply_channel(from_squeezing({r}, {1, 1}), CMatrix::Constant(1, 1, std::sqrt(eta)));
  EXPECT_NEAR(s.husimi_cov(0, 0).real() - 1, eta * std::pow(std::sinh(r), 2), 1e-13);
  s.validate();
}

TEST(Gaussian, displacement_commutes_with_channel) {
  NormalStream rng(21);
  auto base = random_state(3, rng, false);
  CMatrix t = random_subunitary(3, rng);
  std::vector<Complex> alpha{{0.2, 0.1}, {-0.4, 0.3}, {0.0, 0.5}};
  CVector a(3);
  for (int i = 0; i < 3; ++i) a(i) = alpha[i];
  // Amplitudes follow the first half of W = t^* (+) t.
  CVector ta = t.conjugate() * a;
  auto lhs = apply_channel(displace(base, alpha), t);
  auto rhs = displace(apply_channel(base, t), {ta(0), ta(1), ta(2)});
  EXPECT_LE(max_abs(lhs.husimi_cov - rhs.husimi_cov), 1e-12);
  EXPECT_LE((lhs.means - rhs.means).norm(), 1e-12);
}

TEST(Gaussian, unitary_keeps_vacuum_probability_of_undisplaced_state) {
  NormalStream rng(4);
  auto s = from_squeezing({0.3, 0.5, 0.2}, {3, 1});
  CMatrix u = haar_unitary(3, 99);
  EXPECT_NEAR(to_adjacency(apply_channel(s, u)).vacuum_prob.real(), to_adjacency(s).vacuum_prob.real(),
              1e-12);
}

TEST(Gaussian, adjacency_round_trip) {
  NormalStream rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_state(1 + trial % 4, rng, trial % 2 == 0);
    auto rep = to_adjacency(s);
    EXPECT_LE(symmetric_defect(rep.a), 1e-12);
    auto back = from_adjacency(rep);
    EXPECT_LE(max_abs(back.husimi_cov - s.husimi_cov), 1e-10);
    EXPECT_LE((back.means - s.means).norm(), 1e-10);
    EXPECT_LE(std::abs(vacuum_probability(rep.a, rep.gamma) - rep.vacuum_prob), 1e-12);
  }
}

TEST(Gaussian, marginal_keeps_selected_blocks) {
  NormalStream rng(13);
  auto s = random_state(3, rng, true);
  auto m = marginal(s, {0, 2});
  EXPECT_EQ(m.modes(), 2u);
  EXPECT_EQ(m.husimi_cov(0, 1), s.husimi_cov(0, 2));
  EXPECT_EQ(m.husimi_cov(2, 3), s.husimi_cov(3, 5));
  EXPECT_EQ(m.means(3), s.means(5));
  m.validate();
}

TEST(Gaussian, expand_channel_acts_per_internal_mode) {
  NormalStream rng(2);
  CMatrix t = random_subunitary(2, rng);
  CMatrix big = expand_channel(t, 3);
  ASSERT_EQ(big.rows(), 6);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 3; ++l)
        for (int l2 = 0; l2 < 3; ++l2)
          EXPECT_EQ(big(k * 3 + l, j * 3 + l2), l == l2 ? t(k, j) : Complex(0));
}

TEST(Gaussian, internal_modes_do_not_mix) {
  auto s = impure_source({0.8, 0.6}, 0.7);
  auto out = apply_channel(s, expand_channel(haar_unitary(2, 5), 2));
  CMatrix xa = swap_row_halves(to_adjacency(out).a);
  const Eigen::Index n = 4;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i % 2 != j % 2) {
        EXPECT_LE(std::abs(xa(i, j)) + std::abs(xa(i + n, j)) + std::abs(xa(i, j + n)), 1e-13);
      }
}

TEST(Gaussian, impure_source_secondary_squeezing) {
  const double xi = 0.9, p = 0.8;
  auto s = impure_source({xi}, p);
  EXPECT_EQ(s.layout.externals, 1u);
  EXPECT_EQ(s.layout.internals, 2u);
  auto rep = to_adjacency(s);
  const double t1 = std::tanh(xi);
  const double t2 = std::sqrt((1 - p) / p) * t1;
  EXPECT_NEAR(std::abs(rep.a(0, 0)), t1, 1e-13);
  EXPECT_NEAR(std::abs(rep.a(1, 1)), t2, 1e-13);
  auto pure = to_adjacency(impure_source({xi}, 1.0));
  EXPECT_LE(std::abs(pure.a(1, 1)), 1e-15);
  EXPECT_THROW(impure_source({xi}, 0.0), Error);
  EXPECT_THROW(impure_source({3.0}, 0.2), Error);
}

TEST(Gaussian, lowdin_orthogonal_internal_states) {
  OverlapModel model{CMatrix::Identity(2, 2), {0.5, 0.8}};
  auto table = lowdin_internal_model(model);
  EXPECT_NEAR(table.values(0, 0), 0.5, 1e-13);
  EXPECT_NEAR(table.values(1, 1), 0.8, 1e-13);
  EXPECT_NEAR(table.values(0, 1), 0.0, 1e-13);
  auto s = lowdin_state(model);
  EXPECT_EQ(s.layout.internals, 2u);
  auto rep = to_adjacency(s);
  EXPECT_NEAR(std::abs(rep.a(0, 0)), std::tanh(0.5), 1e-12);
  EXPECT_NEAR(std::abs(rep.a(3, 3)), std::tanh(0.8), 1e-12);
  EXPECT_NEAR(rep.vacuum_prob.real(), 1 / (std::cosh(0.5) * std::cosh(0.8)), 1e-12);
}

TEST(Gaussian, lowdin_rank_one_rows) {
  OverlapModel model{CMatrix::Ones(2, 2), {0.5, 0.8}};
  auto s = lowdin_state(model);
  auto rep = to_adjacency(s);
  EXPECT_NEAR(rep.vacuum_prob.real(), 1 / (std::cosh(0.5) * std::cosh(0.8)), 1e-12);
  CMatrix o(2, 2);
  o << 1, 0.6, 0.6, 1;
  auto table = lowdin_internal_model({o, {0.5, 0.8}});
  for (int k = 0; k < 2; ++k) {
    // Rank one: one nonzero value per row, equal to the squeezing.
    EXPECT_NEAR(table.values.row(k).maxCoeff(), k == 0 ? 0.5 : 0.8, 1e-12);
    EXPECT_NEAR(table.values.row(k).minCoeff(), 0.0, 1e-12);
  }
}

TEST(Gaussian, rejects_invalid_input) {
  try {
    apply_channel(vacuum_state({1, 1}), CMatrix::Constant(1, 1, 1.2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSubunitary);
  }
  CMatrix cov = CMatrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(from_covariance(cov, CVector::Zero(2), {1, 1}), Error);
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(from_covariance(bad, CVector::Zero(2), {1, 1}), Error);
}
