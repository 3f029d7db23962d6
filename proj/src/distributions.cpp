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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "blockhaf/combinatorics.hpp"
#include "blockhaf/error.hpp"
#include "blockhaf/hafnian.hpp"
#include "blockhaf/linalg.hpp"

namespace blockhaf {

namespace {
std::atomic<double> g_imaginary_tolerance{1e-9};
}  // namespace

double imaginary_tolerance() { return g_imaginary_tolerance.load(); }

void set_imaginary_tolerance(double tol) {
  require(tol > 0 && std::isfinite(tol), ErrorCode::kDomainError, "tolerance must be positive");
  g_imaginary_tolerance.store(tol);
}

double real_probability(Complex v) {
  require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorCode::kNonFinite,
          "probability is not finite");
  require(std::abs(v.imag()) <= imaginary_tolerance() * (1.0 + std::abs(v)), ErrorCode::kNonFinite,
          "probability has a large imaginary part");
  return v.real();
}

double prob_fine(const AdjacencyRep& rep, const Pattern& n) {
  require(n.size() == rep.modes(), ErrorCode::kLengthMismatch,
          "pattern length must equal the number of modes");
  return real_probability(rep.vacuum_prob * lhaf_sieve(rep.a, rep.gamma, n) / factorial_product(n));
}

double prob_total(const AdjacencyRep& rep, const std::vector<std::size_t>& subset, int n) {
  require(!subset.empty(), ErrorCode::kDomainError, "subset must not be empty");
  require(n >= 0, ErrorCode::kDomainError, "negative photon number");
  AdjacencyRep reduced = reduce_modes(rep, subset);
  return real_probability(rep.vacuum_prob * f_n(reduced.a, reduced.gamma, n));
}

Distribution total_distribution(const AdjacencyRep& rep, int nmax, double tail) {
  const bool automatic = nmax < 0;
  int order = automatic ? 16 : nmax;
  for (;;) {
    Distribution dist;
    CVector f = CVector::Ones(1);
    if (order > 0) f = f_all(g_coefficients(rep.a, rep.gamma, order), order);
    double sum = 0.0;
    for (int k = 0; k <= order; ++k) {
      const double p = real_probability(rep.vacuum_prob * f(k));
      dist.raw.push_back(p);
      dist.probabilities.push_back(std::max(p, 0.0));
      sum += dist.probabilities.back();
    }
    dist.deficit = 1.0 - sum;
    if (!automatic || dist.deficit < tail || order >= 4096) return dist;
    order *= 2;
  }
}

double prob_coarse(const AdjacencyRep& rep, const CoarsePattern& cp) {
  validate_partition(cp.partition, rep.modes());
  require(cp.partition.size() == cp.counts.size(), ErrorCode::kPartitionMismatch,
          "one count per block required");
  return real_probability(rep.vacuum_prob * blocked_lhaf(rep.a, rep.gamma, cp.partition, cp.counts) /
                          factorial_product(cp.counts));
}

double prob_external(const AdjacencyRep& rep, const Pattern& n) {
  require(rep.layout.total() == rep.modes(), ErrorCode::kLayoutMismatch,
          "layout does not describe the rep");
  require(n.size() == rep.layout.externals, ErrorCode::kLayoutMismatch,
          "one count per external mode required");
  return prob_coarse(rep, {rep.layout.external_blocks(), n});
}

namespace {

struct RankTwoBlock {
  RVector diag;   // B_ii + B_{i+M,i+M}
  RMatrix weight; // sum of |B|^2 over the four quadrants
};

RankTwoBlock prepare_block(const CMatrix& b, Eigen::Index m) {
  require(b.rows() == 2 * m && b.cols() == 2 * m, ErrorCode::kLengthMismatch,
          "every block must be 2M x 2M");
  require_finite(b, "block");
  require(hermitian_defect(b) <= 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff()),
          ErrorCode::kNotHermitian, "block is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
  RVector mags = eig.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  if (mags.size() > 2) {
    require(mags(2) <= 1e-8 * std::max(mags(0), 1e-300), ErrorCode::kRankViolation,
            "block has rank above two");
  }
  RankTwoBlock out{RVector(m), RMatrix(m, m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    out.diag(i) = (b(i, i) + b(i + m, i + m)).real();
    for (Eigen::Index j = 0; j < m; ++j) {
      out.weight(i, j) = std::norm(b(i, j)) + std::norm(b(i + m, j + m)) + std::norm(b(i, j + m)) +
                         std::norm(b(i + m, j));
    }
  }
  return out;
}

void rank_two_eigenvalues(double t, double f2, double& l1, double& l2) {
  const double disc = std::sqrt(std::max(0.0, 2.0 * f2 - t * t));
  l1 = 0.5 * (t + disc);
  l2 = 0.5 * (t - disc);
}

}  // namespace

double prob_external_distinguishable(const std::vector<CMatrix>& blocks, const Pattern& n) {
  require(!blocks.empty(), ErrorCode::kLengthMismatch, "at least one block required");
  const Eigen::Index m = blocks[0].rows() / 2;
  require(static_cast<Eigen::Index>(n.size()) == m, ErrorCode::kLengthMismatch,
          "one count per external mode required");
  std::vector<RankTwoBlock> prepared;
  for (const CMatrix& b : blocks) prepared.push_back(prepare_block(b, m));
  const std::size_t k_int = prepared.size();

  double log_vac = 0.0;
  for (const auto& b : prepared) {
    const double t = b.diag.sum();
    const double f2 = b.weight.sum();
    const double det = 1.0 - t + 0.5 * (t * t - f2);
    require(det > 0, ErrorCode::kSingularCovariance, "block does not describe a physical state");
    log_vac += 0.5 * std::log(det);
  }
  const int total = pattern_total(n);
  if (total == 0) return std::exp(log_vac);

  std::vector<double> t(k_int, 0.0), f2(k_int, 0.0);
  Pattern mult(n.size(), 0);
  int mult_total = 0;
  double binom = 1.0;
  for (int x : n) binom *= binomial(x, 0);
  CVector g(total);
  std::vector<double> l1(k_int), l2(k_int);

  auto term = [&]() -> double {
    for (std::size_t l = 0; l < k_int; ++l) rank_two_eigenvalues(t[l], f2[l], l1[l], l2[l]);
    std::vector<double> p1(l1), p2(l2);
    for (int k = 1; k <= total; ++k) {
      double s = 0.0;
      for (std::size_t l = 0; l < k_int; ++l) {
        s += p1[l] + p2[l];
        p1[l] *= l1[l];
        p2[l] *= l2[l];
      }
      g(k - 1) = s / (2.0 * k);
    }
    const double sign = (total - mult_total) % 2 ? -1.0 : 1.0;
    return sign * binom * f_from_g(g).real();
  };

  double sum = term();
  GrayCounter gray(n);
  while (gray.next()) {
    const std::size_t i = gray.changed();
    const int delta = gray.delta();
    const int before = mult[i];
    for (std::size_t l = 0; l < k_int; ++l) {
      const auto& b = prepared[l];
      double cross = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) cross += mult[j] * b.weight(j, i);
      f2[l] += delta * (2.0 * cross + delta * b.weight(i, i));
      t[l] += delta * b.diag(i);
    }
    mult[i] += delta;
    mult_total += delta;
    binom *= delta > 0 ? binomial(n[i], before + 1) / binomial(n[i], before)
                       : binomial(n[i], before - 1) / binomial(n[i], before);
    sum += term();
  }
  return std::exp(log_vac) * sum / factorial_product(n);
}

CMatrix distinguishable_block(const GaussianState& internal_state) {
  AdjacencyRep rep = to_adjacency(internal_state);
  CMatrix b = swap_row_halves(rep.a);
  return 0.5 * (b + b.adjoint());
}

AdjacencyRep assemble_distinguishable(const std::vector<CMatrix>& blocks) {
  require(!blocks.empty(), ErrorCode::kLengthMismatch, "at least one block required");
  const Eigen::Index m = blocks[0].rows() / 2;
  const Eigen::Index k = static_cast<Eigen::Index>(blocks.size());
  const Eigen::Index total = m * k;
  CMatrix xa = CMatrix::Zero(2 * total, 2 * total);
  for (Eigen::Index l = 0; l < k; ++l) {
    require(blocks[l].rows() == 2 * m && blocks[l].cols() == 2 * m, ErrorCode::kLengthMismatch,
            "every block must be 2M x 2M");
    for (Eigen::Index hr = 0; hr < 2; ++hr)
      for (Eigen::Index hc = 0; hc < 2; ++hc)
        for (Eigen::Index i = 0; i < m; ++i)
          for (Eigen::Index j = 0; j < m; ++j)
            xa(hr * total + i * k + l, hc * total + j * k + l) = blocks[l](hr * m + i, hc * m + j);
  }
  AdjacencyRep rep;
  rep.a = swap_row_halves(xa);
  rep.a = 0.5 * (rep.a + rep.a.transpose()).eval();
  rep.gamma = CVector::Zero(2 * total);
  rep.layout = {static_cast<std::size_t>(m), static_cast<std::size_t>(k)};
  rep.vacuum_prob = vacuum_probability(rep.a, rep.gamma);
  return rep;
}

double moment_mgf(const GaussianState& state, const std::vector<double>& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(state.modes());
  require(static_cast<Eigen::Index>(t.size()) == n, ErrorCode::kLengthMismatch,
          "one t per mode required");
  CMatrix sigma1 = state.husimi_cov - CMatrix::Identity(2 * n, 2 * n);
  CVector gdiag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) gdiag(k) = gdiag(k + n) = std::expm1(t[k]);
  CMatrix resolvent = CMatrix::Identity(2 * n, 2 * n) - gdiag.asDiagonal() * sigma1;
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  // rcond is scale free; compare 1/|R^-1| against the size of G Sigma1.
  const double norm_r = resolvent.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_gs = (resolvent - CMatrix::Identity(2 * n, 2 * n)).cwiseAbs().colwise().sum().maxCoeff();
  require(lu.rcond() * norm_r > 1e-12 * (1.0 + norm_gs), ErrorCode::kSingularResolvent,
          "I - G Sigma is singular");
  CVector gz = gdiag.cwiseProduct(state.means);
  const Complex exponent = 0.5 * state.means.dot(lu.solve(gz));
  return real_probability(std::exp(exponent) / std::sqrt(lu.determinant()));
}

namespace {

void validate_blocks(const Partition& blocks, std::size_t modes) {
  require(!blocks.empty(), ErrorCode::kPartitionMismatch, "at least one block required");
  std::vector<int> seen(modes, 0);
  for (const auto& block : blocks) {
    require(!block.empty(), ErrorCode::kPartitionMismatch, "empty block");
    for (std::size_t i : block) {
      require(i < modes, ErrorCode::kIndexOutOfRange, "block index out of range");
      require(seen[i]++ == 0, ErrorCode::kPartitionMismatch, "blocks must be disjoint");
    }
  }
}

// Applies D^(1) in every block variable to fn(g), where g are the moment
// coefficients with D(t) Sigma1 in place of XA.
template <typename Reduce>
double multilinear(const GaussianState& state, const Partition& blocks, Reduce reduce) {
  const Eigen::Index n = static_cast<Eigen::Index>(state.modes());
  validate_blocks(blocks, state.modes());
  CMatrix sigma1 = state.husimi_cov - CMatrix::Identity(2 * n, 2 * n);
  const CVector left = state.means.conjugate();
  const int order = static_cast<int>(blocks.size());
  Pattern ones(blocks.size(), 1);
  CVector d(2 * n);
  Complex value = sieve(
      [&](const CVector& w) {
        d.setZero();
        for (std::size_t j = 0; j < blocks.size(); ++j) {
          for (std::size_t i : blocks[j]) {
            d(static_cast<Eigen::Index>(i)) = w(static_cast<Eigen::Index>(j));
            d(static_cast<Eigen::Index>(i) + n) = w(static_cast<Eigen::Index>(j));
          }
        }
        CMatrix p = d.asDiagonal() * sigma1;
        CVector right = d.cwiseProduct(state.means);
        return reduce(g_from_operator(p, left, right, order, TraceMethod::kRepeatedProduct));
      },
      ones, default_nodes(ones));
  return real_probability(value);
}

}  // namespace

double coarse_moment(const GaussianState& state, const Partition& blocks) {
  return multilinear(state, blocks, [](const CVector& g) { return f_from_g(g); });
}

double coarse_cumulant(const GaussianState& state, const Partition& blocks) {
  return multilinear(state, blocks, [](const CVector& g) { return g(g.size() - 1); });
}

std::vector<double> block_cumulants(const GaussianState& state, const std::vector<std::size_t>& block,
                                    int order) {
  require(order >= 1, ErrorCode::kDomainError, "order must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(state.modes());
  validate_blocks({block}, state.modes());
  CVector d = CVector::Zero(2 * n);
  for (std::size_t i : block) {
    d(static_cast<Eigen::Index>(i)) = 1.0;
    d(static_cast<Eigen::Index>(i) + n) = 1.0;
  }
  CMatrix sigma1 = state.husimi_cov - CMatrix::Identity(2 * n, 2 * n);
  CVector g = g_from_operator(d.asDiagonal() * sigma1, state.means.conjugate(),
                              d.cwiseProduct(state.means), order, TraceMethod::kRepeatedProduct);
  // Factorial cumulants k! g_k, then Stirling numbers of the second kind.
  std::vector<double> factorial_cumulant(order + 1, 0.0);
  for (int k = 1; k <= order; ++k) factorial_cumulant[k] = factorial(k) * real_probability(g(k - 1));
  std::vector<std::vector<double>> stirling(order + 1, std::vector<double>(order + 1, 0.0));
  stirling[0][0] = 1.0;
  for (int r = 1; r <= order; ++r)
    for (int k = 1; k <= r; ++k) stirling[r][k] = k * stirling[r - 1][k] + stirling[r - 1][k - 1];
  std::vector<double> out;
  for (int r = 1; r <= order; ++r) {
    double kappa = 0.0;
    for (int k = 1; k <= r; ++k) kappa += stirling[r][k] * factorial_cumulant[k];
    out.push_back(kappa);
  }
  return out;
}

}  // namespace blockhaf
