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

#include <string>

#include <Eigen/Eigenvalues>

namespace blockhaf {

std::vector<Eigen::Index> repeat_indices(const Pattern& n, const Pattern& m) {
  require(n.size() == m.size(), ErrorCode::kLengthMismatch, "patterns differ in length");
  const Eigen::Index modes = static_cast<Eigen::Index>(n.size());
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < modes; ++k) {
    require(n[k] >= 0 && m[k] >= 0, ErrorCode::kDomainError, "negative photon count");
    for (int c = 0; c < n[k]; ++c) idx.push_back(k);
  }
  for (Eigen::Index k = 0; k < modes; ++k) {
    for (int c = 0; c < m[k]; ++c) idx.push_back(k + modes);
  }
  return idx;
}

Complex lhaf_repeated_oracle(const CMatrix& a, const CVector& gamma, const Pattern& n,
                             const Pattern& m) {
  require(static_cast<Eigen::Index>(2 * n.size()) == a.rows(), ErrorCode::kLengthMismatch,
          "pattern length must match the number of modes");
  auto idx = repeat_indices(n, m);
  const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index dim = k + k % 2;
  CMatrix sub = CMatrix::Zero(dim, dim);
  CVector loops = CVector::Zero(dim);
  sub.topLeftCorner(k, k) = a(idx, idx);
  loops.head(k) = gamma(idx);
  if (dim > k) {
    sub(k, k) = 1.0;
    loops(k) = 1.0;
  }
  return lhaf_oracle(sub, loops);
}

CVector g_from_operator(const CMatrix& p, const CVector& left, const CVector& right, int nmax,
                        TraceMethod method) {
  CVector g = CVector::Zero(nmax);
  if (nmax <= 0) return g;
  const bool with_vector = right.size() > 0 && !right.isZero(0.0) && !left.isZero(0.0);
  CVector w = right;
  auto add_vector_terms = [&] {
    if (!with_vector) return;
    for (int k = 1; k <= nmax; ++k) {
      g(k - 1) += 0.5 * left.cwiseProduct(w).sum();
      if (k < nmax) w = (p * w).eval();
    }
  };
  if (method == TraceMethod::kEigenvalues && p.rows() > 0) {
    Eigen::ComplexEigenSolver<CMatrix> solver(p, false);
    if (solver.info() == Eigen::Success) {
      const CVector& lam = solver.eigenvalues();
      CVector pw = lam;
      for (int k = 1; k <= nmax; ++k) {
        g(k - 1) = pw.sum() / (2.0 * k);
        if (k < nmax) pw = pw.cwiseProduct(lam);
      }
      add_vector_terms();
      require(all_finite(g), ErrorCode::kNonFinite, "g coefficient overflow");
      return g;
    }
  }
  CVector traces = power_traces(p, nmax);
  for (int k = 1; k <= nmax; ++k) g(k - 1) = traces(k - 1) / (2.0 * k);
  add_vector_terms();
  require(all_finite(g), ErrorCode::kNonFinite, "g coefficient overflow");
  return g;
}

namespace {

CVector doubled(const CVector& z) {
  CVector d(2 * z.size());
  d << z, z;
  return d;
}

}  // namespace

CVector g_coefficients(const CMatrix& a, const CVector& gamma, int nmax,
                       const std::optional<CVector>& scale, TraceMethod method) {
  require(a.rows() == a.cols() && gamma.size() == a.rows(), ErrorCode::kLengthMismatch,
          "matrix and loop vector sizes disagree");
  require(nmax >= 1, ErrorCode::kDomainError, "nmax must be positive");
  require_finite(a, "adjacency matrix");
  require_finite(gamma, "loop vector");
  CMatrix p = swap_row_halves(a);
  CVector right = swap_row_halves(gamma);
  if (scale) {
    require(2 * scale->size() == a.rows(), ErrorCode::kLengthMismatch, "one scale per mode");
    CVector d = doubled(*scale);
    p = d.asDiagonal() * p;
    right = d.cwiseProduct(right);
  }
  return g_from_operator(p, gamma, right, nmax, method);
}

Complex f_n(const CMatrix& a, const CVector& gamma, int n, const std::optional<CVector>& scale,
            TraceMethod method) {
  require(n >= 0, ErrorCode::kDomainError, "negative order");
  if (n == 0) return 1.0;
  return f_from_g(g_coefficients(a, gamma, n, scale, method));
}

FEvaluator::FEvaluator(const CMatrix& a, const CVector& gamma, int n, TraceMethod method)
    : xa_(swap_row_halves(a)),
      gamma_(gamma),
      xgamma_(swap_row_halves(gamma)),
      has_gamma_(!gamma.isZero(0.0)),
      n_(n),
      method_(method) {
  require(a.rows() == a.cols() && gamma.size() == a.rows(), ErrorCode::kLengthMismatch,
          "matrix and loop vector sizes disagree");
  require_finite(a, "adjacency matrix");
  require_finite(gamma, "loop vector");
}

CVector FEvaluator::g(const CVector& z) const {
  CVector d = doubled(z);
  CMatrix p = d.asDiagonal() * xa_;
  CVector right = has_gamma_ ? CVector(d.cwiseProduct(xgamma_)) : CVector();
  return g_from_operator(p, gamma_, right, n_, method_);
}

Complex FEvaluator::operator()(const CVector& z) const {
  if (n_ == 0) return 1.0;
  return f_from_g(g(z));
}

SieveNodes default_nodes(const Pattern& counts) {
  SieveNodes nodes;
  for (int n : counts) {
    nodes.v.emplace_back(-n);
    nodes.u.emplace_back(n == 0 ? 1.0 : 2.0 - n);
  }
  return nodes;
}

SieveNodes unit_nodes(const Pattern& counts) {
  SieveNodes nodes;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    nodes.u.emplace_back(1.0);
    nodes.v.emplace_back(0.0);
  }
  return nodes;
}

SieveNodes wide_nodes(const Pattern& counts) {
  SieveNodes nodes;
  for (int n : counts) {
    nodes.u.emplace_back(n == 0 ? 1.0 : n);
    nodes.v.emplace_back(-n);
  }
  return nodes;
}

SieveWeights sieve_weights(const Pattern& counts, const SieveNodes& nodes) {
  require(nodes.u.size() == counts.size() && nodes.v.size() == counts.size(),
          ErrorCode::kLengthMismatch, "one node pair per sieve variable");
  SieveWeights w;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const int k = counts[j];
    require(k >= 0, ErrorCode::kDomainError, "negative count");
    const Complex h = nodes.u[j] - nodes.v[j];
    require(h != Complex(0.0), ErrorCode::kDomainError, "sieve nodes must differ");
    std::vector<Complex> pts;
    std::vector<double> coef;
    for (int m = 0; m <= k; ++m) {
      pts.push_back(nodes.v[j] + static_cast<double>(m) * h);
      coef.push_back(((k - m) % 2 ? -1.0 : 1.0) * binomial(k, m));
    }
    w.points.push_back(std::move(pts));
    w.coefficients.push_back(std::move(coef));
    w.scale.push_back(std::pow(h, -k));
  }
  return w;
}

namespace {

SieveNodes select_nodes(const SieveNodes& nodes, const std::vector<std::size_t>& keep) {
  SieveNodes out;
  for (std::size_t j : keep) {
    out.u.push_back(nodes.u[j]);
    out.v.push_back(nodes.v[j]);
  }
  return out;
}

std::vector<Eigen::Index> doubled_indices(const std::vector<Eigen::Index>& modes, Eigen::Index m) {
  std::vector<Eigen::Index> idx = modes;
  for (Eigen::Index k : modes) idx.push_back(k + m);
  return idx;
}

}  // namespace

Complex lhaf_sieve(const CMatrix& a, const CVector& gamma, const Pattern& pattern,
                   const std::optional<SieveNodes>& nodes) {
  const Eigen::Index m = a.rows() / 2;
  require(a.rows() == a.cols() && gamma.size() == a.rows() && a.rows() % 2 == 0,
          ErrorCode::kLengthMismatch, "matrix and loop vector sizes disagree");
  require(static_cast<Eigen::Index>(pattern.size()) == m, ErrorCode::kLengthMismatch,
          "pattern length must match the number of modes");
  std::vector<std::size_t> active;
  std::vector<Eigen::Index> modes;
  Pattern counts;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    require(pattern[j] >= 0, ErrorCode::kDomainError, "negative count");
    if (pattern[j] > 0) {
      active.push_back(j);
      modes.push_back(static_cast<Eigen::Index>(j));
      counts.push_back(pattern[j]);
    }
  }
  if (active.empty()) return 1.0;
  const int n = pattern_total(counts);
  auto idx = doubled_indices(modes, m);
  FEvaluator f(a(idx, idx), gamma(idx), n);
  SieveNodes grid = nodes ? select_nodes(*nodes, active) : default_nodes(counts);
  return sieve([&](const CVector& z) { return f(z); }, counts, grid);
}

Complex blocked_lhaf(const CMatrix& a, const CVector& gamma, const Partition& partition,
                     const Pattern& b, const std::optional<SieveNodes>& nodes) {
  const Eigen::Index m = a.rows() / 2;
  require(a.rows() == a.cols() && gamma.size() == a.rows() && a.rows() % 2 == 0,
          ErrorCode::kLengthMismatch, "matrix and loop vector sizes disagree");
  validate_partition(partition, static_cast<std::size_t>(m));
  require(partition.size() == b.size(), ErrorCode::kPartitionMismatch,
          "one count per block required");
  std::vector<std::size_t> active;
  std::vector<Eigen::Index> modes;
  std::vector<Eigen::Index> owner;  // active variable of each kept mode
  Pattern counts;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    require(b[j] >= 0, ErrorCode::kDomainError, "negative count");
    if (b[j] == 0) continue;
    for (std::size_t i : partition[j]) {
      modes.push_back(static_cast<Eigen::Index>(i));
      owner.push_back(static_cast<Eigen::Index>(active.size()));
    }
    active.push_back(j);
    counts.push_back(b[j]);
  }
  if (active.empty()) return 1.0;
  const int n = pattern_total(counts);
  auto idx = doubled_indices(modes, m);
  FEvaluator f(a(idx, idx), gamma(idx), n);
  SieveNodes grid = nodes ? select_nodes(*nodes, active) : default_nodes(counts);
  CVector z(static_cast<Eigen::Index>(modes.size()));
  return sieve(
      [&](const CVector& w) {
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = w(owner[i]);
        return f(z);
      },
      counts, grid);
}

Complex blocked_lhaf_combinatorial(const CMatrix& a, const CVector& gamma,
                                   const Partition& partition, const Pattern& b,
                                   FineLhaf method) {
  const std::size_t m = static_cast<std::size_t>(a.rows() / 2);
  validate_partition(partition, m);
  Complex total(0.0);
  for_each_compatible(partition, b, m, [&](const Pattern& n) {
    Complex value = method == FineLhaf::kOracle ? lhaf_repeated_oracle(a, gamma, n, n)
                                                : lhaf_sieve(a, gamma, n);
    total += value / factorial_product(n);
  });
  return total * factorial_product(b);
}

}  // namespace blockhaf
