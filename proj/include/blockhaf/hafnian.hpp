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

#include <optional>
#include <vector>

#include "blockhaf/combinatorics.hpp"
#include "blockhaf/error.hpp"
#include "blockhaf/linalg.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

inline constexpr Eigen::Index kOracleMaxDim = 14;

namespace detail {

template <typename Scalar>
Scalar spm_sum(const Matrix<Scalar>& a, const Vector<Scalar>& gamma, unsigned used, Eigen::Index n) {
  Eigen::Index i = 0;
  while (i < n && (used >> i & 1u)) ++i;
  if (i == n) return Scalar(1);
  used |= 1u << i;
  Scalar total = gamma(i) * spm_sum(a, gamma, used, n);
  for (Eigen::Index j = i + 1; j < n; ++j) {
    if (used >> j & 1u) continue;
    if (a(i, j) == Scalar(0)) continue;
    total += a(i, j) * spm_sum(a, gamma, used | 1u << j, n);
  }
  return total;
}

}  // namespace detail

// Sum over single-pair matchings; loops weighted by gamma, the diagonal of a
// is ignored.
template <typename Scalar>
Scalar lhaf_oracle(const Matrix<Scalar>& a, const Vector<Scalar>& gamma) {
  const Eigen::Index n = a.rows();
  require(a.cols() == n && gamma.size() == n, ErrorCode::kLengthMismatch,
          "matrix and loop vector sizes disagree");
  require(n % 2 == 0, ErrorCode::kOddDimension, "loop hafnian needs an even dimension");
  require(n <= kOracleMaxDim, ErrorCode::kTooLarge, "matching enumeration limited to 14x14");
  return detail::spm_sum(a, gamma, 0u, n);
}

// Rows and columns of A_{n (+) m}: n_k copies of k, then m_k copies of k + M.
std::vector<Eigen::Index> repeat_indices(const Pattern& n, const Pattern& m);

// lhaf(A_{n (+) m}, gamma_{n (+) m}) by matching enumeration. An odd
// selection gets one extra vertex with loop weight 1 and no edges.
Complex lhaf_repeated_oracle(const CMatrix& a, const CVector& gamma, const Pattern& n,
                             const Pattern& m);

// Coefficient of eta^N in exp(sum_k g_k eta^k), with g(k-1) = g_k and N = n.
template <typename Scalar>
Vector<Scalar> f_all(const Vector<Scalar>& g, int n) {
  require(n >= 0 && n <= g.size(), ErrorCode::kLengthMismatch, "need g_1..g_N");
  Vector<Scalar> c = Vector<Scalar>::Zero(n + 1);
  c(0) = Scalar(1);
  Vector<Scalar> prev;
  for (int i = 1; i <= n; ++i) {
    prev = c;
    Scalar p(1);
    for (int j = 1; i * j <= n; ++j) {
      p *= g(i - 1) / static_cast<typename Eigen::NumTraits<Scalar>::Real>(j);
      const int shift = i * j;
      for (int k = shift; k <= n; ++k) c(k) += prev(k - shift) * p;
    }
  }
  return c;
}

template <typename Scalar>
Scalar f_from_g(const Vector<Scalar>& g) {
  const int n = static_cast<int>(g.size());
  Scalar out = f_all(g, n)(n);
  require(std::isfinite(std::abs(out)), ErrorCode::kNonFinite, "f_N overflow");
  return out;
}

enum class TraceMethod {
  kRepeatedProduct,  // running matrix power
  kEigenvalues,      // power sums of eigenvalues, matrix-vector products for gamma
};

// g_1..g_nmax with XA -> D(z)XA and X gamma -> D(z) X gamma when a scale is
// given.
CVector g_coefficients(const CMatrix& a, const CVector& gamma, int nmax,
                       const std::optional<CVector>& scale = std::nullopt,
                       TraceMethod method = TraceMethod::kRepeatedProduct);

// g_k = tr(P^k)/(2k) + left^T P^(k-1) right / 2 for a general operator P.
CVector g_from_operator(const CMatrix& p, const CVector& left, const CVector& right, int nmax,
                        TraceMethod method);

Complex f_n(const CMatrix& a, const CVector& gamma, int n,
            const std::optional<CVector>& scale = std::nullopt,
            TraceMethod method = TraceMethod::kRepeatedProduct);

// Evaluates f_N(A, gamma, z) for many z with XA and X gamma cached.
class FEvaluator {
 public:
  FEvaluator(const CMatrix& a, const CVector& gamma, int n,
             TraceMethod method = TraceMethod::kEigenvalues);

  // z has one entry per mode.
  Complex operator()(const CVector& z) const;
  CVector g(const CVector& z) const;
  int order() const { return n_; }

 private:
  CMatrix xa_;
  CVector gamma_;
  CVector xgamma_;
  bool has_gamma_;
  int n_;
  TraceMethod method_;
};

// Points v_j + m (u_j - v_j), m = 0..n_j, for every sieve variable.
struct SieveNodes {
  std::vector<Complex> u;
  std::vector<Complex> v;
};

// Equally spaced points from -n_j to n_j (step 2); n_j = 0 pins to 0.
SieveNodes default_nodes(const Pattern& counts);
// u = 1, v = 0 (Ryser-type).
SieveNodes unit_nodes(const Pattern& counts);
// u = n_j, v = -n_j taken literally.
SieveNodes wide_nodes(const Pattern& counts);

struct SieveWeights {
  std::vector<std::vector<Complex>> points;
  std::vector<std::vector<double>> coefficients;
  std::vector<Complex> scale;  // (u - v)^-k per variable
};

SieveWeights sieve_weights(const Pattern& counts, const SieveNodes& nodes);

// Applies prod_j D^(n_j) in the grid variables to a polynomial given by
// evaluate(z), z holding one node per variable. Grid order is lexicographic,
// last variable fastest, summed left to right.
template <typename Fn>
Complex sieve(Fn&& evaluate, const Pattern& counts, const SieveNodes& nodes) {
  const SieveWeights w = sieve_weights(counts, nodes);
  const std::size_t vars = counts.size();
  Complex prefactor(1.0);
  for (const Complex& s : w.scale) prefactor *= s;
  CVector z(static_cast<Eigen::Index>(vars));
  std::vector<int> m(vars, 0);
  Complex total(0.0);
  for (;;) {
    double coef = 1.0;
    for (std::size_t j = 0; j < vars; ++j) {
      z(static_cast<Eigen::Index>(j)) = w.points[j][m[j]];
      coef *= w.coefficients[j][m[j]];
    }
    total += coef * evaluate(static_cast<const CVector&>(z));
    std::size_t i = vars;
    for (;;) {
      if (i == 0) return total * prefactor;
      --i;
      if (m[i] < counts[i]) {
        ++m[i];
        break;
      }
      m[i] = 0;
    }
  }
}

Complex lhaf_sieve(const CMatrix& a, const CVector& gamma, const Pattern& pattern,
                   const std::optional<SieveNodes>& nodes = std::nullopt);

Complex blocked_lhaf(const CMatrix& a, const CVector& gamma, const Partition& partition,
                     const Pattern& b, const std::optional<SieveNodes>& nodes = std::nullopt);

enum class FineLhaf { kOracle, kSieve };

// Sum over compatible fine patterns of lhaf(A_{n (+) n}) prod b_j! / prod n_i!.
Complex blocked_lhaf_combinatorial(const CMatrix& a, const CVector& gamma,
                                   const Partition& partition, const Pattern& b,
                                   FineLhaf method = FineLhaf::kOracle);

}  // namespace blockhaf
