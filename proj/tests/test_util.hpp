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

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "blockhaf/gaussian.hpp"
#include "blockhaf/rng.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf::testing {

inline Complex random_complex(NormalStream& rng) { return {rng.normal(), rng.normal()}; }

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, NormalStream& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  return m;
}

inline CVector random_vector(Eigen::Index n, NormalStream& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_complex(rng);
  return v;
}

inline CMatrix random_symmetric(Eigen::Index n, NormalStream& rng) {
  CMatrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.transpose());
}

inline CMatrix random_hermitian(Eigen::Index n, NormalStream& rng) {
  CMatrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Rescales singular values into [lo, hi].
inline CMatrix random_subunitary(Eigen::Index n, NormalStream& rng, double lo = 0.3,
                                 double hi = 0.95) {
  CMatrix u = haar_unitary(static_cast<std::size_t>(n), static_cast<std::uint64_t>(rng.uniform() * 1e15));
  CMatrix v = haar_unitary(static_cast<std::size_t>(n), static_cast<std::uint64_t>(rng.uniform() * 1e15));
  RVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = lo + (hi - lo) * rng.uniform();
  return u * s.cast<Complex>().asDiagonal() * v;
}

// Random physical state: squeezers, optional displacements, lossy circuit.
inline GaussianState random_state(std::size_t modes, NormalStream& rng, bool displaced,
                                  double max_squeeze = 0.6) {
  std::vector<Complex> xi;
  for (std::size_t k = 0; k < modes; ++k)
    xi.push_back(std::polar(max_squeeze * rng.uniform(), 6.283185307179586 * rng.uniform()));
  GaussianState s = from_squeezing(xi, {modes, 1});
  if (displaced) {
    std::vector<Complex> alpha;
    for (std::size_t k = 0; k < modes; ++k) alpha.push_back(0.4 * random_complex(rng));
    s = displace(s, alpha);
  }
  return apply_channel(s, random_subunitary(static_cast<Eigen::Index>(modes), rng));
}

// All integer partitions of n as lists of parts.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      visit(parts);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      rec(remaining - p, p);
      parts.pop_back();
    }
  };
  rec(n, n);
}

// Fine patterns with every entry in [0, cutoff] and total <= max_total.
inline void for_each_pattern(std::size_t modes, int cutoff, int max_total,
                             const std::function<void(const Pattern&)>& visit) {
  Pattern p(modes, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == modes) {
      visit(p);
      return;
    }
    for (int x = 0; x <= std::min(cutoff, left); ++x) {
      p[k] = x;
      rec(k + 1, left - x);
    }
    p[k] = 0;
  };
  rec(0, max_total);
}

inline double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

// Single-mode squeezed vacuum: P(2n) = (2n)!/(2^n n!)^2 tanh^(2n) r / cosh r.
inline double squeezed_prob(double r, int n) {
  if (n % 2) return 0.0;
  const int h = n / 2;
  return fact(n) / std::pow(std::pow(2.0, h) * fact(h), 2) * std::pow(std::tanh(r), n) / std::cosh(r);
}

}  // namespace blockhaf::testing
