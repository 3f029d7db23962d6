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


#include "blockhaf/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "blockhaf/error.hpp"
#include "blockhaf/linalg.hpp"
#include "blockhaf/rng.hpp"

namespace blockhaf {

namespace {

struct BatchSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

// Pairwise reduction in batch order.
BatchSums reduce(const std::vector<BatchSums>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  BatchSums a = reduce(parts, lo, mid);
  const BatchSums b = reduce(parts, mid, hi);
  for (std::size_t i = 0; i < a.sum.size(); ++i) {
    a.sum[i] += b.sum[i];
    a.sum_sq[i] += b.sum_sq[i];
  }
  return a;
}

}  // namespace

PPResult pp_estimate(const PPRun& run) {
  const Eigen::Index m = static_cast<Eigen::Index>(run.squeeze.size());
  require(run.samples >= 1, ErrorCode::kDomainError, "samples must be positive");
  require(run.batch_size >= 1, ErrorCode::kDomainError, "batch size must be positive");
  require(run.t.rows() == m && run.t.cols() == m, ErrorCode::kLengthMismatch,
          "transmission must be M x M for M squeezers");
  require_finite(run.t, "transmission");
  require(is_subunitary(run.t), ErrorCode::kNotSubunitary, "transmission has singular value > 1");
  require(!run.n_values.empty(), ErrorCode::kDomainError, "no photon numbers requested");
  for (int n : run.n_values) require(n >= 0, ErrorCode::kDomainError, "negative photon number");
  for (double x : run.squeeze) require(std::isfinite(x), ErrorCode::kNonFinite, "squeezing");
  const int nmax = *std::max_element(run.n_values.begin(), run.n_values.end());

  // alpha = s w1 + i c w2, beta = s w1 - i c w2 gives <alpha beta> = nbar and
  // <alpha^2> = mbar.
  CVector s(m), c(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double nbar = std::pow(std::sinh(run.squeeze[j]), 2);
    const double mbar = 0.5 * std::sinh(2.0 * run.squeeze[j]);
    s(j) = std::sqrt(Complex(0.5 * (nbar + mbar)));
    c(j) = std::sqrt(Complex(0.5 * (nbar - mbar)));
  }

  const std::size_t batches = (run.samples + run.batch_size - 1) / run.batch_size;
  std::vector<BatchSums> parts(batches);
  auto do_batch = [&](std::size_t b) {
    NormalStream rng(run.seed, b);
    BatchSums out{std::vector<double>(nmax + 1, 0.0), std::vector<double>(nmax + 1, 0.0)};
    const std::size_t begin = b * run.batch_size;
    const std::size_t end = std::min(run.samples, begin + run.batch_size);
    CVector alpha(m), beta(m);
    for (std::size_t k = begin; k < end; ++k) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const double w1 = rng.normal();
        const double w2 = rng.normal();
        alpha(j) = s(j) * w1 + Complex(0, 1) * c(j) * w2;
        beta(j) = s(j) * w1 - Complex(0, 1) * c(j) * w2;
      }
      const CVector a2 = run.t * alpha;
      const CVector b2 = run.t * beta;
      const Complex nprime = b2.dot(a2);
      Complex w = std::exp(-nprime);
      require(std::isfinite(w.real()) && std::isfinite(w.imag()), ErrorCode::kNonFinite,
              "positive-P trajectory diverged");
      for (int n = 0; n <= nmax; ++n) {
        if (n > 0) w *= nprime / static_cast<double>(n);
        out.sum[n] += w.real();
        out.sum_sq[n] += w.real() * w.real();
      }
    }
    parts[b] = std::move(out);
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, run.threads)), batches);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t id) {
    try {
      for (std::size_t b = id; b < batches; b += workers) do_batch(b);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const BatchSums total = reduce(parts, 0, batches);
  const double count = static_cast<double>(run.samples);
  PPResult result;
  result.n_values = run.n_values;
  result.samples = run.samples;
  for (int n : run.n_values) {
    const double mean = total.sum[n] / count;
    double var = 0.0;
    if (run.samples > 1) var = std::max(0.0, (total.sum_sq[n] - count * mean * mean) / (count - 1.0));
    result.estimates.push_back(mean);
    result.standard_errors.push_back(std::sqrt(var / count));
  }
  return result;
}

}  // namespace blockhaf
