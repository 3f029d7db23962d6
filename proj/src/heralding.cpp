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


#include "blockhaf/heralding.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "blockhaf/combinatorics.hpp"
#include "blockhaf/distributions.hpp"
#include "blockhaf/error.hpp"
#include "blockhaf/hafnian.hpp"

namespace blockhaf {

namespace {

Embedding embed(const CMatrix& a, const CVector& gamma, const Pattern& n, const Pattern& m,
                EmbeddingOptions options) {
  const std::size_t modes = static_cast<std::size_t>(gamma.size() / 2);
  require(n.size() == modes && m.size() == modes, ErrorCode::kLengthMismatch,
          "patterns must have one entry per mode");
  std::vector<HalfSource> surplus;
  for (std::size_t k = 0; k < modes; ++k) {
    require(n[k] >= 0 && m[k] >= 0, ErrorCode::kDomainError, "negative photon number");
    for (int c = m[k]; c < n[k]; ++c) surplus.push_back({static_cast<int>(k), 0});
  }
  for (std::size_t k = 0; k < modes; ++k)
    for (int c = n[k]; c < m[k]; ++c) surplus.push_back({static_cast<int>(k), 1});

  struct Pair {
    HalfSource first, second;
    int count;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < surplus.size(); i += 2) {
    const HalfSource s1 = surplus[i];
    const HalfSource s2 = i + 1 < surplus.size() ? surplus[i + 1] : HalfSource{-1, 1};
    const bool same = !pairs.empty() && s2.mode >= 0 && pairs.back().first.mode == s1.mode &&
                      pairs.back().first.half == s1.half && pairs.back().second.mode == s2.mode &&
                      pairs.back().second.half == s2.half;
    if (options.merge && same) {
      ++pairs.back().count;
    } else {
      pairs.push_back({s1, s2, 1});
    }
  }

  const std::size_t mp = modes + pairs.size();
  Embedding out;
  out.original_modes = modes;
  out.t.resize(mp);
  out.source.resize(2 * mp);
  for (std::size_t k = 0; k < modes; ++k) {
    out.t[k] = std::min(n[k], m[k]);
    out.source[k] = {static_cast<int>(k), 0};
    out.source[mp + k] = {static_cast<int>(k), 1};
  }
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    out.t[modes + j] = pairs[j].count;
    out.source[modes + j] = pairs[j].first;
    out.source[mp + modes + j] = pairs[j].second;
  }

  const Eigen::Index dim = static_cast<Eigen::Index>(2 * mp);
  out.a_prime = CMatrix::Zero(dim, dim);
  out.gamma_prime = CVector::Zero(dim);
  std::vector<Eigen::Index> row(2 * mp, -1);
  for (std::size_t x = 0; x < 2 * mp; ++x) {
    const HalfSource s = out.source[x];
    const std::size_t q = x % mp;
    if (s.mode < 0 || (options.zero_unused && q < modes && out.t[q] == 0)) continue;
    row[x] = static_cast<Eigen::Index>(s.half * modes + static_cast<std::size_t>(s.mode));
  }
  for (Eigen::Index x = 0; x < dim; ++x) {
    if (out.source[x].mode < 0) {
      out.a_prime(x, x) = 1.0;
      out.gamma_prime(x) = 1.0;
      continue;
    }
    if (row[x] < 0) continue;
    out.gamma_prime(x) = gamma(row[x]);
    for (Eigen::Index y = 0; y < dim; ++y)
      if (row[y] >= 0) out.a_prime(x, y) = a(row[x], row[y]);
  }
  return out;
}

double sqrt_factorials(const Pattern& bra, const Pattern& ket) {
  return std::sqrt(factorial_product(bra) * factorial_product(ket));
}

std::vector<std::size_t> complement(std::size_t modes, const std::vector<std::size_t>& drop) {
  std::vector<char> dropped(modes, 0);
  for (std::size_t i : drop) dropped[i] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes; ++i)
    if (!dropped[i]) out.push_back(i);
  return out;
}

}  // namespace

Embedding build_embedding(const AdjacencyRep& rep, const Pattern& n, const Pattern& m,
                          EmbeddingOptions options) {
  return embed(rep.a, rep.gamma, n, m, options);
}

Complex fock_element(const AdjacencyRep& rep, const Pattern& m, const Pattern& n) {
  require(n.size() == rep.modes() && m.size() == rep.modes(), ErrorCode::kLengthMismatch,
          "patterns must have one entry per mode");
  if (rep.gamma.isZero(0.0) && (pattern_total(n) + pattern_total(m)) % 2) return 0.0;
  Embedding e = embed(rep.a, rep.gamma, n, m, {true, true});
  return rep.vacuum_prob * lhaf_sieve(e.a_prime, e.gamma_prime, e.t) / sqrt_factorials(m, n);
}

std::vector<std::size_t> HeraldSpec::herald_modes() const {
  std::vector<std::size_t> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  std::sort(out.begin(), out.end());
  return out;
}

HeraldSpec HeraldSpec::fine(const std::vector<std::size_t>& modes, const Pattern& counts, int cutoff,
                            std::vector<std::size_t> trace_out) {
  HeraldSpec spec;
  for (std::size_t k : modes) spec.groups.push_back({k});
  spec.counts = counts;
  spec.cutoff = cutoff;
  spec.trace_out = std::move(trace_out);
  return spec;
}

HeraldSpec HeraldSpec::externals(const ModeLayout& layout, const std::vector<std::size_t>& externals,
                                 const Pattern& counts, int cutoff, std::vector<std::size_t> trace_out) {
  HeraldSpec spec;
  for (std::size_t k : externals) {
    require(k < layout.externals, ErrorCode::kIndexOutOfRange, "external index out of range");
    std::vector<std::size_t> block;
    for (std::size_t l = 0; l < layout.internals; ++l) block.push_back(layout.index(k, l));
    spec.groups.push_back(block);
  }
  spec.counts = counts;
  spec.cutoff = cutoff;
  spec.trace_out = std::move(trace_out);
  return spec;
}

Pattern DensityMatrix::pattern(std::size_t index) const {
  Pattern p(modes, 0);
  const std::size_t base = static_cast<std::size_t>(cutoff) + 1;
  for (std::size_t k = modes; k-- > 0;) {
    p[k] = static_cast<int>(index % base);
    index /= base;
  }
  return p;
}

std::size_t DensityMatrix::index(const Pattern& p) const {
  require(p.size() == modes, ErrorCode::kLengthMismatch, "pattern length must equal dm modes");
  std::size_t out = 0;
  for (int x : p) {
    require(x >= 0 && x <= cutoff, ErrorCode::kIndexOutOfRange, "Fock index above cutoff");
    out = out * (static_cast<std::size_t>(cutoff) + 1) + static_cast<std::size_t>(x);
  }
  return out;
}

namespace detail {

Complex herald_element(const HeraldProblem& problem, const Pattern& bra, const Pattern& ket,
                       bool combinatorial) {
  const std::size_t modes = static_cast<std::size_t>(problem.gamma.size() / 2);
  const int fixed = pattern_total(problem.counts);
  const int ket_total = pattern_total(ket), bra_total = pattern_total(bra);
  if (problem.max_photons >= 0 &&
      (fixed + ket_total > problem.max_photons || fixed + bra_total > problem.max_photons)) {
    return 0.0;
  }
  if (problem.gamma.isZero(0.0) && (ket_total + bra_total) % 2) return 0.0;

  Pattern n(modes, 0), m(modes, 0);
  for (std::size_t i = 0; i < problem.kept.size(); ++i) {
    n[problem.kept[i]] = ket[i];
    m[problem.kept[i]] = bra[i];
  }
  Embedding e = embed(problem.a, problem.gamma, n, m, {true, false});
  Partition partition = problem.groups;
  Pattern counts = problem.counts;
  for (std::size_t k : problem.kept) {
    partition.push_back({k});
    counts.push_back(e.t[k]);
  }
  for (std::size_t j = modes; j < e.modes(); ++j) {
    partition.push_back({j});
    counts.push_back(e.t[j]);
  }
  const Complex lhaf = combinatorial ? blocked_lhaf_combinatorial(e.a_prime, e.gamma_prime, partition, counts,
                                                                  FineLhaf::kSieve)
                                     : blocked_lhaf(e.a_prime, e.gamma_prime, partition, counts);
  return problem.prefactor * lhaf /
         (factorial_product(problem.counts) * sqrt_factorials(bra, ket));
}

DensityMatrix assemble(const HeraldProblem& problem, const HeraldOptions& options) {
  require(problem.cutoff >= 0, ErrorCode::kDomainError, "cutoff must be >= 0");
  DensityMatrix dm;
  dm.modes = problem.kept.size();
  dm.cutoff = problem.cutoff;
  const double dim_d = std::pow(problem.cutoff + 1.0, static_cast<double>(dm.modes));
  require(dim_d * dim_d <= 1e8, ErrorCode::kTooLarge, "density matrix too large for this cutoff");
  const std::size_t dim = static_cast<std::size_t>(dim_d);
  dm.entries = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  std::vector<Pattern> patterns(dim);
  for (std::size_t i = 0; i < dim; ++i) patterns[i] = dm.pattern(i);

  const std::size_t workers = static_cast<std::size_t>(std::max(1, options.threads));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t id) {
    try {
      std::size_t count = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j, ++count) {
          if (count % workers != id) continue;
          const Complex value = herald_element(problem, patterns[i], patterns[j], options.combinatorial);
          const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
          if (options.verify_hermitian && i != j) {
            const Complex mirror = herald_element(problem, patterns[j], patterns[i], options.combinatorial);
            require(std::abs(value - std::conj(mirror)) <= 1e-9 * std::max(1.0, std::abs(value)),
                    ErrorCode::kNotHermitian, "assembled density matrix is not Hermitian");
          }
          dm.entries(ii, jj) = value;
          dm.entries(jj, ii) = i == j ? Complex(value.real(), 0.0) : std::conj(value);
        }
      }
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
  dm.trace = dm.entries.trace();
  return dm;
}

}  // namespace detail

namespace {

void validate_spec(const HeraldSpec& spec, std::size_t modes) {
  require(spec.cutoff >= 0, ErrorCode::kDomainError, "cutoff must be >= 0");
  require(spec.groups.size() == spec.counts.size(), ErrorCode::kPartitionMismatch,
          "one count per herald group required");
  std::vector<int> seen(modes, 0);
  for (const auto& g : spec.groups) {
    require(!g.empty(), ErrorCode::kPartitionMismatch, "empty herald group");
    for (std::size_t i : g) {
      require(i < modes, ErrorCode::kIndexOutOfRange, "herald mode out of range");
      require(seen[i]++ == 0, ErrorCode::kPartitionMismatch, "herald groups overlap");
    }
  }
  for (int c : spec.counts) require(c >= 0, ErrorCode::kDomainError, "negative herald count");
  for (std::size_t i : spec.trace_out) {
    require(i < modes, ErrorCode::kIndexOutOfRange, "traced mode out of range");
    require(seen[i]++ == 0, ErrorCode::kPartitionMismatch, "traced mode is heralded or repeated");
  }
}

}  // namespace

DensityMatrix herald_grouped(const AdjacencyRep& rep, const HeraldSpec& spec, const HeraldOptions& options) {
  const std::size_t modes = rep.modes();
  validate_spec(spec, modes);

  // Unmeasured modes are traced out on the Gaussian state itself.
  AdjacencyRep working = rep;
  std::vector<std::size_t> index_of(modes);
  for (std::size_t i = 0; i < modes; ++i) index_of[i] = i;
  if (!spec.trace_out.empty()) {
    std::vector<std::size_t> keep = complement(modes, spec.trace_out);
    for (std::size_t i = 0; i < keep.size(); ++i) index_of[keep[i]] = i;
    working = to_adjacency(marginal(from_adjacency(rep), keep));
  }

  detail::HeraldProblem problem;
  problem.a = working.a;
  problem.gamma = working.gamma;
  problem.prefactor = working.vacuum_prob;
  problem.counts = spec.counts;
  problem.cutoff = spec.cutoff;
  for (const auto& g : spec.groups) {
    std::vector<std::size_t> mapped;
    for (std::size_t i : g) mapped.push_back(index_of[i]);
    problem.groups.push_back(mapped);
  }
  std::vector<std::size_t> herald;
  for (const auto& g : problem.groups) herald.insert(herald.end(), g.begin(), g.end());
  problem.kept = complement(working.modes(), herald);

  DensityMatrix dm = detail::assemble(problem, options);
  if (options.compute_herald_probability && problem.groups.empty()) {
    dm.herald_probability = 1.0;
  } else if (options.compute_herald_probability) {
    std::sort(herald.begin(), herald.end());
    std::vector<std::size_t> local(working.modes());
    for (std::size_t i = 0; i < herald.size(); ++i) local[herald[i]] = i;
    AdjacencyRep h = problem.kept.empty() ? working
                                          : to_adjacency(marginal(from_adjacency(working), herald));
    CoarsePattern cp{{}, problem.counts};
    for (const auto& g : problem.groups) {
      std::vector<std::size_t> block;
      for (std::size_t i : g) block.push_back(local[i]);
      cp.partition.push_back(block);
    }
    dm.herald_probability = prob_coarse(h, cp);
  }
  return dm;
}

DensityMatrix herald_fine(const AdjacencyRep& rep, const HeraldSpec& spec, const HeraldOptions& options) {
  for (const auto& g : spec.groups)
    require(g.size() == 1, ErrorCode::kPartitionMismatch, "fine heralding needs one mode per group");
  return herald_grouped(rep, spec, options);
}

DensityMatrix partial_trace(const DensityMatrix& dm, const std::vector<std::size_t>& drop) {
  std::vector<char> dropped(dm.modes, 0);
  for (std::size_t i : drop) {
    require(i < dm.modes, ErrorCode::kIndexOutOfRange, "traced mode out of range");
    require(!dropped[i], ErrorCode::kIndexOutOfRange, "traced mode repeated");
    dropped[i] = 1;
  }
  DensityMatrix out;
  out.cutoff = dm.cutoff;
  out.herald_probability = dm.herald_probability;
  std::vector<std::size_t> keep = complement(dm.modes, drop);
  out.modes = keep.size();
  const std::size_t base = static_cast<std::size_t>(dm.cutoff) + 1;
  std::size_t dim = 1;
  for (std::size_t k = 0; k < out.modes; ++k) dim *= base;
  out.entries = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  const std::size_t full = dm.dim();
  std::vector<std::size_t> kept_index(full), dropped_index(full);
  for (std::size_t i = 0; i < full; ++i) {
    Pattern p = dm.pattern(i);
    std::size_t ki = 0, di = 0;
    for (std::size_t k = 0; k < dm.modes; ++k) {
      if (dropped[k]) {
        di = di * base + static_cast<std::size_t>(p[k]);
      } else {
        ki = ki * base + static_cast<std::size_t>(p[k]);
      }
    }
    kept_index[i] = ki;
    dropped_index[i] = di;
  }
  for (std::size_t i = 0; i < full; ++i)
    for (std::size_t j = 0; j < full; ++j)
      if (dropped_index[i] == dropped_index[j])
        out.entries(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
            dm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  out.trace = out.entries.trace();
  return out;
}

DensityMatrix normalized(const DensityMatrix& dm) {
  require(std::abs(dm.trace) > 0, ErrorCode::kNotNormalized, "density matrix has zero trace");
  DensityMatrix out = dm;
  out.entries /= dm.trace.real();
  out.trace = out.entries.trace();
  return out;
}

double fidelity(const DensityMatrix& dm, const CVector& target) {
  require(std::abs(dm.trace - 1.0) <= 1e-9, ErrorCode::kNotNormalized, "density matrix is not normalized");
  require(static_cast<std::size_t>(target.size()) == dm.dim(), ErrorCode::kLengthMismatch,
          "target length must equal the density matrix dimension");
  require(std::abs(target.norm() - 1.0) <= 1e-9, ErrorCode::kNotNormalized, "target is not normalized");
  const double overlap = target.dot(dm.entries * target).real();
  return std::sqrt(std::max(0.0, overlap));
}

double min_eigenvalue(const DensityMatrix& dm) {
  CMatrix h = 0.5 * (dm.entries + dm.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace blockhaf
