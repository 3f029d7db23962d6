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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockhaf/gaussian.hpp"
#include "blockhaf/types.hpp"

namespace blockhaf {

using Json = nlohmann::ordered_json;

// Either squeezing (plus optional purity or overlap model) or an explicit
// Husimi covariance. The channel is `transmission`, or sqrt(efficiency) U with
// U given or Haar-random from haar_seed, applied to every internal mode.
struct CircuitConfig {
  std::size_t modes = 0;
  std::size_t internals = 1;
  std::vector<Complex> squeezing;
  std::optional<double> spectral_purity;
  std::optional<CMatrix> overlap_matrix;
  std::optional<CMatrix> transmission;
  std::optional<CMatrix> unitary;
  std::optional<std::uint64_t> haar_seed;
  double efficiency = 1.0;
  std::vector<Complex> displacements;
  std::optional<CMatrix> covariance;
  std::optional<CVector> means;
};

struct HeraldConfig {
  Partition groups;
  Pattern counts;
  std::vector<std::size_t> trace_out;
  int cutoff = 0;
  std::optional<Pattern> target;  // Fock pattern of a pure target over kept modes
};

struct BenchConfig {
  int repetitions = 3;
  std::vector<std::string> methods;
};

struct TaskConfig {
  std::string kind;
  std::vector<Pattern> patterns;
  Partition partition;
  std::vector<Pattern> counts;
  std::vector<std::size_t> subset;
  int n_max = -1;
  std::optional<HeraldConfig> herald;
  Pattern input;
  Partition blocks;
  int cumulant_order = 0;
  std::size_t samples = 100000;
  std::vector<int> n_values;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::optional<BenchConfig> bench;
};

struct Config {
  CircuitConfig circuit;
  TaskConfig task;
};

struct Tolerances {
  double imaginary_residue = 1e-9;
  double distribution_tail = 1e-7;
};

struct RunOptions {
  int threads = 1;
  bool deterministic = true;
  std::optional<std::uint64_t> seed;
  Tolerances tolerances;
};

// Throws Error(kInvalidConfig) on unknown keys, wrong types or missing fields.
Config parse_config(const Json& j);
Json to_json(const Config& config);
Tolerances parse_tolerances(const Json& j);

GaussianState build_state(const CircuitConfig& circuit);
CMatrix build_transmission(const CircuitConfig& circuit);

// Result object of one task.
Json run_task(const Config& config, const RunOptions& options);
// Timing rows per method; requires repetitions >= 3.
Json run_bench(const Config& config, const RunOptions& options);

// Envelope with version, resolved config and result; CSV for 1-D
// distributions when format is "csv".
std::string render(const Config& config, const Json& result);

}  // namespace blockhaf
