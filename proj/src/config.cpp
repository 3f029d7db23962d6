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


#include "blockhaf/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "blockhaf/distributions.hpp"
#include "blockhaf/error.hpp"
#include "blockhaf/fock_channel.hpp"
#include "blockhaf/hafnian.hpp"
#include "blockhaf/heralding.hpp"
#include "blockhaf/phasespace.hpp"

namespace blockhaf {

namespace {

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorCode::kInvalidConfig, msg); }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) invalid("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid("field '" + key + "' is missing or has the wrong type");
  }
}

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  invalid("complex values are numbers or [re, im] pairs");
}

Json complex_to(Complex c) { return Json::array({c.real(), c.imag()}); }

std::vector<Complex> cvec_from(const Json& j) {
  if (!j.is_array()) invalid("expected an array of complex values");
  std::vector<Complex> out;
  for (const auto& x : j) out.push_back(complex_from(x));
  return out;
}

Json cvec_to(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (Complex c : v) out.push_back(complex_to(c));
  return out;
}

CMatrix matrix_from(const Json& j) {
  if (!j.is_array() || j.empty()) invalid("matrices are non-empty arrays of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) invalid("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from(j[r][c]);
  }
  return m;
}

Json matrix_to(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to(m(r, c)));
    out.push_back(row);
  }
  return out;
}

template <typename T>
T typed(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid("field '" + what + "' has the wrong type");
  }
}

CircuitConfig parse_circuit(const Json& j) {
  check_keys(j,
             {"modes", "internals", "squeezing", "spectral_purity", "overlap_matrix", "transmission",
              "unitary", "haar_seed", "efficiency", "displacements", "covariance", "means"},
             "circuit");
  CircuitConfig c;
  c.modes = get<std::size_t>(j, "modes");
  if (c.modes == 0) invalid("circuit.modes must be positive");
  if (j.contains("internals")) c.internals = get<std::size_t>(j, "internals");
  if (c.internals == 0) invalid("circuit.internals must be positive");
  if (j.contains("squeezing")) c.squeezing = cvec_from(j.at("squeezing"));
  if (j.contains("spectral_purity")) c.spectral_purity = get<double>(j, "spectral_purity");
  if (j.contains("overlap_matrix")) c.overlap_matrix = matrix_from(j.at("overlap_matrix"));
  if (j.contains("transmission")) c.transmission = matrix_from(j.at("transmission"));
  if (j.contains("unitary")) c.unitary = matrix_from(j.at("unitary"));
  if (j.contains("haar_seed")) c.haar_seed = get<std::uint64_t>(j, "haar_seed");
  if (j.contains("efficiency")) c.efficiency = get<double>(j, "efficiency");
  if (j.contains("displacements")) c.displacements = cvec_from(j.at("displacements"));
  if (j.contains("covariance")) c.covariance = matrix_from(j.at("covariance"));
  if (j.contains("means")) {
    auto v = cvec_from(j.at("means"));
    c.means = Eigen::Map<CVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  const bool has_squeezing = j.contains("squeezing");
  if (has_squeezing == c.covariance.has_value())
    invalid("circuit needs exactly one of squeezing and covariance");
  if (c.means && !c.covariance) invalid("circuit.means requires circuit.covariance");
  if ((c.transmission ? 1 : 0) + (c.unitary ? 1 : 0) + (c.haar_seed ? 1 : 0) > 1)
    invalid("give at most one of transmission, unitary and haar_seed");
  if (c.transmission && j.contains("efficiency")) invalid("efficiency applies to unitary or haar_seed only");
  if (c.spectral_purity && c.overlap_matrix) invalid("spectral_purity and overlap_matrix exclude each other");
  if ((c.spectral_purity || c.overlap_matrix) && !has_squeezing)
    invalid("spectral_purity and overlap_matrix need squeezing");
  if (c.spectral_purity) {
    if (j.contains("internals") && c.internals != 2) invalid("spectral_purity implies internals = 2");
    c.internals = 2;
  }
  if (c.overlap_matrix) {
    if (j.contains("internals") && c.internals != c.modes) invalid("overlap_matrix implies internals = modes");
    c.internals = c.modes;
  }
  const std::size_t total = c.modes * c.internals;
  if (has_squeezing) {
    const std::size_t want = c.spectral_purity || c.overlap_matrix ? c.modes : total;
    if (c.squeezing.size() != want) invalid("circuit.squeezing has the wrong length");
  }
  auto square = [](const std::optional<CMatrix>& m, std::size_t n, const char* name) {
    if (m && (m->rows() != static_cast<Eigen::Index>(n) || m->cols() != static_cast<Eigen::Index>(n)))
      invalid(std::string("circuit.") + name + " has the wrong shape");
  };
  square(c.transmission, c.modes, "transmission");
  square(c.unitary, c.modes, "unitary");
  square(c.overlap_matrix, c.modes, "overlap_matrix");
  square(c.covariance, 2 * total, "covariance");
  if (c.means && c.means->size() != static_cast<Eigen::Index>(2 * total)) invalid("circuit.means has the wrong length");
  if (!c.displacements.empty() && c.displacements.size() != total)
    invalid("circuit.displacements needs one entry per mode");
  return c;
}

Json circuit_to(const CircuitConfig& c) {
  Json j;
  j["modes"] = c.modes;
  j["internals"] = c.internals;
  if (!c.squeezing.empty() || !c.covariance) j["squeezing"] = cvec_to(c.squeezing);
  if (c.spectral_purity) j["spectral_purity"] = *c.spectral_purity;
  if (c.overlap_matrix) j["overlap_matrix"] = matrix_to(*c.overlap_matrix);
  if (c.transmission) j["transmission"] = matrix_to(*c.transmission);
  if (c.unitary) j["unitary"] = matrix_to(*c.unitary);
  if (c.haar_seed) j["haar_seed"] = *c.haar_seed;
  if (!c.transmission) j["efficiency"] = c.efficiency;
  if (!c.displacements.empty()) j["displacements"] = cvec_to(c.displacements);
  if (c.covariance) j["covariance"] = matrix_to(*c.covariance);
  if (c.means) j["means"] = cvec_to(std::vector<Complex>(c.means->data(), c.means->data() + c.means->size()));
  return j;
}

const std::set<std::string> kKinds{"fine-prob",   "coarse-prob", "total-dist", "external-prob",
                                   "herald",      "fock-prob",   "fock-herald", "moments",
                                   "pp-estimate", "bench"};

TaskConfig parse_task(const Json& j) {
  check_keys(j,
             {"kind", "patterns", "partition", "counts", "subset", "n_max", "herald", "input", "blocks",
              "cumulant_order", "samples", "n_values", "seed", "format", "bench"},
             "task");
  TaskConfig t;
  t.kind = get<std::string>(j, "kind");
  if (!kKinds.count(t.kind)) invalid("unknown task kind '" + t.kind + "'");
  if (j.contains("patterns")) t.patterns = typed<std::vector<Pattern>>(j.at("patterns"), "patterns");
  if (j.contains("partition")) t.partition = typed<Partition>(j.at("partition"), "partition");
  if (j.contains("counts")) t.counts = typed<std::vector<Pattern>>(j.at("counts"), "counts");
  if (j.contains("subset")) t.subset = typed<std::vector<std::size_t>>(j.at("subset"), "subset");
  if (j.contains("n_max")) t.n_max = get<int>(j, "n_max");
  if (j.contains("input")) t.input = typed<Pattern>(j.at("input"), "input");
  if (j.contains("blocks")) t.blocks = typed<Partition>(j.at("blocks"), "blocks");
  if (j.contains("cumulant_order")) t.cumulant_order = get<int>(j, "cumulant_order");
  if (j.contains("samples")) t.samples = get<std::size_t>(j, "samples");
  if (j.contains("n_values")) t.n_values = typed<std::vector<int>>(j.at("n_values"), "n_values");
  if (j.contains("seed")) t.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("format")) t.format = get<std::string>(j, "format");
  if (t.format != "json" && t.format != "csv") invalid("task.format must be json or csv");
  if (j.contains("herald")) {
    const Json& h = j.at("herald");
    check_keys(h, {"groups", "counts", "trace_out", "cutoff", "target"}, "task.herald");
    HeraldConfig hc;
    hc.groups = typed<Partition>(h.at("groups"), "herald.groups");
    hc.counts = typed<Pattern>(h.at("counts"), "herald.counts");
    if (h.contains("trace_out")) hc.trace_out = typed<std::vector<std::size_t>>(h.at("trace_out"), "herald.trace_out");
    hc.cutoff = get<int>(h, "cutoff");
    if (h.contains("target")) hc.target = typed<Pattern>(h.at("target"), "herald.target");
    t.herald = hc;
  }
  if (j.contains("bench")) {
    const Json& b = j.at("bench");
    check_keys(b, {"repetitions", "methods"}, "task.bench");
    BenchConfig bc;
    if (b.contains("repetitions")) bc.repetitions = get<int>(b, "repetitions");
    if (b.contains("methods")) bc.methods = typed<std::vector<std::string>>(b.at("methods"), "bench.methods");
    t.bench = bc;
  }
  const bool needs_herald = t.kind == "herald" || t.kind == "fock-herald";
  if (needs_herald && !t.herald) invalid("task.herald is required for " + t.kind);
  if ((t.kind == "fine-prob" || t.kind == "external-prob") && t.patterns.empty())
    invalid("task.patterns is required for " + t.kind);
  if ((t.kind == "coarse-prob") && (t.partition.empty() || t.counts.empty()))
    invalid("task.partition and task.counts are required for coarse-prob");
  if ((t.kind == "fock-prob" || t.kind == "fock-herald") && t.input.empty())
    invalid("task.input is required for " + t.kind);
  if (t.kind == "fock-prob" && t.counts.empty()) invalid("task.counts is required for fock-prob");
  if (t.kind == "moments" && t.blocks.empty()) invalid("task.blocks is required for moments");
  if (t.kind == "pp-estimate" && t.n_values.empty()) invalid("task.n_values is required for pp-estimate");
  return t;
}

Json task_to(const TaskConfig& t) {
  Json j;
  j["kind"] = t.kind;
  if (!t.patterns.empty()) j["patterns"] = t.patterns;
  if (!t.partition.empty()) j["partition"] = t.partition;
  if (!t.counts.empty()) j["counts"] = t.counts;
  if (!t.subset.empty()) j["subset"] = t.subset;
  j["n_max"] = t.n_max;
  if (t.herald) {
    Json h;
    h["groups"] = t.herald->groups;
    h["counts"] = t.herald->counts;
    h["trace_out"] = t.herald->trace_out;
    h["cutoff"] = t.herald->cutoff;
    if (t.herald->target) h["target"] = *t.herald->target;
    j["herald"] = h;
  }
  if (!t.input.empty()) j["input"] = t.input;
  if (!t.blocks.empty()) j["blocks"] = t.blocks;
  if (t.cumulant_order) j["cumulant_order"] = t.cumulant_order;
  j["samples"] = t.samples;
  if (!t.n_values.empty()) j["n_values"] = t.n_values;
  j["seed"] = t.seed;
  j["format"] = t.format;
  if (t.bench) j["bench"] = Json{{"repetitions", t.bench->repetitions}, {"methods", t.bench->methods}};
  return j;
}

HeraldSpec herald_spec(const HeraldConfig& h) {
  HeraldSpec spec;
  spec.groups = h.groups;
  spec.counts = h.counts;
  spec.trace_out = h.trace_out;
  spec.cutoff = h.cutoff;
  return spec;
}

Json dm_result(const DensityMatrix& dm, const HeraldConfig& h) {
  Json out;
  out["trace"] = complex_to(dm.trace);
  out["herald_probability"] = dm.herald_probability;
  out["truncation_deficit"] = dm.truncation_deficit();
  if (dm.trace.real() > 0) {
    DensityMatrix n = normalized(dm);
    out["min_eigenvalue"] = min_eigenvalue(n);
    if (h.target) {
      CVector target = CVector::Zero(static_cast<Eigen::Index>(n.dim()));
      target(static_cast<Eigen::Index>(n.index(*h.target))) = 1.0;
      out["fidelity"] = fidelity(n, target);
    }
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < dm.dim(); ++i)
    for (std::size_t k = 0; k < dm.dim(); ++k) {
      const Complex v = dm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      rows.push_back(Json::array({dm.pattern(i), dm.pattern(k), v.real(), v.imag()}));
    }
  out["density_matrix"] = Json{{"modes", dm.modes}, {"cutoff", dm.cutoff}, {"columns", {"bra", "ket", "re", "im"}},
                               {"rows", rows}};
  return out;
}

Partition singleton_partition(std::size_t m) {
  Partition p;
  for (std::size_t k = 0; k < m; ++k) p.push_back({k});
  return p;
}

PPRun pp_run(const Config& config, const RunOptions& options) {
  const CircuitConfig& c = config.circuit;
  if (c.covariance || c.spectral_purity || c.overlap_matrix || c.internals != 1 || !c.displacements.empty())
    invalid("pp-estimate needs real squeezers on K = 1 without displacements");
  PPRun run;
  for (Complex x : c.squeezing) {
    if (x.imag() != 0.0) invalid("pp-estimate needs real squeezing");
    run.squeeze.push_back(x.real());
  }
  run.t = build_transmission(c);
  run.samples = config.task.samples;
  run.seed = options.seed.value_or(config.task.seed);
  run.n_values = config.task.n_values;
  run.threads = options.threads;
  return run;
}

}  // namespace

Config parse_config(const Json& j) {
  check_keys(j, {"circuit", "task"}, "config");
  if (!j.contains("circuit") || !j.contains("task")) invalid("config needs circuit and task");
  Config c{parse_circuit(j.at("circuit")), parse_task(j.at("task"))};
  return c;
}

Json to_json(const Config& config) {
  Json j;
  j["circuit"] = circuit_to(config.circuit);
  j["task"] = task_to(config.task);
  return j;
}

Tolerances parse_tolerances(const Json& j) {
  check_keys(j, {"imaginary_residue", "distribution_tail"}, "tolerance overrides");
  Tolerances t;
  if (j.contains("imaginary_residue")) t.imaginary_residue = get<double>(j, "imaginary_residue");
  if (j.contains("distribution_tail")) t.distribution_tail = get<double>(j, "distribution_tail");
  if (!(t.imaginary_residue > 0) || !(t.distribution_tail > 0)) invalid("tolerances must be positive");
  return t;
}

CMatrix build_transmission(const CircuitConfig& c) {
  if (c.transmission) return *c.transmission;
  if (!(c.efficiency >= 0.0 && c.efficiency <= 1.0)) invalid("efficiency must lie in [0, 1]");
  const Eigen::Index m = static_cast<Eigen::Index>(c.modes);
  CMatrix u = c.unitary ? *c.unitary : c.haar_seed ? haar_unitary(c.modes, *c.haar_seed) : CMatrix::Identity(m, m);
  return std::sqrt(c.efficiency) * u;
}

GaussianState build_state(const CircuitConfig& c) {
  const ModeLayout layout{c.modes, c.internals};
  GaussianState state;
  if (c.covariance) {
    state = from_covariance(*c.covariance,
                            c.means ? *c.means : CVector::Zero(static_cast<Eigen::Index>(2 * layout.total())), layout);
  } else if (c.spectral_purity) {
    std::vector<double> xi;
    for (Complex x : c.squeezing) {
      if (x.imag() != 0.0) invalid("spectral_purity needs real squeezing");
      xi.push_back(x.real());
    }
    state = impure_source(xi, *c.spectral_purity);
  } else if (c.overlap_matrix) {
    state = lowdin_state({*c.overlap_matrix, c.squeezing});
  } else {
    state = from_squeezing(c.squeezing, layout);
  }
  if (!c.displacements.empty()) state = displace(state, c.displacements);
  return apply_channel(state, expand_channel(build_transmission(c), c.internals));
}

Json run_task(const Config& config, const RunOptions& options) {
  set_imaginary_tolerance(options.tolerances.imaginary_residue);
  const TaskConfig& task = config.task;
  if (task.kind == "bench") return run_bench(config, options);
  HeraldOptions hopt;
  hopt.threads = options.threads;
  Json out;

  if (task.kind == "fock-prob" || task.kind == "fock-herald") {
    if (config.circuit.internals != 1) invalid(task.kind + " needs internals = 1");
    FockInput input{task.input, build_transmission(config.circuit)};
    if (task.kind == "fock-herald") return dm_result(fock_herald(input, herald_spec(*task.herald), hopt), *task.herald);
    const Partition part = task.partition.empty() ? singleton_partition(task.input.size()) : task.partition;
    Json rows = Json::array();
    for (const Pattern& b : task.counts)
      rows.push_back(Json{{"counts", b}, {"probability", fock_coarse_prob(input, {part, b})}});
    out["partition"] = part;
    out["probabilities"] = rows;
    return out;
  }
  if (task.kind == "pp-estimate") {
    PPResult r = pp_estimate(pp_run(config, options));
    out["n_values"] = r.n_values;
    out["estimates"] = r.estimates;
    out["standard_errors"] = r.standard_errors;
    out["samples"] = r.samples;
    return out;
  }

  GaussianState state = build_state(config.circuit);
  if (task.kind == "moments") {
    out["blocks"] = task.blocks;
    out["moment"] = coarse_moment(state, task.blocks);
    out["cumulant"] = coarse_cumulant(state, task.blocks);
    if (task.cumulant_order > 0) {
      if (task.blocks.size() != 1) invalid("cumulant_order needs exactly one block");
      out["block_cumulants"] = block_cumulants(state, task.blocks[0], task.cumulant_order);
    }
    return out;
  }
  if (task.kind == "total-dist" && !task.subset.empty()) state = marginal(state, task.subset);
  const AdjacencyRep rep = to_adjacency(state);

  if (task.kind == "fine-prob" || task.kind == "external-prob") {
    Json rows = Json::array();
    for (const Pattern& n : task.patterns) {
      const double p = task.kind == "fine-prob" ? prob_fine(rep, n) : prob_external(rep, n);
      rows.push_back(Json{{"pattern", n}, {"probability", p}});
    }
    out["probabilities"] = rows;
  } else if (task.kind == "coarse-prob") {
    Json rows = Json::array();
    for (const Pattern& b : task.counts)
      rows.push_back(Json{{"counts", b}, {"probability", prob_coarse(rep, {task.partition, b})}});
    out["partition"] = task.partition;
    out["probabilities"] = rows;
  } else if (task.kind == "total-dist") {
    Distribution d = total_distribution(rep, task.n_max, options.tolerances.distribution_tail);
    out["distribution"] = d.probabilities;
    out["deficit"] = d.deficit;
  } else if (task.kind == "herald") {
    out = dm_result(herald_grouped(rep, herald_spec(*task.herald), hopt), *task.herald);
  }
  return out;
}

Json run_bench(const Config& config, const RunOptions& options) {
  const TaskConfig& task = config.task;
  const BenchConfig bench = task.bench.value_or(BenchConfig{});
  if (bench.repetitions < 3) invalid("bench needs repetitions >= 3");
  std::vector<std::string> methods = bench.methods;
  if (methods.empty()) {
    methods = task.herald || !task.partition.empty() ? std::vector<std::string>{"sieve", "combinatorial"}
                                                     : std::vector<std::string>{"exact-total", "positive-p"};
  }
  std::optional<AdjacencyRep> rep;
  auto get_rep = [&]() -> const AdjacencyRep& {
    if (!rep) rep = to_adjacency(build_state(config.circuit));
    return *rep;
  };
  auto coarse = [&](bool combinatorial) {
    if (task.herald) {
      HeraldOptions hopt;
      hopt.threads = options.threads;
      hopt.combinatorial = combinatorial;
      hopt.compute_herald_probability = false;
      herald_grouped(get_rep(), herald_spec(*task.herald), hopt);
      return;
    }
    if (task.partition.empty() || task.counts.empty()) invalid("bench needs task.herald or partition and counts");
    const AdjacencyRep& r = get_rep();
    for (const Pattern& b : task.counts) {
      if (combinatorial) {
        blocked_lhaf_combinatorial(r.a, r.gamma, task.partition, b, FineLhaf::kSieve);
      } else {
        blocked_lhaf(r.a, r.gamma, task.partition, b);
      }
    }
  };
  Json rows = Json::array();
  for (const std::string& method : methods) {
    std::function<void()> body;
    if (method == "sieve") {
      body = [&] { coarse(false); };
    } else if (method == "combinatorial") {
      body = [&] { coarse(true); };
    } else if (method == "exact-total") {
      body = [&] { total_distribution(get_rep(), task.n_max, options.tolerances.distribution_tail); };
    } else if (method == "positive-p") {
      const PPRun run = pp_run(config, options);
      body = [run] { pp_estimate(run); };
    } else {
      invalid("unknown bench method '" + method + "'");
    }
    std::vector<double> times;
    for (int r = 0; r < bench.repetitions; ++r) {
      const auto start = std::chrono::steady_clock::now();
      body();
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    double sum = 0.0;
    for (double t : times) sum += t;
    rows.push_back(Json{{"method", method},
                        {"repetitions", bench.repetitions},
                        {"mean_s", sum / static_cast<double>(times.size())},
                        {"min_s", *std::min_element(times.begin(), times.end())},
                        {"max_s", *std::max_element(times.begin(), times.end())}});
  }
  return Json{{"rows", rows}};
}

std::string render(const Config& config, const Json& result) {
  if (config.task.format == "csv" && config.task.kind == "total-dist") {
    std::ostringstream os;
    os << "# blockhaf " << kVersion << "\n";
    os << "# config: " << to_json(config).dump() << "\n";
    os << "N,probability\n";
    const auto& d = result.at("distribution");
    char buf[64];
    for (std::size_t n = 0; n < d.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", d[n].get<double>());
      os << n << "," << buf << "\n";
    }
    return os.str();
  }
  Json env;
  env["version"] = kVersion;
  env["config"] = to_json(config);
  env["result"] = result;
  return env.dump(2) + "\n";
}

}  // namespace blockhaf
