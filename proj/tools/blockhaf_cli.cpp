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


#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "blockhaf/config.hpp"
#include "blockhaf/error.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kNumericExit = 3;

struct Args {
  std::string config;
  std::string output;
  std::string tolerances;
  int threads = 1;
  bool deterministic = true;
  std::optional<std::uint64_t> seed;
};

blockhaf::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) blockhaf::fail(blockhaf::ErrorCode::kInvalidConfig, "cannot open " + path);
  try {
    return blockhaf::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    blockhaf::fail(blockhaf::ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

void report(const char* code, const std::string& message) {
  std::cerr << blockhaf::Json{{"error", code}, {"message", message}}.dump() << "\n";
}

int execute(const Args& args, bool bench) {
  try {
    blockhaf::Config config = blockhaf::parse_config(read_json(args.config));
    blockhaf::RunOptions options;
    if (args.threads < 1) blockhaf::fail(blockhaf::ErrorCode::kInvalidConfig, "--threads must be positive");
    options.threads = args.threads;
    options.deterministic = args.deterministic;
    options.seed = args.seed;
    if (!args.tolerances.empty()) options.tolerances = blockhaf::parse_tolerances(read_json(args.tolerances));
    if (bench) config.task.kind = "bench";
    if (options.seed) config.task.seed = *options.seed;

    const blockhaf::Json result = blockhaf::run_task(config, options);
    const std::string text = blockhaf::render(config, result);
    if (args.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(args.output, std::ios::binary);
      out << text;
      if (!out) blockhaf::fail(blockhaf::ErrorCode::kInvalidConfig, "cannot write " + args.output);
    }
    return 0;
  } catch (const blockhaf::Error& e) {
    report(blockhaf::error_name(e.code()), e.what());
    return blockhaf::is_validation_error(e.code()) ? kValidationExit : kNumericExit;
  } catch (const std::exception& e) {
    report("Internal", e.what());
    return kNumericExit;
  }
}

void add_flags(CLI::App* cmd, Args& args) {
  cmd->add_option("--config", args.config, "JSON config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", args.output, "result file (default stdout)");
  cmd->add_option("--threads", args.threads, "worker cap");
  cmd->add_flag("--deterministic,!--no-deterministic", args.deterministic, "fixed reduction order (default on)");
  cmd->add_option("--seed", args.seed, "overrides task.seed");
  cmd->add_option("--tolerance-overrides", args.tolerances, "JSON tolerance file")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blockhaf: photon statistics of lossy, partially distinguishable Gaussian circuits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", blockhaf::kVersion);
  Args args;
  CLI::App* run = app.add_subcommand("run", "evaluate the task in a config");
  CLI::App* bench = app.add_subcommand("bench", "time the methods listed under task.bench");
  add_flags(run, args);
  add_flags(bench, args);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationExit;
  }
  return execute(args, bench->parsed());
}
