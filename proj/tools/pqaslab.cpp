// Copyright 2026 The pqaslab Authors
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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "pqaslab/acceptance.hpp"
#include "pqaslab/errors.hpp"
#include "pqaslab/harness.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kAcceptanceExit = 3;

int run_command(
    const std::string& config_path, const std::optional<std::string>& out, const std::optional<std::string>& format,
    const std::optional<std::uint64_t>& seed, std::size_t threads, bool timing) {
  using namespace pqas::harness;
  auto cfg = ExperimentConfig::load(config_path);
  if (seed) cfg.seed = *seed;
  const Format fmt = parse_format(format.value_or(cfg.format.value_or("csv")));
  const auto records = run(cfg, {.threads = threads, .timing = timing});
  emit(records, fmt, out.value_or(cfg.out.value_or("")));
  return 0;
}

int selftest_command(std::uint64_t seed, std::optional<int> only) {
  bool ok = true;
  auto report = [&](const pqas::acceptance::CriterionResult& r) {
    std::cout << r.line() << std::endl;
    ok = ok && r.passed;
  };
  if (only) {
    report(pqas::acceptance::run_criterion(*only, seed));
  } else {
    pqas::acceptance::run_all(seed, report);
  }
  return ok ? 0 : kAcceptanceExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pqaslab: desk-scale pseudorandom quantum authentication laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config;
  std::optional<std::string> out, format;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool timing = false;
  run->add_option("--config", config, "flat JSON experiment config")->required();
  run->add_option("--out", out, "output path (default stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--seed", seed, "master seed, overrides the config");
  run->add_option("--threads", threads, "worker threads across the sweep grid")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "fill wall_ms (output is then not reproducible)");

  auto* selftest = app.add_subcommand("selftest", "run acceptance criteria 1-10");
  std::uint64_t selftest_seed = pqas::acceptance::kDefaultSeed;
  std::optional<int> criterion;
  selftest->add_option("--seed", selftest_seed, "master seed");
  selftest->add_option("--criterion", criterion, "run one criterion")->check(CLI::Range(1, pqas::acceptance::kCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  try {
    if (*run) return run_command(config, out, format, seed, threads, timing);
    return selftest_command(selftest_seed, criterion);
  } catch (const pqas::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const pqas::CapError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
