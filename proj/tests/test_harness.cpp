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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "pqaslab/errors.hpp"
#include "pqaslab/harness.hpp"

using namespace pqas;
using namespace pqas::harness;

namespace {

std::string field_of(const Json& doc) {
  try {
    ExperimentConfig::from_json(doc);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

ResultRecord sample_record() {
  ResultRecord r;
  r.experiment = "auth-sweep:P0";
  r.n = 2;
  r.l = 2;
  r.m = 1;
  r.trials = 1000;
  r.mode = "haar_exact";
  r.channel = "depolarizing(p=0.3)";
  r.estimate = 0.775;
  r.std_error = 2.5e-16;
  r.exact = 0.775;
  r.seed = 42;
  return r;
}

}  // namespace

TEST_CASE("config validation names the field", "[harness]") {
  CHECK(field_of({{"experiment", "security-scan"}, {"n", 0}}) == "n");
  CHECK(field_of({{"experiment", "nope"}}) == "experiment");
  CHECK(field_of({{"n", 1}}) == "experiment");
  CHECK(field_of({{"experiment", "cpa"}, {"bogus", 1}}) == "bogus");
  CHECK(field_of({{"experiment", "cpa"}, {"mode", {"haar_exact", "composed"}}}) == "mode");
  CHECK(field_of({{"experiment", "cpa"}, {"t", "four"}}) == "t");
  CHECK(field_of({{"experiment", "cpa"}, {"m", Json::array()}}) == "m");
  CHECK(field_of({{"experiment", "cpa"}, {"seed", -1}}) == "seed");
  CHECK(field_of({{"experiment", "cpa"}, {"format", "xml"}}) == "format");
  CHECK(field_of({{"experiment", "cpa"}, {"m", 1}}).empty());

  CHECK(field_of({{"experiment", "cpa"}, {"trials", 1.5}}) == "trials");
  CHECK(field_of({{"experiment", "wg-selftest"}, {"n", {2, 0}}}) == "n");
  CHECK(field_of({{"experiment", "efi"}, {"p", 0.5}}).empty());
  // Range checks that need the whole point happen at run time.
  const auto cfg = ExperimentConfig::from_json({{"experiment", "efi"}, {"p", 1.5}});
  CHECK_THROWS_AS(run(cfg), ValidationError);
  const auto m_big = ExperimentConfig::from_json({{"experiment", "vprdm"}, {"n", 2}, {"m", 2}});
  CHECK_THROWS_AS(run(m_big), ValidationError);
}

TEST_CASE("sweeps cover the cartesian product", "[harness]") {
  const auto cfg = ExperimentConfig::from_json({{"experiment", "wg-selftest"}, {"n", {2, 3, 4}}, {"t", {1, 2}}});
  const auto grid = cfg.grid();
  CHECK(grid.size() == 6);
  for (const auto& p : grid) {
    CHECK(p.contains("n"));
    CHECK(p.contains("t"));
  }
  const auto records = run(cfg);
  CHECK(records.size() == 6);
}

TEST_CASE("wg-selftest reproduces the falling factorial", "[harness]") {
  const auto cfg = ExperimentConfig::from_json({{"experiment", "wg-selftest"}, {"n", {2, 3, 4}}, {"t", {1, 2, 3, 4}}});
  for (const auto& r : run(cfg)) {
    REQUIRE(r.exact.has_value());
    double expect = 1.0;
    for (std::int64_t k = 0; k < *r.t; ++k) expect /= static_cast<double>((std::int64_t{1} << *r.n) - k);
    CHECK(*r.exact == Catch::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(r.estimate - *r.exact) <= 1e-15 * *r.exact + 1e-18);
  }
}

TEST_CASE("runs are reproducible", "[harness]") {
  const auto cfg = ExperimentConfig::from_json(
      {{"experiment", "multistate"}, {"m", {0, 2}}, {"trials", 60}, {"seed", 9}});
  const auto a = to_csv(run(cfg));
  CHECK(a == to_csv(run(cfg, {.threads = 3})));
  auto other = cfg;
  other.seed = 10;
  CHECK(a != to_csv(run(other)));
}

TEST_CASE("every experiment runs with small settings", "[harness]") {
  const std::vector<Json> docs = {
      {{"experiment", "security-scan"}, {"trials", 20}},
      {{"experiment", "security-scan"}, {"state", "ghz"}, {"q", 1}, {"trials", 20}},
      {{"experiment", "auth-sweep"}, {"n", 1}, {"l", 1}, {"trials", 100}, {"channel", "tamper"}},
      {{"experiment", "cpa"}, {"trials", 20}},
      {{"experiment", "multistate"}, {"trials", 20}},
      {{"experiment", "qubit-count"}, {"trials", 5}, {"shots", 500}},
      {{"experiment", "decoy"}},
      {{"experiment", "vprdm"}, {"n", 3}, {"trials", 20}},
      {{"experiment", "efi"}, {"n", 4}, {"lambda_eff", 2}, {"p", 0.1}},
  };
  for (const auto& doc : docs) {
    const auto records = run(ExperimentConfig::from_json(doc));
    CHECK(!records.empty());
    for (const auto& r : records) CHECK(r.wall_ms == 0.0);
  }
  const auto cap = ExperimentConfig::from_json(
      {{"experiment", "security-scan"}, {"m", 3}, {"q", 1}, {"state", "ghz"}, {"trials", 10}});
  CHECK_THROWS_AS(run(cap), CapError);
  const auto timed = run(ExperimentConfig::from_json({{"experiment", "decoy"}}), {.timing = true});
  CHECK(timed.front().wall_ms > 0.0);
}

TEST_CASE("csv emission", "[harness]") {
  const auto r = sample_record();
  const std::vector<ResultRecord> one{r};
  const auto csv = to_csv(one);
  CHECK(csv ==
        std::string(kCsvHeader) + "\nauth-sweep:P0,2,2,1,,1000,haar_exact,depolarizing(p=0.3),0.775,2.5e-16,0.775,,42,0\n");
  CHECK(parse_csv(csv) == one);
  CHECK(parse_json(to_json(one)) == one);

  auto third = r;
  third.estimate = 1.0 / 3.0;
  const auto back = parse_csv(to_csv(std::vector<ResultRecord>{third}));
  CHECK(back[0].estimate == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(to_csv(back) == to_csv(std::vector<ResultRecord>{third}));
  CHECK(parse_json(to_json(back)) == back);

  CHECK_THROWS(emit(one, Format::csv, "/nonexistent-dir/out.csv"));
  CHECK_THROWS(emit({}, Format::csv, ""));
  const auto path = std::filesystem::temp_directory_path() / "pqaslab_emit_test.json";
  emit(one, Format::json, path.string());
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(parse_json(text) == one);
  std::filesystem::remove(path);
}

TEST_CASE("sweeps without a column tag the record name", "[harness]") {
  const auto cfg = ExperimentConfig::from_json(
      {{"experiment", "qubit-count"}, {"s", {1, 2}}, {"trials", 2}, {"shots", 200}});
  const auto records = run(cfg);
  REQUIRE(records.size() == 6);
  CHECK(records[0].experiment == "qubit-count:smallest@s=1");
  CHECK(records[3].experiment == "qubit-count:smallest@s=2");
  const auto plain = run(ExperimentConfig::from_json({{"experiment", "cpa"}, {"m", {0, 1}}, {"trials", 5}}));
  CHECK(plain[0].experiment == "cpa");
}
