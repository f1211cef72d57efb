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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace pqas::harness {

using Json = nlohmann::json;

struct ResultRecord {
  std::string experiment;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> l;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> t;
  std::optional<std::int64_t> trials;
  std::string mode;
  std::string channel;
  double estimate = 0.0;
  std::optional<double> std_error;
  std::optional<double> exact;
  std::optional<double> prediction;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  bool operator==(const ResultRecord&) const = default;
};

/// A flat JSON document. Every numeric field may be an array; the run covers
/// the Cartesian product of all arrays.
struct ExperimentConfig {
  std::string experiment;
  /// Parameters without "experiment", "seed", "out" and "format".
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> format;

  static ExperimentConfig from_json(const Json& doc);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// One object per grid point with defaults filled in. Validates names and
  /// value types.
  std::vector<Json> grid() const;
};

struct RunOptions {
  std::size_t threads = 1;
  /// Fill wall_ms; off by default so output is reproducible byte for byte.
  bool timing = false;
};

std::vector<std::string> experiment_names();

/// Records of one grid point. Deterministic in (experiment, point, seed).
std::vector<ResultRecord> run_point(const std::string& experiment, const Json& point, std::uint64_t seed);

std::vector<ResultRecord> run(const ExperimentConfig& config, const RunOptions& options = {});

enum class Format { csv, json };
Format parse_format(std::string_view name);

inline constexpr const char* kCsvHeader =
    "experiment,n,l,m,t,trials,mode,channel,estimate,stderr,exact,prediction,seed,wall_ms";

std::string to_csv(std::span<const ResultRecord> records);
std::string to_json(std::span<const ResultRecord> records);
std::vector<ResultRecord> parse_csv(std::string_view text);
std::vector<ResultRecord> parse_json(std::string_view text);

/// Writes to path, or to stdout when path is empty.
void emit(std::span<const ResultRecord> records, Format format, const std::string& path);

}  // namespace pqas::harness
