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
#include <functional>
#include <string>
#include <vector>

namespace pqas::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;

  /// "criterion <id> PASS|FAIL <name>: <detail> (<seconds>s)"
  std::string line() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr int kCriteria = 10;

CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);

/// Runs criteria 1..10 in order, calling on_result after each.
std::vector<CriterionResult> run_all(
    std::uint64_t seed = kDefaultSeed, const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace pqas::acceptance
