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

#include <cstdlib>
#include <iostream>

#include "pqaslab/acceptance.hpp"

// Usage: acceptance [criterion]
int main(int argc, char** argv) {
  using namespace pqas::acceptance;
  bool ok = true;
  auto report = [&](const CriterionResult& r) {
    std::cout << r.line() << std::endl;
    ok = ok && r.passed;
  };
  if (argc > 1) {
    report(run_criterion(std::atoi(argv[1])));
  } else {
    run_all(kDefaultSeed, report);
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
