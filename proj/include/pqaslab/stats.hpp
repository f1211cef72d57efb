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

#include <boost/accumulators/accumulators.hpp>
#include <boost/accumulators/statistics/mean.hpp>
#include <boost/accumulators/statistics/stats.hpp>
#include <boost/accumulators/statistics/variance.hpp>
#include <cmath>
#include <cstddef>

namespace pqas {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Sample mean with the standard error of the mean.
class SampleStats {
 public:
  void add(double x) { acc_(x); }

  std::size_t count() const { return boost::accumulators::count(acc_); }
  double mean() const { return count() ? boost::accumulators::mean(acc_) : 0.0; }
  /// Unbiased sample variance.
  double variance() const {
    const auto n = static_cast<double>(count());
    return n > 1 ? boost::accumulators::variance(acc_) * n / (n - 1.0) : 0.0;
  }
  double std_error() const {
    const auto n = static_cast<double>(count());
    return n > 1 ? std::sqrt(variance() / n) : 0.0;
  }
  Estimate estimate() const { return {mean(), std_error()}; }

 private:
  boost::accumulators::accumulator_set<
      double, boost::accumulators::stats<boost::accumulators::tag::mean, boost::accumulators::tag::variance>>
      acc_;
};

}  // namespace pqas
