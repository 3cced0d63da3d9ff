// Copyright 2026 The streamdds Authors
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


#ifndef STREAMDDS__BENCH__STATS_HPP_
#define STREAMDDS__BENCH__STATS_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace streamdds::bench
{

struct Stats
{
  double mean = 0.0;
  /// Population standard deviation (divisor n).
  double sigma = 0.0;
};

/// Single-pass (Welford) mean and population standard deviation.
inline Stats stats(std::span<const double> samples)
{
  if (samples.empty()) {
    throw std::invalid_argument("stats of an empty sample set");
  }
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : samples) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(k))};
}

/// Durations in nanoseconds with their summary.
struct Measurement
{
  std::vector<double> samples;
  double t_avg = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;

  static Measurement from(std::vector<double> samples)
  {
    Measurement m;
    auto s = stats(samples);
    m.t_avg = s.mean;
    m.sigma = s.sigma;
    m.n = samples.size();
    m.samples = std::move(samples);
    return m;
  }
};

/// Drops the first floor(fraction * n) samples.
inline std::vector<double> discard_warmup(const std::vector<double> & samples, double fraction = 0.05)
{
  const auto skip = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(samples.size())));
  return {samples.begin() + static_cast<std::ptrdiff_t>(skip), samples.end()};
}

}  // namespace streamdds::bench

#endif  // STREAMDDS__BENCH__STATS_HPP_
