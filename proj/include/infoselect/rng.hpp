// Copyright 2026 The Authors.
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
#include <vector>

namespace infoselect {

// Deterministic splitmix64 stream (constants 0x9e3779b97f4a7c15,
// 0xbf58476d1ce4e5b9, 0x94d049bb133111eb). Every stochastic path in the
// library draws from this generator so seeded runs reproduce bit-for-bit
// across platforms; std::random distributions are deliberately avoided.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  /// Standard normal deviate (Box-Muller, two draws per call).
  double normal();

  /// `count` distinct indices drawn uniformly from {0, ..., pool_size-1},
  /// in sampling order (partial Fisher-Yates).
  std::vector<int> sample_indices(int pool_size, int count);

 private:
  std::uint64_t state_;
};

}  // namespace infoselect
