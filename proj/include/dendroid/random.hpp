// Copyright 2026 The Dendroid Authors
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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace dendroid {

/// Reproducible generator: std::mt19937_64 (fully specified by the C++
/// standard) with hand-written transforms, so a seed yields the same stream
/// on every conforming platform.
///
///   uniform():     top 53 bits of one engine draw, scaled to [0, 1)
///   normal():      Box-Muller on two uniforms, cosine branch only
///   categorical(): inverse CDF over the given probabilities
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::size_t categorical(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] <= 0.0) continue;
      last_positive = k;
      acc += probs[k];
      if (target < acc) return k;
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dendroid
