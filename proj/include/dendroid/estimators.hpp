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

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "dendroid/core.hpp"
#include "dendroid/quadrature.hpp"

// Sufficient statistics and sample-scaled mutual information estimates.
//
// Every estimator returns I_n = n × (plug-in mutual information) in nats, so
// that scores for all three pair kinds are directly comparable with the
// (k/2)·d_n penalty.

namespace dendroid {

using Count = std::uint64_t;

struct DiscretePairStats {
  Vertex i = 0;
  Vertex j = 0;
  std::size_t alpha_i = 0;
  std::size_t alpha_j = 0;
  std::vector<Count> joint;  // row-major, alpha_i × alpha_j
  std::vector<Count> marginal_i;
  std::vector<Count> marginal_j;
  std::size_t n = 0;

  Count count(std::size_t x, std::size_t y) const { return joint[x * alpha_j + y]; }
};

/// Biased (divide-by-n) moments of two Gaussian columns.
struct GaussianPairStats {
  Vertex i = 0;
  Vertex j = 0;
  double mean_i = 0.0;
  double mean_j = 0.0;
  double var_i = 0.0;
  double var_j = 0.0;
  double cov = 0.0;
  double rho = 0.0;
  std::size_t n = 0;
};

/// Gaussian column regressed on a discrete one: X = g(Y) + eps, eps ~ N(0, φ).
struct MixedPairStats {
  Vertex gaussian = 0;
  Vertex discrete = 0;
  bool swapped = false;  // true when the caller's i was the discrete column
  std::vector<Count> class_counts;
  std::vector<double> class_means;  // ĝ(y); 0 for empty classes
  double pooled_variance = 0.0;     // φ̂
  double mean = 0.0;                // marginal moments of the Gaussian column
  double variance = 0.0;
  std::size_t n = 0;
};

using PairStats = std::variant<DiscretePairStats, GaussianPairStats, MixedPairStats>;

PairStats collect_pair_stats(const Dataset& data, Vertex i, Vertex j);

double mi_discrete(const DiscretePairStats& stats);

/// -(n/2) ln(1 - ρ̂²); +infinity when |ρ̂| = 1.
double mi_gaussian(const GaussianPairStats& stats);
double mi_gaussian(double rho, std::size_t n);

double mi_mixed(const MixedPairStats& stats, const QuadratureSpec& quad = {});

/// Per-sample mutual information between a class label with probabilities
/// `probs` and a Gaussian whose class-conditional law is N(means[y], variance).
/// Classes with zero probability are ignored. The result lies in
/// [0, H(probs)].
double mixture_mutual_information(std::span<const double> probs,
                                  std::span<const double> means, double variance,
                                  const QuadratureSpec& quad = {});

double estimate_mi(const PairStats& stats, const QuadratureSpec& quad = {});

/// Entropy in nats of a probability vector (zero entries contribute 0).
double entropy(std::span<const double> probs);

}  // namespace dendroid
