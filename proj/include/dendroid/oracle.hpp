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
#include <vector>

#include "dendroid/core.hpp"
#include "dendroid/model.hpp"

// Brute-force reference implementations. Nothing in here is used by the
// learning pipeline; these exist to check it.

namespace dendroid::oracle {

inline constexpr std::size_t kMaxEnumerationVertices = 8;

/// Exhaustive search over acyclic edge subsets (or spanning trees only).
/// Among equal totals the first subset in include-first enumeration order
/// over canonically sorted edges wins. Totals are accumulated in canonical
/// edge order, matching total_mi / total_score.
Forest brute_force_best_forest(std::size_t n_vertices, std::span<const ScoredEdge> edges,
                               bool require_spanning_tree);

/// Explicit joint probability table over a few discrete variables. The
/// assignment index is mixed-radix with variable 0 most significant.
class SmallJoint {
 public:
  SmallJoint(std::vector<std::size_t> cardinalities, std::vector<double> probs);

  std::size_t variables() const noexcept { return cards_.size(); }
  const std::vector<std::size_t>& cardinalities() const noexcept { return cards_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  std::vector<std::size_t> assignment(std::size_t index) const;
  std::vector<double> marginal(Vertex i) const;
  /// Row-major table over (i, j).
  std::vector<double> pair_marginal(Vertex i, Vertex j) const;
  double mutual_information(Vertex i, Vertex j) const;
  /// D(P || Π_i P_i)
  double total_correlation() const;

 private:
  std::vector<std::size_t> cards_;
  std::vector<double> probs_;
};

/// Q(x) = Π_i P(x_i | x_π(i)) built from the joint's own marginals.
SmallJoint dendroid_projection(const SmallJoint& joint, const RootedForest& rooted);

/// D(P || Q) by full enumeration, Q = dendroid_projection(P, rooted).
double exact_kl_dendroid(const SmallJoint& joint, const RootedForest& rooted);

/// -Σ_{π(i) set} I(i, π(i)) + D(P || Π_i P_i)
double kl_decomposition(const SmallJoint& joint, const RootedForest& rooted);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Per-sample mutual information of a class-conditional Gaussian factor,
/// by sampling (y, x) from the factor itself. Requires draws >= 10^4.
MonteCarloEstimate mc_mutual_information(const MixedFactor& factor, std::size_t draws,
                                         std::uint64_t seed);

}  // namespace dendroid::oracle
