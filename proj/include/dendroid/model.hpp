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
#include <variant>
#include <vector>

#include "dendroid/core.hpp"
#include "dendroid/scoring.hpp"

namespace dendroid {

struct DiscreteMarginal {
  std::vector<double> probs;
  friend bool operator==(const DiscreteMarginal&, const DiscreteMarginal&) = default;
};

struct GaussianMarginal {
  double mean = 0.0;
  double variance = 1.0;
  friend bool operator==(const GaussianMarginal&, const GaussianMarginal&) = default;
};

using NodeMarginal = std::variant<DiscreteMarginal, GaussianMarginal>;

/// Joint table over (edge.u, edge.v), row-major with edge.u as the row.
struct DiscreteFactor {
  std::vector<double> joint;
  friend bool operator==(const DiscreteFactor&, const DiscreteFactor&) = default;
};

/// Bivariate normal; the means and variances are those of the node marginals.
struct GaussianFactor {
  double rho = 0.0;
  friend bool operator==(const GaussianFactor&, const GaussianFactor&) = default;
};

/// Gaussian column given a discrete one: N(class_means[y], variance).
struct MixedFactor {
  Vertex gaussian = 0;
  Vertex discrete = 0;
  std::vector<double> class_probs;
  std::vector<double> class_means;
  double variance = 1.0;
  friend bool operator==(const MixedFactor&, const MixedFactor&) = default;
};

struct EdgeFactor {
  Edge edge;
  std::variant<DiscreteFactor, GaussianFactor, MixedFactor> params;
  friend bool operator==(const EdgeFactor&, const EdgeFactor&) = default;
};

/// Fitted forest-structured distribution. Construction validates every
/// parameter and derives the parameter count k.
class DendroidModel {
 public:
  /// `factors` must list one factor per forest edge, in forest edge order.
  DendroidModel(VariableSchema schema, Forest forest, std::vector<NodeMarginal> marginals,
                std::vector<EdgeFactor> factors, std::size_t n);

  const VariableSchema& schema() const noexcept { return schema_; }
  const Forest& forest() const noexcept { return forest_; }
  const std::vector<NodeMarginal>& marginals() const noexcept { return marginals_; }
  const std::vector<EdgeFactor>& factors() const noexcept { return factors_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t parameter_count() const noexcept { return k_; }

  friend bool operator==(const DendroidModel&, const DendroidModel&) = default;

 private:
  VariableSchema schema_;
  Forest forest_;
  std::vector<NodeMarginal> marginals_;
  std::vector<EdgeFactor> factors_;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
};

/// Σ node params (α-1 or 2) + Σ edges (a_i-1)(a_j-1), with a = 2 for Gaussian.
std::size_t parameter_count(const VariableSchema& schema, const Forest& forest);

DendroidModel fit(const Dataset& data, const Forest& forest);

/// Σ over rows of the log density of each row under the pairwise-ratio
/// factorization. Rows that hit a zero-probability cell contribute -inf.
double log_likelihood(const DendroidModel& model, const Dataset& data);

/// -log_likelihood + (k/2)·d_n, with d_n taken from the criterion at the
/// data's row count.
double description_length(const DendroidModel& model, const Dataset& data,
                          const Criterion& criterion);

/// Ancestral sampling along orient_forest(model.forest(), model.schema()).
Dataset sample(const DendroidModel& model, std::size_t count, std::uint64_t seed);

}  // namespace dendroid
