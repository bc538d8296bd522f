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

#include <span>
#include <string>
#include <vector>

#include "dendroid/core.hpp"
#include "dendroid/quadrature.hpp"

namespace dendroid {

/// Edge-weight criterion. The penalty per edge is (1/2)(a_i-1)(a_j-1)·d_n.
///
///   MaximumLikelihood  d_n = 0 (Chow-Liu)
///   MDL                d_n = ln n
///   AIC                d_n = 2 (a convenience preset)
///   Custom             d_n supplied by the caller, >= 0
class Criterion {
 public:
  enum class Kind { MaximumLikelihood, MDL, AIC, Custom };

  static Criterion maximum_likelihood() { return Criterion(Kind::MaximumLikelihood, 0.0); }
  static Criterion mdl() { return Criterion(Kind::MDL, 0.0); }
  static Criterion aic() { return Criterion(Kind::AIC, 2.0); }
  static Criterion custom(double d_n);

  /// Parses "ml", "mdl", "aic" or "custom" (the latter needs `d_n`).
  static Criterion parse(const std::string& name, double d_n = -1.0);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  /// Penalty multiplier for a sample of size n.
  double d_n(std::size_t n) const;

 private:
  Criterion(Kind kind, double custom) : kind_(kind), custom_(custom) {}
  Kind kind_;
  double custom_;
};

double penalty_weight(const VariableKind& a, const VariableKind& b, double d_n);

/// Scores every pair (i < j) of columns, in canonical (i, j) order. Work is
/// split over `threads` workers; results do not depend on the split.
std::vector<ScoredEdge> score_all_pairs(const Dataset& data, const Criterion& criterion,
                                        const QuadratureSpec& quad = {},
                                        unsigned threads = 1);

/// Known mutual-information value for a named pair; used to score tables that
/// were computed elsewhere.
struct PairWeight {
  Vertex i = 0;
  Vertex j = 0;
  double mi = 0.0;
};

/// Applies the criterion's penalty to given I_n values. The output is sorted
/// in canonical order.
std::vector<ScoredEdge> score_given_weights(const VariableSchema& schema,
                                            std::span<const PairWeight> weights,
                                            double d_n);

}  // namespace dendroid
