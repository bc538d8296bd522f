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
#include <string_view>
#include <vector>

#include "dendroid/core.hpp"

namespace dendroid {

enum class Verdict { Accepted, RejectedLoop, RejectedNegative };

std::string_view to_string(Verdict verdict);

/// One step of the greedy scan, in the order the candidates were examined.
struct EdgeDecision {
  ScoredEdge edge;
  Verdict verdict = Verdict::Accepted;
};

struct ForestBuild {
  Forest forest;
  std::vector<EdgeDecision> decisions;
};

/// Kruskal on descending mi; equal weights are taken in (i, j) order. Every
/// candidate that joins two components is admitted.
ForestBuild build_tree_chow_liu_traced(std::size_t n_vertices, std::span<const ScoredEdge> edges);
Forest build_tree_chow_liu(std::size_t n_vertices, std::span<const ScoredEdge> edges);

/// Kruskal on descending score, admitting only score >= 0. The scan stops at
/// the first negative score; all remaining candidates are reported as
/// RejectedNegative.
ForestBuild build_forest_suzuki_traced(std::size_t n_vertices, std::span<const ScoredEdge> edges);
Forest build_forest_suzuki(std::size_t n_vertices, std::span<const ScoredEdge> edges);

/// Sum of `weight` over the forest's edges, accumulated in the forest's
/// canonical edge order. Edges absent from `edges` are an error.
double total_mi(const Forest& forest, std::span<const ScoredEdge> edges);
double total_score(const Forest& forest, std::span<const ScoredEdge> edges);

}  // namespace dendroid
