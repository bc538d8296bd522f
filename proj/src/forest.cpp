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

#include "dendroid/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "dendroid/union_find.hpp"

namespace dendroid {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accepted: return "accepted";
    case Verdict::RejectedLoop: return "loop";
    case Verdict::RejectedNegative: return "negative";
  }
  return "unknown";
}

namespace {

enum class Mode { SpanningTree, NonnegativeForest };

ForestBuild kruskal(std::size_t n_vertices, std::span<const ScoredEdge> edges, Mode mode) {
  if (n_vertices >= 2 && edges.empty()) {
    throw Error(ErrorCode::EmptyEdgeList, "no candidate edges for " +
                                              std::to_string(n_vertices) + " vertices");
  }
  for (const auto& e : edges) {
    if (e.i >= e.j || e.j >= n_vertices) {
      throw Error(ErrorCode::InvalidArgument, "candidate edge (" + std::to_string(e.i) + ", " +
                                                  std::to_string(e.j) + ") is not normalized");
    }
    if (std::isnan(e.mi) || std::isnan(e.score)) {
      throw Error(ErrorCode::InvalidArgument, "candidate edge weight is NaN");
    }
  }

  auto weight = [mode](const ScoredEdge& e) {
    return mode == Mode::SpanningTree ? e.mi : e.score;
  };
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double wa = weight(edges[a]);
    const double wb = weight(edges[b]);
    if (wa != wb) return wa > wb;
    return std::tie(edges[a].i, edges[a].j) < std::tie(edges[b].i, edges[b].j);
  });

  UnionFind uf(n_vertices);
  std::vector<Edge> chosen;
  ForestBuild build{Forest(n_vertices), {}};
  build.decisions.reserve(edges.size());
  bool exhausted = false;
  for (std::size_t k : order) {
    const ScoredEdge& e = edges[k];
    if (mode == Mode::NonnegativeForest && (exhausted || weight(e) < 0.0)) {
      exhausted = true;
      build.decisions.push_back({e, Verdict::RejectedNegative});
      continue;
    }
    if (uf.unite(e.i, e.j)) {
      chosen.push_back({e.i, e.j});
      build.decisions.push_back({e, Verdict::Accepted});
    } else {
      build.decisions.push_back({e, Verdict::RejectedLoop});
    }
  }
  build.forest = Forest(n_vertices, std::move(chosen));
  return build;
}

double forest_sum(const Forest& forest, std::span<const ScoredEdge> edges, bool use_mi) {
  double total = 0.0;
  for (const auto& fe : forest.edges()) {
    auto it = std::find_if(edges.begin(), edges.end(), [&](const ScoredEdge& e) {
      return e.i == fe.u && e.j == fe.v;
    });
    if (it == edges.end()) {
      throw Error(ErrorCode::InvalidArgument, "forest edge has no weight");
    }
    total += use_mi ? it->mi : it->score;
  }
  return total;
}

}  // namespace

ForestBuild build_tree_chow_liu_traced(std::size_t n_vertices, std::span<const ScoredEdge> edges) {
  return kruskal(n_vertices, edges, Mode::SpanningTree);
}

Forest build_tree_chow_liu(std::size_t n_vertices, std::span<const ScoredEdge> edges) {
  return kruskal(n_vertices, edges, Mode::SpanningTree).forest;
}

ForestBuild build_forest_suzuki_traced(std::size_t n_vertices, std::span<const ScoredEdge> edges) {
  return kruskal(n_vertices, edges, Mode::NonnegativeForest);
}

Forest build_forest_suzuki(std::size_t n_vertices, std::span<const ScoredEdge> edges) {
  return kruskal(n_vertices, edges, Mode::NonnegativeForest).forest;
}

double total_mi(const Forest& forest, std::span<const ScoredEdge> edges) {
  return forest_sum(forest, edges, true);
}

double total_score(const Forest& forest, std::span<const ScoredEdge> edges) {
  return forest_sum(forest, edges, false);
}

}  // namespace dendroid
