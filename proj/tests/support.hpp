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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dendroid/core.hpp"
#include "dendroid/error.hpp"
#include "dendroid/random.hpp"

namespace dendroid::testing {

/// Code of the dendroid::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Variable disc(std::string name, std::size_t alpha) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < alpha; ++k) labels.push_back("c" + std::to_string(k));
  return {std::move(name), VariableKind::discrete(std::move(labels))};
}

inline Variable gauss(std::string name) { return {std::move(name), VariableKind::gaussian()}; }

/// Every pair of n vertices in canonical order, mi uniform on [0, 10) and
/// penalty uniform on [0, max_penalty).
inline std::vector<ScoredEdge> random_edges(Rng& rng, std::size_t n, double max_penalty) {
  std::vector<ScoredEdge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const double mi = 10.0 * rng.uniform();
      edges.push_back(make_scored_edge(i, j, mi, max_penalty * rng.uniform()));
    }
  }
  return edges;
}

/// 1-based vertex pair to a 0-based edge.
inline Edge e1(Vertex a, Vertex b) { return {a - 1, b - 1}; }

}  // namespace dendroid::testing
