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

#include "dendroid/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <unordered_set>

#include "dendroid/union_find.hpp"

namespace dendroid {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::CyclicInput: return "CyclicInput";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::DegenerateGaussian: return "DegenerateGaussian";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EmptyEdgeList: return "EmptyEdgeList";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnsupportedSupport: return "UnsupportedSupport";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Schema

VariableKind VariableKind::discrete(std::vector<std::string> labels) {
  if (labels.size() < 2) {
    throw Error(ErrorCode::InvalidSchema,
                "a discrete variable needs at least 2 labels");
  }
  std::set<std::string_view> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw Error(ErrorCode::InvalidSchema, "duplicate label '" + label + "'");
    }
  }
  VariableKind kind;
  kind.labels_ = std::move(labels);
  return kind;
}

std::optional<Category> VariableKind::category_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Category>(it - labels_.begin());
}

VariableSchema::VariableSchema(std::vector<Variable> variables)
    : variables_(std::move(variables)) {
  if (variables_.empty()) {
    throw Error(ErrorCode::InvalidSchema, "schema declares no variables");
  }
  std::set<std::string_view> names;
  for (const auto& var : variables_) {
    if (var.name.empty()) {
      throw Error(ErrorCode::InvalidSchema, "variable with empty name");
    }
    if (!names.insert(var.name).second) {
      throw Error(ErrorCode::InvalidSchema,
                  "duplicate variable name '" + var.name + "'");
    }
  }
}

std::optional<Vertex> VariableSchema::index_of(std::string_view name) const {
  for (Vertex v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name == name) return v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(VariableSchema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "dataset has " + std::to_string(columns_.size()) +
                    " columns, schema declares " +
                    std::to_string(schema_.size()));
  }
  rows_ = std::visit([](const auto& c) { return c.size(); }, columns_.front());
  if (rows_ == 0) throw Error(ErrorCode::EmptyDataset, "dataset has no rows");

  for (Vertex v = 0; v < columns_.size(); ++v) {
    const Variable& var = schema_[v];
    const Column& col = columns_[v];
    std::size_t len = std::visit([](const auto& c) { return c.size(); }, col);
    if (len != rows_) {
      throw Error(ErrorCode::ArityMismatch,
                  "column '" + var.name + "' has " + std::to_string(len) +
                      " rows, expected " + std::to_string(rows_));
    }
    if (var.kind.is_discrete()) {
      const auto* cats = std::get_if<std::vector<Category>>(&col);
      if (cats == nullptr) {
        throw Error(ErrorCode::SchemaMismatch,
                    "column '" + var.name + "' must hold categories");
      }
      const auto alpha = static_cast<Category>(var.kind.cardinality());
      for (std::size_t r = 0; r < rows_; ++r) {
        if ((*cats)[r] < 0 || (*cats)[r] >= alpha) {
          throw Error(ErrorCode::UnknownCategory,
                      "row " + std::to_string(r) + ", column '" + var.name +
                          "': category index " + std::to_string((*cats)[r]) +
                          " out of range");
        }
      }
    } else {
      const auto* vals = std::get_if<std::vector<double>>(&col);
      if (vals == nullptr) {
        throw Error(ErrorCode::SchemaMismatch,
                    "column '" + var.name + "' must hold reals");
      }
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!std::isfinite((*vals)[r])) {
          throw Error(ErrorCode::NonFiniteValue,
                      "row " + std::to_string(r) + ", column '" + var.name +
                          "': non-finite value");
        }
      }
    }
  }
}

std::span<const Category> Dataset::categories(Vertex column) const {
  const auto* cats = std::get_if<std::vector<Category>>(&columns_.at(column));
  if (cats == nullptr) {
    throw Error(ErrorCode::SchemaMismatch,
                "column '" + schema_[column].name + "' is not discrete");
  }
  return *cats;
}

std::span<const double> Dataset::values(Vertex column) const {
  const auto* vals = std::get_if<std::vector<double>>(&columns_.at(column));
  if (vals == nullptr) {
    throw Error(ErrorCode::SchemaMismatch,
                "column '" + schema_[column].name + "' is not Gaussian");
  }
  return *vals;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string location(std::size_t line, const Variable& var) {
  return "line " + std::to_string(line) + ", column '" + var.name + "'";
}

}  // namespace

Dataset validate_dataset(const VariableSchema& schema,
                         std::span<const RawRecord> raw_rows,
                         std::span<const std::size_t> lines) {
  if (raw_rows.empty()) throw Error(ErrorCode::EmptyDataset, "no data rows");

  std::vector<Column> columns;
  columns.reserve(schema.size());
  for (const auto& var : schema.variables()) {
    if (var.kind.is_discrete()) {
      columns.emplace_back(std::vector<Category>(raw_rows.size()));
    } else {
      columns.emplace_back(std::vector<double>(raw_rows.size()));
    }
  }

  for (std::size_t r = 0; r < raw_rows.size(); ++r) {
    const RawRecord& record = raw_rows[r];
    const std::size_t line = r < lines.size() ? lines[r] : r + 1;
    if (record.size() != schema.size()) {
      throw Error(ErrorCode::ArityMismatch,
                  "line " + std::to_string(line) + ": expected " +
                      std::to_string(schema.size()) + " cells, found " +
                      std::to_string(record.size()));
    }
    for (Vertex v = 0; v < schema.size(); ++v) {
      const Variable& var = schema[v];
      const std::string_view cell = trim(record[v]);
      if (var.kind.is_discrete()) {
        auto category = var.kind.category_of(cell);
        if (!category) {
          throw Error(ErrorCode::UnknownCategory,
                      location(line, var) + ": unknown category '" +
                          std::string(cell) + "'");
        }
        std::get<std::vector<Category>>(columns[v])[r] = *category;
      } else {
        double value = 0.0;
        std::string_view text = cell;
        if (!text.empty() && text.front() == '+') text.remove_prefix(1);
        auto [end, ec] =
            std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc{} ||
            end != text.data() + text.size()) {
          // from_chars reports out-of-range for overflow; that is still a
          // non-finite cell as far as the data model is concerned.
          if (ec == std::errc::result_out_of_range) {
            throw Error(ErrorCode::NonFiniteValue,
                        location(line, var) + ": value out of range");
          }
          throw Error(ErrorCode::ParseError,
                      location(line, var) + ": '" + std::string(cell) +
                          "' is not a number");
        }
        if (!std::isfinite(value)) {
          throw Error(ErrorCode::NonFiniteValue,
                      location(line, var) + ": non-finite value '" +
                          std::string(cell) + "'");
        }
        std::get<std::vector<double>>(columns[v])[r] = value;
      }
    }
  }
  return Dataset(schema, std::move(columns));
}

// ---------------------------------------------------------------------------
// Edges and forests

ScoredEdge make_scored_edge(Vertex a, Vertex b, double mi, double penalty) {
  if (a == b) throw Error(ErrorCode::SameVertex, "edge endpoints coincide");
  if (std::isnan(mi) || std::isnan(penalty) || penalty < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid mi or penalty");
  }
  ScoredEdge e;
  e.i = std::min(a, b);
  e.j = std::max(a, b);
  e.mi = mi < 0.0 ? 0.0 : mi;
  e.penalty = penalty;
  e.score = std::isinf(e.mi) ? e.mi : e.mi - e.penalty;
  return e;
}

Forest::Forest(std::size_t n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
  UnionFind uf(n_vertices_);
  for (auto& e : edges_) {
    if (e.u == e.v) {
      throw Error(ErrorCode::CyclicInput,
                  "self-loop on vertex " + std::to_string(e.u));
    }
    if (e.u >= n_vertices_ || e.v >= n_vertices_) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!uf.unite(e.u, e.v)) {
      throw Error(ErrorCode::CyclicInput,
                  "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      "} closes a loop or repeats an edge");
    }
  }
  std::sort(edges_.begin(), edges_.end());
}

bool Forest::contains(Vertex a, Vertex b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

RootedForest::RootedForest(std::vector<std::optional<Vertex>> parent)
    : parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  for (Vertex v = 0; v < n; ++v) {
    Vertex cur = v;
    std::size_t steps = 0;
    while (parent_[cur]) {
      cur = *parent_[cur];
      if (cur >= n) {
        throw Error(ErrorCode::InvalidArgument, "parent out of range");
      }
      if (++steps > n) {
        throw Error(ErrorCode::CyclicInput,
                    "parent map cycles through vertex " + std::to_string(v));
      }
    }
  }
}

std::vector<Vertex> RootedForest::topological_order() const {
  const std::size_t n = parent_.size();
  std::vector<std::vector<Vertex>> children(n);
  std::vector<Vertex> order;
  order.reserve(n);
  for (Vertex v = 0; v < n; ++v) {
    if (parent_[v]) {
      children[*parent_[v]].push_back(v);
    } else {
      order.push_back(v);
    }
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Vertex c : children[order[head]]) order.push_back(c);
  }
  return order;
}

Forest RootedForest::undirected() const {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < parent_.size(); ++v) {
    if (parent_[v]) edges.push_back({v, *parent_[v]});
  }
  return Forest(parent_.size(), std::move(edges));
}

namespace {

using Adjacency = std::vector<std::vector<Vertex>>;

Adjacency adjacency_of(const Forest& forest) {
  Adjacency adj(forest.n_vertices());
  for (const auto& e : forest.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

// BFS from root; fills parent for every vertex reached and returns them in
// visiting order.
std::vector<Vertex> hang_from(const Adjacency& adj, Vertex root,
                              std::vector<std::optional<Vertex>>& parent) {
  std::vector<Vertex> visited{root};
  std::vector<bool> seen(adj.size(), false);
  seen[root] = true;
  parent[root] = std::nullopt;
  for (std::size_t head = 0; head < visited.size(); ++head) {
    const Vertex v = visited[head];
    for (Vertex w : adj[v]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      visited.push_back(w);
    }
  }
  return visited;
}

RootedForest orient_impl(const Forest& forest, const VariableSchema* schema) {
  const std::size_t n = forest.n_vertices();
  if (schema != nullptr && schema->size() != n) {
    throw Error(ErrorCode::SchemaMismatch,
                "forest and schema disagree on the vertex count");
  }
  // Re-validate: a Forest is acyclic by construction, but a parent map must
  // never be built from anything else.
  Forest checked(n, forest.edges());
  const Adjacency adj = adjacency_of(checked);

  std::vector<std::optional<Vertex>> parent(n);
  std::vector<bool> assigned(n, false);
  for (Vertex start = 0; start < n; ++start) {
    if (assigned[start]) continue;
    std::vector<std::optional<Vertex>> scratch(n);
    const std::vector<Vertex> component = hang_from(adj, start, scratch);

    Vertex best_root = start;
    if (schema != nullptr) {
      auto discrete = [&](Vertex v) { return (*schema)[v].kind.is_discrete(); };
      long best_count = -1;
      bool best_discrete = false;
      std::vector<Vertex> sorted = component;
      std::sort(sorted.begin(), sorted.end());
      for (Vertex candidate : sorted) {
        hang_from(adj, candidate, scratch);
        long count = 0;
        for (Vertex v : component) {
          if (scratch[v] && discrete(*scratch[v]) && !discrete(v)) ++count;
        }
        const bool cand_discrete = discrete(candidate);
        if (count > best_count ||
            (count == best_count && cand_discrete && !best_discrete)) {
          best_count = count;
          best_discrete = cand_discrete;
          best_root = candidate;
        }
      }
    }
    for (Vertex v : hang_from(adj, best_root, parent)) assigned[v] = true;
  }
  return RootedForest(std::move(parent));
}

}  // namespace

RootedForest orient_forest(const Forest& forest, const VariableSchema& schema) {
  return orient_impl(forest, &schema);
}

RootedForest orient_forest(const Forest& forest) {
  return orient_impl(forest, nullptr);
}

}  // namespace dendroid
