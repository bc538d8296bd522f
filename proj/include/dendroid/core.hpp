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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dendroid/error.hpp"

namespace dendroid {

using Vertex = std::size_t;
using Category = std::int32_t;

/// A column is either finite-valued (category labels in a fixed order) or
/// Gaussian. Gaussian variables carry no declared parameters.
class VariableKind {
 public:
  static VariableKind discrete(std::vector<std::string> labels);
  static VariableKind gaussian() { return VariableKind{}; }

  bool is_discrete() const noexcept { return !labels_.empty(); }
  bool is_gaussian() const noexcept { return labels_.empty(); }

  /// α for discrete variables; 0 for Gaussian ones.
  std::size_t cardinality() const noexcept { return labels_.size(); }

  /// Cardinality used in parameter counting: α for discrete, 2 for Gaussian.
  std::size_t counting_arity() const noexcept {
    return is_discrete() ? labels_.size() : 2;
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<Category> category_of(std::string_view label) const;

  friend bool operator==(const VariableKind&, const VariableKind&) = default;

 private:
  VariableKind() = default;
  std::vector<std::string> labels_;
};

struct Variable {
  std::string name;
  VariableKind kind;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class VariableSchema {
 public:
  explicit VariableSchema(std::vector<Variable> variables);

  std::size_t size() const noexcept { return variables_.size(); }
  const Variable& operator[](Vertex v) const { return variables_.at(v); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  std::optional<Vertex> index_of(std::string_view name) const;

  friend bool operator==(const VariableSchema&, const VariableSchema&) = default;

 private:
  std::vector<Variable> variables_;
};

/// Column storage: category indices for discrete variables, reals for
/// Gaussian ones.
using Column = std::variant<std::vector<Category>, std::vector<double>>;

/// Immutable column-major table of n validated rows.
class Dataset {
 public:
  Dataset(VariableSchema schema, std::vector<Column> columns);

  const VariableSchema& schema() const noexcept { return schema_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }

  std::span<const Category> categories(Vertex column) const;
  std::span<const double> values(Vertex column) const;
  const Column& column(Vertex column) const { return columns_.at(column); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  VariableSchema schema_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Raw textual record, one string per column.
using RawRecord = std::vector<std::string>;

/// Map raw text rows onto a Dataset. Discrete cells must be labels from the
/// schema; Gaussian cells must parse as finite reals. `lines` optionally
/// gives the source line of each record for diagnostics (default: 1-based
/// record index).
Dataset validate_dataset(const VariableSchema& schema,
                         std::span<const RawRecord> raw_rows,
                         std::span<const std::size_t> lines = {});

struct ScoredEdge {
  Vertex i = 0;
  Vertex j = 0;
  double mi = 0.0;
  double penalty = 0.0;
  double score = 0.0;

  friend bool operator==(const ScoredEdge&, const ScoredEdge&) = default;
};

/// Builds a ScoredEdge with i < j, mi clamped to >= 0 and score = mi - penalty.
/// An infinite mi yields an infinite score.
ScoredEdge make_scored_edge(Vertex a, Vertex b, double mi, double penalty);

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Acyclic undirected edge set; edges are stored normalized (u < v) and
/// sorted.
class Forest {
 public:
  explicit Forest(std::size_t n_vertices, std::vector<Edge> edges = {});

  std::size_t n_vertices() const noexcept { return n_vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool contains(Vertex a, Vertex b) const;

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  std::size_t n_vertices_ = 0;
  std::vector<Edge> edges_;
};

/// Parent map; std::nullopt marks a component root.
class RootedForest {
 public:
  explicit RootedForest(std::vector<std::optional<Vertex>> parent);

  std::size_t size() const noexcept { return parent_.size(); }
  std::optional<Vertex> parent(Vertex v) const { return parent_.at(v); }
  const std::vector<std::optional<Vertex>>& parents() const noexcept {
    return parent_;
  }

  /// Vertices ordered so that every parent precedes its children.
  std::vector<Vertex> topological_order() const;
  Forest undirected() const;

 private:
  std::vector<std::optional<Vertex>> parent_;
};

/// Roots every component. A component containing a discrete vertex is rooted
/// at the vertex that maximizes discrete-parent/Gaussian-child edges,
/// preferring discrete vertices and then the lowest id.
RootedForest orient_forest(const Forest& forest, const VariableSchema& schema);

/// Root every component at its lowest-id vertex (kind-agnostic).
RootedForest orient_forest(const Forest& forest);

}  // namespace dendroid
