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


#include <cmath>
#include <limits>

#include "doctest.h"
#include "dendroid/core.hpp"
#include "dendroid/union_find.hpp"
#include "support.hpp"

using namespace dendroid;
using dendroid::testing::disc;
using dendroid::testing::e1;
using dendroid::testing::error_of;
using dendroid::testing::gauss;

TEST_CASE("schema rejects malformed declarations") {
  CHECK(error_of([] { VariableKind::discrete({"only"}); }) == ErrorCode::InvalidSchema);
  CHECK(error_of([] { VariableKind::discrete({"a", "a"}); }) == ErrorCode::InvalidSchema);
  CHECK(error_of([] { VariableSchema({}); }) == ErrorCode::InvalidSchema);
  CHECK(error_of([] { VariableSchema({gauss("")}); }) == ErrorCode::InvalidSchema);
  CHECK(error_of([] { VariableSchema({gauss("x"), disc("x", 2)}); }) == ErrorCode::InvalidSchema);

  const VariableSchema s({disc("a", 3), gauss("b")});
  CHECK(s.size() == 2);
  CHECK(s.index_of("b") == 1u);
  CHECK_FALSE(s.index_of("zz").has_value());
  CHECK(s[0].kind.cardinality() == 3);
  CHECK(s[1].kind.counting_arity() == 2);
  CHECK(s[0].kind.category_of("c2") == 2);
}

TEST_CASE("validate_dataset maps labels by schema order") {
  const VariableSchema s({{"A", VariableKind::discrete({"no", "yes"})}});
  const std::vector<RawRecord> rows{{"yes"}, {"no"}};
  const Dataset d = validate_dataset(s, rows);
  REQUIRE(d.rows() == 2);
  CHECK(d.categories(0)[0] == 1);
  CHECK(d.categories(0)[1] == 0);
}

TEST_CASE("validate_dataset errors") {
  const VariableSchema g({gauss("A")});
  for (const char* bad : {"NaN", "nan", "inf", "-inf", "1e999"}) {
    const std::vector<RawRecord> rows{{bad}};
    CHECK(error_of([&] { validate_dataset(g, rows); }) == ErrorCode::NonFiniteValue);
  }
  const std::vector<RawRecord> junk{{"1.5x"}};
  CHECK(error_of([&] { validate_dataset(g, junk); }) == ErrorCode::ParseError);

  const VariableSchema four({gauss("a"), gauss("b"), gauss("c"), gauss("d")});
  const std::vector<RawRecord> short_row{{"1", "2", "3"}};
  CHECK(error_of([&] { validate_dataset(four, short_row); }) == ErrorCode::ArityMismatch);

  const VariableSchema d({disc("x", 2)});
  const std::vector<RawRecord> unknown{{"c0"}, {"c7"}};
  CHECK(error_of([&] { validate_dataset(d, unknown); }) == ErrorCode::UnknownCategory);
  CHECK(error_of([&] { validate_dataset(d, std::vector<RawRecord>{}); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("validate_dataset reports the source line") {
  const VariableSchema g({gauss("A")});
  const std::vector<RawRecord> rows{{"1"}, {"oops"}};
  const std::vector<std::size_t> lines{7, 9};
  try {
    validate_dataset(g, rows, lines);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 9") != std::string::npos);
  }
}

TEST_CASE("make_scored_edge normalizes") {
  const ScoredEdge e = make_scored_edge(3, 1, 5.0, 2.0);
  CHECK(e.i == 1);
  CHECK(e.j == 3);
  CHECK(e.score == 3.0);
  CHECK(make_scored_edge(0, 1, -1e-15, 0.0).mi == 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(make_scored_edge(0, 1, inf, 4.0).score == inf);
  CHECK(error_of([] { make_scored_edge(2, 2, 1.0, 0.0); }) == ErrorCode::SameVertex);
}

TEST_CASE("forest validation") {
  CHECK(error_of([] { Forest(3, {{0, 1}, {1, 2}, {0, 2}}); }) == ErrorCode::CyclicInput);
  CHECK(error_of([] { Forest(3, {{0, 1}, {1, 0}}); }) == ErrorCode::CyclicInput);
  CHECK(error_of([] { Forest(3, {{1, 1}}); }) == ErrorCode::CyclicInput);
  const Forest f(4, {{2, 1}, {0, 3}});
  CHECK(f.edges() == std::vector<Edge>{{0, 3}, {1, 2}});
  CHECK(f.contains(2, 1));
  CHECK_FALSE(f.contains(0, 1));
}

TEST_CASE("union-find") {
  UnionFind uf(5);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(3, 4));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.find(0) == uf.find(1));
  CHECK(uf.find(uf.find(3)) == uf.find(3));
  CHECK(uf.components() == 3);
}

TEST_CASE("rooted forest rejects cycles") {
  CHECK(error_of([] { RootedForest({1, 0}); }) == ErrorCode::CyclicInput);
  CHECK(error_of([] { RootedForest({std::nullopt, 5}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("orient the star from the introductory example") {
  const Forest star(4, {e1(1, 2), e1(1, 3), e1(1, 4)});
  const RootedForest r = orient_forest(star);
  CHECK_FALSE(r.parent(0).has_value());
  CHECK(r.parent(1) == 0u);
  CHECK(r.parent(2) == 0u);
  CHECK(r.parent(3) == 0u);
  CHECK(r.undirected() == star);
}

TEST_CASE("orient: empty forest leaves every vertex a root") {
  const RootedForest r = orient_forest(Forest(3));
  for (Vertex v = 0; v < 3; ++v) CHECK_FALSE(r.parent(v).has_value());
}

TEST_CASE("orient: chain g1 - d - g2 is rooted at the discrete vertex") {
  const VariableSchema s({gauss("g1"), disc("d", 3), gauss("g2")});
  const Forest chain(3, {{0, 1}, {1, 2}});
  const RootedForest r = orient_forest(chain, s);
  CHECK_FALSE(r.parent(1).has_value());
  CHECK(r.parent(0) == 1u);
  CHECK(r.parent(2) == 1u);

  // Brute check: of the three possible roots only d makes both edges
  // discrete-parent / Gaussian-child.
  auto count = [&](const RootedForest& rf) {
    int c = 0;
    for (Vertex v = 0; v < 3; ++v) {
      if (rf.parent(v) && s[*rf.parent(v)].kind.is_discrete() && s[v].kind.is_gaussian()) ++c;
    }
    return c;
  };
  CHECK(count(r) == 2);
  CHECK(count(RootedForest({std::nullopt, 0, 1})) == 1);
  CHECK(count(RootedForest({1, 2, std::nullopt})) == 1);
}

TEST_CASE("orient: property over random forests") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
    std::vector<Variable> vars;
    for (std::size_t v = 0; v < n; ++v) {
      vars.push_back(rng.uniform() < 0.5 ? gauss("v" + std::to_string(v))
                                         : disc("v" + std::to_string(v), 2 + v % 3));
    }
    const VariableSchema s(vars);
    // Random forest: attach each vertex to an earlier one or leave it alone.
    std::vector<Edge> edges;
    for (Vertex v = 1; v < n; ++v) {
      if (rng.uniform() < 0.7) edges.push_back({static_cast<Vertex>(rng.uniform() * v), v});
    }
    const Forest f(n, edges);
    const RootedForest r = orient_forest(f, s);
    CHECK(r.undirected() == f);
    const auto order = r.topological_order();
    CHECK(order.size() == n);
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
    for (Vertex v = 0; v < n; ++v) {
      if (r.parent(v)) CHECK(pos[*r.parent(v)] < pos[v]);
    }
    // Replaying the edges through union-find never merges twice.
    UnionFind uf(n);
    for (const auto& e : f.edges()) CHECK(uf.unite(e.u, e.v));
  }
}

TEST_CASE("dataset constructor checks columns") {
  const VariableSchema s({disc("a", 2), gauss("b")});
  CHECK(error_of([&] {
          Dataset(s, {std::vector<Category>{0, 1}, std::vector<double>{1.0}});
        }) == ErrorCode::ArityMismatch);
  CHECK(error_of([&] {
          Dataset(s, {std::vector<Category>{0, 2}, std::vector<double>{1.0, 2.0}});
        }) == ErrorCode::UnknownCategory);
  CHECK(error_of([&] {
          Dataset(s, {std::vector<Category>{0, 1}, std::vector<double>{1.0, NAN}});
        }) == ErrorCode::NonFiniteValue);
  const Dataset d(s, {std::vector<Category>{0, 1}, std::vector<double>{1.0, 2.0}});
  CHECK(d.rows() == 2);
  CHECK(d.values(1)[1] == 2.0);
  CHECK(error_of([&] { d.values(0); }) == ErrorCode::SchemaMismatch);
}
