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
#include <string>

#include "doctest.h"
#include "dendroid/scoring.hpp"
#include "support.hpp"

using namespace dendroid;
using dendroid::testing::disc;
using dendroid::testing::error_of;
using dendroid::testing::gauss;

namespace {

Dataset mixed_dataset(std::uint64_t seed, std::size_t rows) {
  Rng rng(seed);
  const VariableSchema s({disc("a", 3), gauss("b"), gauss("c"), disc("d", 2), gauss("e")});
  std::vector<Category> a, d;
  std::vector<double> b, c, e;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto ya = static_cast<Category>(rng.uniform() * 3);
    a.push_back(ya);
    b.push_back(rng.normal(0.7 * ya, 1.0));
    c.push_back(0.3 * b.back() + rng.normal());
    d.push_back(rng.uniform() < (ya == 0 ? 0.2 : 0.6) ? 1 : 0);
    e.push_back(rng.normal());
  }
  return Dataset(s, {a, b, c, d, e});
}

}  // namespace

TEST_CASE("penalty weights") {
  const auto d5 = VariableKind::discrete({"a", "b", "c", "d", "e"});
  const auto d2 = VariableKind::discrete({"a", "b"});
  const auto d4 = VariableKind::discrete({"a", "b", "c", "d"});
  const auto g = VariableKind::gaussian();
  CHECK(penalty_weight(d5, d2, 2.0) == 4.0);
  CHECK(penalty_weight(g, g, 2.0) == 1.0);
  CHECK(penalty_weight(g, d4, 2.0) == 3.0);
  CHECK(penalty_weight(d4, g, 2.0) == 3.0);
  CHECK(penalty_weight(d5, d4, 0.0) == 0.0);
  CHECK(error_of([&] { penalty_weight(g, g, -1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("criteria") {
  CHECK(Criterion::maximum_likelihood().d_n(1000) == 0.0);
  CHECK(Criterion::mdl().d_n(1000) == std::log(1000.0));
  CHECK(Criterion::aic().d_n(1000) == 2.0);
  CHECK(Criterion::custom(0.25).d_n(7) == 0.25);
  CHECK(Criterion::parse("mdl").name() == "mdl");
  CHECK(Criterion::parse("custom", 3.0).d_n(1) == 3.0);
  CHECK(error_of([] { Criterion::parse("bic"); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([] { Criterion::custom(-0.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("second worked example: given weights and cardinalities") {
  const VariableSchema s({disc("X1", 5), disc("X2", 2), disc("X3", 3), disc("X4", 4)});
  const std::vector<PairWeight> w{{0, 1, 12}, {0, 2, 10}, {1, 2, 8},
                                  {0, 3, 6},  {1, 3, 4},  {2, 3, 2}};
  const auto edges = score_given_weights(s, w, 2.0);
  REQUIRE(edges.size() == 6);
  const double want[] = {8, 2, 6, -6, 1, -4};
  // canonical order: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
  CHECK(edges[0].score == want[0]);
  CHECK(edges[1].score == want[1]);
  CHECK(edges[2].score == want[3]);
  CHECK(edges[3].score == want[2]);
  CHECK(edges[4].score == want[4]);
  CHECK(edges[5].score == want[5]);

  const std::vector<PairWeight> dup{{0, 1, 1}, {1, 0, 2}};
  CHECK(error_of([&] { score_given_weights(s, dup, 2.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("orthogonal Gaussian columns score zero under maximum likelihood") {
  // Columns of an 8x8 Hadamard matrix: zero mean, pairwise orthogonal.
  const VariableSchema s({gauss("a"), gauss("b"), gauss("c"), gauss("d")});
  const Dataset d(s, {std::vector<double>{1, -1, 1, -1, 1, -1, 1, -1},
                      std::vector<double>{1, 1, -1, -1, 1, 1, -1, -1},
                      std::vector<double>{1, -1, -1, 1, 1, -1, -1, 1},
                      std::vector<double>{1, 1, 1, 1, -1, -1, -1, -1}});
  const auto edges = score_all_pairs(d, Criterion::maximum_likelihood());
  REQUIRE(edges.size() == 6);
  for (const auto& e : edges) CHECK(e.score == 0.0);
}

TEST_CASE("score_all_pairs properties") {
  const Dataset data = mixed_dataset(3, 500);
  const auto ml = score_all_pairs(data, Criterion::maximum_likelihood());
  const auto mdl = score_all_pairs(data, Criterion::mdl());
  REQUIRE(ml.size() == 10);
  std::size_t k = 0;
  for (Vertex i = 0; i < 5; ++i) {
    for (Vertex j = i + 1; j < 5; ++j, ++k) {
      CHECK(ml[k].i == i);
      CHECK(ml[k].j == j);
      CHECK(ml[k].score == ml[k].mi);
      CHECK(mdl[k].mi == ml[k].mi);
      CHECK(mdl[k].score == mdl[k].mi - mdl[k].penalty);
      CHECK(ml[k].score >= mdl[k].score);
    }
  }
  // Scores are nonincreasing in d_n.
  auto prev = score_all_pairs(data, Criterion::custom(0.0));
  for (double dn : {0.5, 1.0, 2.0, 8.0}) {
    const auto cur = score_all_pairs(data, Criterion::custom(dn));
    for (std::size_t m = 0; m < cur.size(); ++m) CHECK(cur[m].score <= prev[m].score);
    prev = cur;
  }
}

TEST_CASE("threaded scoring is bit-identical to sequential") {
  const Dataset data = mixed_dataset(8, 300);
  const auto seq = score_all_pairs(data, Criterion::mdl(), {}, 1);
  for (unsigned t : {2u, 3u, 16u}) CHECK(score_all_pairs(data, Criterion::mdl(), {}, t) == seq);
}

TEST_CASE("estimator errors name the pair") {
  const VariableSchema s({gauss("alpha"), gauss("flat")});
  const Dataset d(s, {std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5}});
  for (unsigned t : {1u, 4u}) {
    try {
      score_all_pairs(d, Criterion::mdl(), {}, t);
      FAIL("expected DegenerateGaussian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateGaussian);
      CHECK(std::string(e.what()).find("flat") != std::string::npos);
    }
  }
}

TEST_CASE("perfect correlation yields an infinite score") {
  const VariableSchema s({gauss("x"), gauss("y")});
  const Dataset d(s, {std::vector<double>{1, 2, 4}, std::vector<double>{2, 4, 8}});
  const auto edges = score_all_pairs(d, Criterion::mdl());
  CHECK(std::isinf(edges[0].score));
  CHECK(edges[0].score > 0);
}
