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
#include "dendroid/estimators.hpp"
#include "dendroid/model.hpp"
#include "dendroid/scoring.hpp"
#include "support.hpp"

using namespace dendroid;
using dendroid::testing::disc;
using dendroid::testing::error_of;
using dendroid::testing::gauss;

namespace {

// Random discrete data from a chain 0 - 1 - 2 - ... with random tables.
Dataset random_discrete(std::uint64_t seed, const std::vector<std::size_t>& alphas, std::size_t rows) {
  Rng rng(seed);
  std::vector<Variable> vars;
  for (std::size_t v = 0; v < alphas.size(); ++v) vars.push_back(disc("x" + std::to_string(v), alphas[v]));
  std::vector<std::vector<Category>> cols(alphas.size(), std::vector<Category>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t v = 0; v < alphas.size(); ++v) {
      if (v > 0 && rng.uniform() < 0.6) {
        cols[v][r] = static_cast<Category>(static_cast<std::size_t>(cols[v - 1][r]) % alphas[v]);
      } else {
        cols[v][r] = static_cast<Category>(rng.uniform() * static_cast<double>(alphas[v]));
      }
    }
  }
  std::vector<Column> columns(cols.begin(), cols.end());
  return Dataset(VariableSchema(vars), std::move(columns));
}

double plug_in_entropy_sum(const Dataset& d) {
  double h = 0.0;
  for (Vertex v = 0; v < d.cols(); ++v) {
    std::vector<double> p(d.schema()[v].kind.cardinality(), 0.0);
    for (Category c : d.categories(v)) p[static_cast<std::size_t>(c)] += 1.0 / static_cast<double>(d.rows());
    h += entropy(p);
  }
  return h;
}

DendroidModel mixed_model() {
  // a(discrete 3) - g(gaussian) - h(gaussian), a - b(discrete 2)
  const VariableSchema s({disc("a", 3), gauss("g"), gauss("h"), disc("b", 2)});
  const Forest f(4, {{0, 1}, {1, 2}, {0, 3}});
  const std::vector<double> pa{0.2, 0.3, 0.5};
  const std::vector<double> pb{0.5, 0.5};
  const std::vector<double> mg{-2.0, 0.0, 3.0};
  const double phi = 1.0;
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t y = 0; y < 3; ++y) {
    mean += pa[y] * mg[y];
    second += pa[y] * (phi + mg[y] * mg[y]);
  }
  std::vector<NodeMarginal> marg{DiscreteMarginal{pa}, GaussianMarginal{mean, second - mean * mean},
                                 GaussianMarginal{1.0, 4.0}, DiscreteMarginal{pb}};
  std::vector<EdgeFactor> fac{
      {{0, 1}, MixedFactor{1, 0, pa, mg, phi}},
      {{0, 3}, DiscreteFactor{{0.15, 0.05, 0.2, 0.1, 0.15, 0.35}}},
      {{1, 2}, GaussianFactor{0.7}},
  };
  return DendroidModel(s, f, marg, fac, 100);
}

}  // namespace

TEST_CASE("fit: relative frequencies and single-variable likelihood") {
  const VariableSchema s({disc("a", 2)});
  const Dataset d(s, {std::vector<Category>{0, 1, 0, 1}});
  const DendroidModel m = fit(d, Forest(1));
  CHECK(std::get<DiscreteMarginal>(m.marginals()[0]).probs == std::vector<double>{0.5, 0.5});
  CHECK(log_likelihood(m, d) == doctest::Approx(4 * std::log(0.5)).epsilon(1e-15));
  CHECK(m.parameter_count() == 1);
}

TEST_CASE("fit: mixed edge on the hand example") {
  const VariableSchema s({gauss("x"), {"y", VariableKind::discrete({"A", "B"})}});
  const Dataset d(s, {std::vector<double>{1.0, 3.0, 10.0, 12.0}, std::vector<Category>{0, 0, 1, 1}});
  const DendroidModel m = fit(d, Forest(2, {{0, 1}}));
  const auto& f = std::get<MixedFactor>(m.factors()[0].params);
  CHECK(f.gaussian == 0);
  CHECK(f.discrete == 1);
  CHECK(f.class_means == std::vector<double>{2.0, 11.0});
  CHECK(f.variance == 1.0);
}

TEST_CASE("parameter counting") {
  const VariableSchema gg({gauss("a"), gauss("b")});
  CHECK(parameter_count(gg, Forest(2, {{0, 1}})) == 5);
  CHECK(parameter_count(gg, Forest(2)) == 4);
  const VariableSchema mix({disc("a", 5), disc("b", 2), gauss("c"), disc("d", 4)});
  CHECK(parameter_count(mix, Forest(4)) == 4 + 1 + 2 + 3);
  // edges: (a,b) 4*1, (b,c) 1*1, (c,d) 1*3
  CHECK(parameter_count(mix, Forest(4, {{0, 1}, {1, 2}, {2, 3}})) == 10 + 4 + 1 + 3);
  CHECK(mixed_model().parameter_count() == 2 + 2 + 2 + 1 + 2 + 2 + 1);
}

TEST_CASE("edgeless likelihood equals minus n times the entropy sum") {
  const Dataset d = random_discrete(4, {2, 3, 4}, 300);
  const DendroidModel m = fit(d, Forest(3));
  const double want = -300.0 * plug_in_entropy_sum(d);
  CHECK(log_likelihood(m, d) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("likelihood decomposition on discrete data") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dataset d = random_discrete(seed, {2, 3, 2, 4, 3}, 250);
    const auto edges = score_all_pairs(d, Criterion::maximum_likelihood());
    const Forest f(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    double gain = 0.0;
    for (const auto& e : f.edges()) {
      for (const auto& s : edges) {
        if (s.i == e.u && s.j == e.v) gain += s.mi;
      }
    }
    const double want = gain - 250.0 * plug_in_entropy_sum(d);
    const double got = log_likelihood(fit(d, f), d);
    CHECK(std::abs(got - want) <= 1e-9 * std::abs(want));
  }
}

TEST_CASE("adding Gaussian and mixed edges") {
  Rng rng(12);
  const VariableSchema s({gauss("x"), gauss("y"), disc("c", 3)});
  std::vector<double> x, y;
  std::vector<Category> c;
  for (int r = 0; r < 400; ++r) {
    c.push_back(static_cast<Category>(rng.uniform() * 3));
    x.push_back(rng.normal(1.5 * c.back(), 1.0));
    y.push_back(-0.4 * x.back() + rng.normal());
  }
  const Dataset d(s, {x, y, c});
  const double base = log_likelihood(fit(d, Forest(3)), d);

  const auto gs = std::get<GaussianPairStats>(collect_pair_stats(d, 0, 1));
  const double with_xy = log_likelihood(fit(d, Forest(3, {{0, 1}})), d);
  CHECK(with_xy - base == doctest::Approx(mi_gaussian(gs)).epsilon(1e-9));

  // A fitted mixed edge gains (n/2) ln(σ̂² / φ̂).
  const auto ms = std::get<MixedPairStats>(collect_pair_stats(d, 0, 2));
  const double with_xc = log_likelihood(fit(d, Forest(3, {{0, 2}})), d);
  CHECK(with_xc - base == doctest::Approx(200.0 * std::log(ms.variance / ms.pooled_variance)).epsilon(1e-9));
}

TEST_CASE("description length") {
  const Dataset d = random_discrete(9, {2, 3, 2}, 120);
  const DendroidModel m = fit(d, Forest(3, {{0, 1}}));
  const double ll = log_likelihood(m, d);
  CHECK(description_length(m, d, Criterion::maximum_likelihood()) == -ll);
  CHECK(description_length(m, d, Criterion::mdl()) ==
        doctest::Approx(-ll + 0.5 * static_cast<double>(m.parameter_count()) * std::log(120.0)));
}

TEST_CASE("unseen category gives minus infinity") {
  const VariableSchema s({disc("a", 3)});
  const Dataset train(s, {std::vector<Category>{0, 1, 0, 1}});
  const Dataset test(s, {std::vector<Category>{0, 2}});
  const DendroidModel m = fit(train, Forest(1));
  CHECK(log_likelihood(m, test) == -std::numeric_limits<double>::infinity());
  CHECK(description_length(m, test, Criterion::mdl()) == std::numeric_limits<double>::infinity());
}

TEST_CASE("schema mismatch") {
  const Dataset d = random_discrete(2, {2, 2}, 10);
  const DendroidModel m = fit(d, Forest(2));
  const Dataset other = random_discrete(2, {2, 3}, 10);
  CHECK(error_of([&] { log_likelihood(m, other); }) == ErrorCode::SchemaMismatch);
}

TEST_CASE("fit rejects degenerate Gaussians") {
  const VariableSchema s({gauss("x"), gauss("y")});
  const Dataset d(s, {std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}});
  CHECK(error_of([&] { fit(d, Forest(2, {{0, 1}})); }) == ErrorCode::DegenerateGaussian);
  const Dataset flat(s, {std::vector<double>{1, 1, 1}, std::vector<double>{2, 4, 7}});
  CHECK(error_of([&] { fit(flat, Forest(2)); }) == ErrorCode::DegenerateGaussian);
}

TEST_CASE("model constructor validates parameters") {
  const VariableSchema s({disc("a", 2), disc("b", 2)});
  const Forest f(2, {{0, 1}});
  std::vector<NodeMarginal> marg{DiscreteMarginal{{0.5, 0.5}}, DiscreteMarginal{{0.5, 0.5}}};
  // joint whose row sums disagree with the marginal of a
  std::vector<EdgeFactor> bad{{{0, 1}, DiscreteFactor{{0.4, 0.2, 0.2, 0.2}}}};
  CHECK(error_of([&] { DendroidModel(s, f, marg, bad, 10); }) == ErrorCode::InvalidArgument);
  std::vector<EdgeFactor> good{{{0, 1}, DiscreteFactor{{0.3, 0.2, 0.2, 0.3}}}};
  CHECK_FALSE(error_of([&] { DendroidModel(s, f, marg, good, 10); }).has_value());
  std::vector<NodeMarginal> off{DiscreteMarginal{{0.6, 0.5}}, DiscreteMarginal{{0.5, 0.5}}};
  CHECK(error_of([&] { DendroidModel(s, Forest(2), off, {}, 10); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sampling is deterministic and validates the count") {
  const DendroidModel m = mixed_model();
  CHECK(sample(m, 200, 42) == sample(m, 200, 42));
  CHECK_FALSE(sample(m, 200, 42) == sample(m, 200, 43));
  CHECK(error_of([&] { sample(m, 0, 1); }) == ErrorCode::InvalidCount);
}

TEST_CASE("sampling a discrete chain reproduces its pairwise tables") {
  const VariableSchema s({disc("a", 2), disc("b", 3), disc("c", 2)});
  const Forest f(3, {{0, 1}, {1, 2}});
  const std::vector<double> pa{0.3, 0.7}, pb{0.25, 0.35, 0.4}, pc{0.45, 0.55};
  const std::vector<double> ab{0.05, 0.1, 0.15, 0.2, 0.25, 0.25};
  const std::vector<double> bc{0.2, 0.05, 0.15, 0.2, 0.1, 0.3};
  const DendroidModel m(s, f, {DiscreteMarginal{pa}, DiscreteMarginal{pb}, DiscreteMarginal{pc}},
                        {{{0, 1}, DiscreteFactor{ab}}, {{1, 2}, DiscreteFactor{bc}}}, 1);
  const std::size_t n = 50000;
  const Dataset d = sample(m, n, 2026);
  const DendroidModel refit = fit(d, f);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& want = std::get<DiscreteFactor>(m.factors()[k].params).joint;
    const auto& got = std::get<DiscreteFactor>(refit.factors()[k].params).joint;
    for (std::size_t c = 0; c < want.size(); ++c) {
      const double se = std::sqrt(want[c] * (1.0 - want[c]) / static_cast<double>(n));
      CHECK(std::abs(got[c] - want[c]) <= 3.0 * se);
    }
  }
}

TEST_CASE("sampling round trip recovers mixed and Gaussian parameters") {
  const DendroidModel m = mixed_model();
  const std::size_t n = 40000;
  const DendroidModel refit = fit(sample(m, n, 5), m.forest());
  const auto& mf = std::get<MixedFactor>(m.factors()[0].params);
  const auto& rf = std::get<MixedFactor>(refit.factors()[0].params);
  for (std::size_t y = 0; y < 3; ++y) {
    const double se = std::sqrt(mf.variance / (mf.class_probs[y] * static_cast<double>(n)));
    CHECK(std::abs(rf.class_means[y] - mf.class_means[y]) <= 3.0 * se);
  }
  const double rho = std::get<GaussianFactor>(m.factors()[2].params).rho;
  const double rho_hat = std::get<GaussianFactor>(refit.factors()[2].params).rho;
  CHECK(std::abs(rho_hat - rho) <= 3.0 * (1.0 - rho * rho) / std::sqrt(static_cast<double>(n)));
  const auto& h = std::get<GaussianMarginal>(refit.marginals()[2]);
  CHECK(std::abs(h.mean - 1.0) <= 3.0 * std::sqrt(4.0 / static_cast<double>(n)));
}

TEST_CASE("sampling an edgeless model gives independent columns") {
  const VariableSchema s({disc("a", 2), gauss("g")});
  const DendroidModel m(s, Forest(2), {DiscreteMarginal{{0.5, 0.5}}, GaussianMarginal{0.0, 1.0}}, {}, 1);
  const Dataset d = sample(m, 20000, 8);
  const auto stats = std::get<MixedPairStats>(collect_pair_stats(d, 0, 1));
  const double se = std::sqrt(1.0 / 10000.0);
  CHECK(std::abs(stats.class_means[0] - stats.class_means[1]) <= 3.0 * std::sqrt(2.0) * se);
}
