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

#include "dendroid/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <tuple>
#include <thread>

#include "dendroid/estimators.hpp"

namespace dendroid {

Criterion Criterion::custom(double d_n) {
  if (!(d_n >= 0.0) || !std::isfinite(d_n)) {
    throw Error(ErrorCode::InvalidArgument, "d_n must be a nonnegative real");
  }
  return Criterion(Kind::Custom, d_n);
}

Criterion Criterion::parse(const std::string& name, double d_n) {
  if (name == "ml") return maximum_likelihood();
  if (name == "mdl") return mdl();
  if (name == "aic") return aic();
  if (name == "custom") return custom(d_n);
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + name + "'");
}

std::string Criterion::name() const {
  switch (kind_) {
    case Kind::MaximumLikelihood: return "ml";
    case Kind::MDL: return "mdl";
    case Kind::AIC: return "aic";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

double Criterion::d_n(std::size_t n) const {
  switch (kind_) {
    case Kind::MaximumLikelihood: return 0.0;
    case Kind::MDL: return n == 0 ? 0.0 : std::log(static_cast<double>(n));
    case Kind::AIC:
    case Kind::Custom: return custom_;
  }
  return 0.0;
}

double penalty_weight(const VariableKind& a, const VariableKind& b, double d_n) {
  if (!(d_n >= 0.0)) throw Error(ErrorCode::InvalidArgument, "d_n must be nonnegative");
  const auto ai = static_cast<double>(a.counting_arity());
  const auto aj = static_cast<double>(b.counting_arity());
  return 0.5 * (ai - 1.0) * (aj - 1.0) * d_n;
}

std::vector<ScoredEdge> score_all_pairs(const Dataset& data, const Criterion& criterion,
                                        const QuadratureSpec& quad, unsigned threads) {
  validate(quad);
  const std::size_t n_vars = data.cols();
  if (n_vars < 2) throw Error(ErrorCode::InvalidArgument, "scoring needs at least 2 variables");

  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex i = 0; i < n_vars; ++i) {
    for (Vertex j = i + 1; j < n_vars; ++j) pairs.emplace_back(i, j);
  }
  const double d_n = criterion.d_n(data.rows());
  const VariableSchema& schema = data.schema();
  std::vector<ScoredEdge> out(pairs.size());

  auto score_one = [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    try {
      const double mi = estimate_mi(collect_pair_stats(data, i, j), quad);
      out[k] = make_scored_edge(i, j, mi, penalty_weight(schema[i].kind, schema[j].kind, d_n));
    } catch (const Error& e) {
      throw Error(e.code(), "pair (" + schema[i].name + ", " + schema[j].name + "): " + e.what());
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) score_one(k);
    return out;
  }

  // Each slot is written by exactly one worker; the first error (by pair
  // index) is rethrown so failures are reported deterministically.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(pairs.size());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < pairs.size(); k = next++) {
        try {
          score_one(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<ScoredEdge> score_given_weights(const VariableSchema& schema,
                                            std::span<const PairWeight> weights,
                                            double d_n) {
  std::vector<ScoredEdge> out;
  out.reserve(weights.size());
  for (const auto& w : weights) {
    if (w.i >= schema.size() || w.j >= schema.size()) {
      throw Error(ErrorCode::InvalidArgument, "weight refers to an unknown vertex");
    }
    out.push_back(make_scored_edge(w.i, w.j, w.mi,
                                   penalty_weight(schema[w.i].kind, schema[w.j].kind, d_n)));
  }
  std::sort(out.begin(), out.end(), [](const ScoredEdge& a, const ScoredEdge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (out[k].i == out[k - 1].i && out[k].j == out[k - 1].j) {
      throw Error(ErrorCode::InvalidArgument, "duplicate pair in weight table");
    }
  }
  return out;
}

}  // namespace dendroid
