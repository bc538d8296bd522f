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

#include "dendroid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "dendroid/random.hpp"

namespace dendroid::oracle {

namespace {

struct Search {
  std::size_t n = 0;
  std::vector<ScoredEdge> edges;  // canonical order
  bool spanning = false;
  bool use_mi = false;

  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;
  double best_total = -std::numeric_limits<double>::infinity();
  bool found = false;

  double weight(std::size_t k) const { return use_mi ? edges[k].mi : edges[k].score; }

  // component[v] labels; copied per level (n <= 8).
  void run(std::size_t k, std::vector<std::size_t> component, double total) {
    if (spanning && chosen.size() + (edges.size() - k) < n - 1) return;
    if (k == edges.size() || (spanning && chosen.size() == n - 1)) {
      if (spanning && chosen.size() != n - 1) return;
      if (!found || total > best_total) {
        found = true;
        best_total = total;
        best = chosen;
      }
      return;
    }
    const ScoredEdge& e = edges[k];
    if (component[e.i] != component[e.j]) {
      std::vector<std::size_t> merged = component;
      const std::size_t from = component[e.j];
      for (auto& c : merged) {
        if (c == from) c = component[e.i];
      }
      chosen.push_back(k);
      run(k + 1, std::move(merged), total + weight(k));
      chosen.pop_back();
    }
    run(k + 1, std::move(component), total);
  }
};

std::size_t volume(const std::vector<std::size_t>& cards) {
  std::size_t v = 1;
  for (auto c : cards) v *= c;
  return v;
}

}  // namespace

Forest brute_force_best_forest(std::size_t n_vertices, std::span<const ScoredEdge> edges,
                               bool require_spanning_tree) {
  if (n_vertices > kMaxEnumerationVertices) {
    throw Error(ErrorCode::TooLarge, "exhaustive search is limited to " +
                                         std::to_string(kMaxEnumerationVertices) + " vertices");
  }
  Search search;
  search.n = n_vertices;
  search.edges.assign(edges.begin(), edges.end());
  for (const auto& e : search.edges) {
    if (e.i >= e.j || e.j >= n_vertices) {
      throw Error(ErrorCode::InvalidArgument, "edges must be normalized and in range");
    }
  }
  std::sort(search.edges.begin(), search.edges.end(), [](const ScoredEdge& a, const ScoredEdge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  search.spanning = require_spanning_tree;
  search.use_mi = require_spanning_tree;
  if (n_vertices <= 1) return Forest(n_vertices);

  std::vector<std::size_t> component(n_vertices);
  for (std::size_t v = 0; v < n_vertices; ++v) component[v] = v;
  search.run(0, component, 0.0);
  if (!search.found) {
    throw Error(ErrorCode::InvalidArgument, "the candidate edges admit no spanning tree");
  }
  std::vector<Edge> out;
  for (std::size_t k : search.best) out.push_back({search.edges[k].i, search.edges[k].j});
  return Forest(n_vertices, std::move(out));
}

// ---------------------------------------------------------------------------
// Small joints

SmallJoint::SmallJoint(std::vector<std::size_t> cardinalities, std::vector<double> probs)
    : cards_(std::move(cardinalities)), probs_(std::move(probs)) {
  if (cards_.empty() || cards_.size() > 6) {
    throw Error(ErrorCode::TooLarge, "small joints cover 1 to 6 variables");
  }
  for (auto c : cards_) {
    if (c < 2) throw Error(ErrorCode::InvalidArgument, "cardinalities must be >= 2");
  }
  if (probs_.size() != volume(cards_)) {
    throw Error(ErrorCode::InvalidArgument, "joint table has the wrong size");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "joint does not sum to 1");
}

std::vector<std::size_t> SmallJoint::assignment(std::size_t index) const {
  std::vector<std::size_t> x(cards_.size());
  for (std::size_t k = cards_.size(); k-- > 0;) {
    x[k] = index % cards_[k];
    index /= cards_[k];
  }
  return x;
}

std::vector<double> SmallJoint::marginal(Vertex i) const {
  std::vector<double> m(cards_.at(i), 0.0);
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) m[assignment(idx)[i]] += probs_[idx];
  return m;
}

std::vector<double> SmallJoint::pair_marginal(Vertex i, Vertex j) const {
  const std::size_t cj = cards_.at(j);
  std::vector<double> m(cards_.at(i) * cj, 0.0);
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    const auto x = assignment(idx);
    m[x[i] * cj + x[j]] += probs_[idx];
  }
  return m;
}

double SmallJoint::mutual_information(Vertex i, Vertex j) const {
  const auto pij = pair_marginal(i, j);
  const auto pi = marginal(i);
  const auto pj = marginal(j);
  double total = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) {
    for (std::size_t y = 0; y < pj.size(); ++y) {
      const double p = pij[x * pj.size() + y];
      if (p > 0.0) total += p * std::log(p / (pi[x] * pj[y]));
    }
  }
  return total;
}

double SmallJoint::total_correlation() const {
  std::vector<std::vector<double>> margins;
  for (Vertex v = 0; v < cards_.size(); ++v) margins.push_back(marginal(v));
  double total = 0.0;
  for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
    const double p = probs_[idx];
    if (p <= 0.0) continue;
    const auto x = assignment(idx);
    double prod = 1.0;
    for (Vertex v = 0; v < cards_.size(); ++v) prod *= margins[v][x[v]];
    total += p * std::log(p / prod);
  }
  return total;
}

SmallJoint dendroid_projection(const SmallJoint& joint, const RootedForest& rooted) {
  const std::size_t n = joint.variables();
  if (rooted.size() != n) throw Error(ErrorCode::SchemaMismatch, "parent map size differs from the joint");
  std::vector<std::vector<double>> margins(n);
  std::vector<std::vector<double>> pairs(n);
  for (Vertex v = 0; v < n; ++v) {
    margins[v] = joint.marginal(v);
    if (rooted.parent(v)) pairs[v] = joint.pair_marginal(v, *rooted.parent(v));
  }
  std::vector<double> q(joint.probs().size());
  for (std::size_t idx = 0; idx < q.size(); ++idx) {
    const auto x = joint.assignment(idx);
    double value = 1.0;
    for (Vertex v = 0; v < n; ++v) {
      const auto parent = rooted.parent(v);
      if (!parent) {
        value *= margins[v][x[v]];
        continue;
      }
      const double pp = margins[*parent][x[*parent]];
      const double pj = pairs[v][x[v] * joint.cardinalities()[*parent] + x[*parent]];
      value *= pp > 0.0 ? pj / pp : 0.0;
    }
    q[idx] = value;
  }
  // Renormalize rounding only; Q sums to 1 analytically.
  double sum = 0.0;
  for (double p : q) sum += p;
  for (double& p : q) p /= sum;
  return SmallJoint(joint.cardinalities(), std::move(q));
}

double exact_kl_dendroid(const SmallJoint& joint, const RootedForest& rooted) {
  const SmallJoint q = dendroid_projection(joint, rooted);
  double total = 0.0;
  for (std::size_t idx = 0; idx < joint.probs().size(); ++idx) {
    const double p = joint.probs()[idx];
    if (p <= 0.0) continue;
    const double qv = q.probs()[idx];
    if (!(qv > 0.0)) {
      throw Error(ErrorCode::UnsupportedSupport, "Q vanishes where P is positive");
    }
    total += p * std::log(p / qv);
  }
  return total;
}

double kl_decomposition(const SmallJoint& joint, const RootedForest& rooted) {
  double total = joint.total_correlation();
  for (Vertex v = 0; v < rooted.size(); ++v) {
    if (rooted.parent(v)) total -= joint.mutual_information(v, *rooted.parent(v));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Monte Carlo

MonteCarloEstimate mc_mutual_information(const MixedFactor& factor, std::size_t draws,
                                         std::uint64_t seed) {
  if (draws < 10000) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least 10^4 draws");
  const std::size_t k = factor.class_probs.size();
  if (k == 0 || factor.class_means.size() != k || !(factor.variance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "malformed mixed factor");
  }
  std::vector<double> log_p(k);
  for (std::size_t y = 0; y < k; ++y) {
    log_p[y] = factor.class_probs[y] > 0.0 ? std::log(factor.class_probs[y])
                                           : -std::numeric_limits<double>::infinity();
  }
  const double sd = std::sqrt(factor.variance);
  Rng rng(seed);
  std::vector<double> terms(k);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const std::size_t y = rng.categorical(factor.class_probs);
    const double x = rng.normal(factor.class_means[y], sd);
    // ln f(x|y) - ln Σ_z p_z f(x|z); the shared normalizer cancels.
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < k; ++z) {
      const double dz = x - factor.class_means[z];
      terms[z] = log_p[z] - 0.5 * dz * dz / factor.variance;
      top = std::max(top, terms[z]);
    }
    double acc = 0.0;
    for (std::size_t z = 0; z < k; ++z) acc += std::exp(terms[z] - top);
    const double dy = x - factor.class_means[y];
    const double value = -0.5 * dy * dy / factor.variance - (top + std::log(acc));
    // Welford update.
    const double delta = value - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (value - mean);
  }
  const double var = m2 / static_cast<double>(draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

}  // namespace dendroid::oracle
