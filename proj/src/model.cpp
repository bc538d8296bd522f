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

#include "dendroid/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dendroid/estimators.hpp"
#include "dendroid/random.hpp"

namespace dendroid {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, "invalid model: " + what);
}

std::string edge_name(const VariableSchema& schema, const Edge& e) {
  return "{" + schema[e.u].name + ", " + schema[e.v].name + "}";
}

void check_distribution(const std::vector<double>& probs, const std::string& what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) invalid(what + " has a negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol) invalid(what + " does not sum to 1");
}

void check_marginal(const Variable& var, const NodeMarginal& marginal) {
  if (var.kind.is_discrete()) {
    const auto* m = std::get_if<DiscreteMarginal>(&marginal);
    if (m == nullptr) invalid("variable '" + var.name + "' needs a discrete marginal");
    if (m->probs.size() != var.kind.cardinality()) {
      invalid("marginal of '" + var.name + "' has the wrong arity");
    }
    check_distribution(m->probs, "marginal of '" + var.name + "'");
  } else {
    const auto* m = std::get_if<GaussianMarginal>(&marginal);
    if (m == nullptr) invalid("variable '" + var.name + "' needs a Gaussian marginal");
    if (!std::isfinite(m->mean)) invalid("mean of '" + var.name + "' is not finite");
    if (!(m->variance > 0.0) || !std::isfinite(m->variance)) {
      throw Error(ErrorCode::DegenerateGaussian, "variance of '" + var.name + "' is not positive");
    }
  }
}

void check_factor(const VariableSchema& schema, const std::vector<NodeMarginal>& marginals,
                  const EdgeFactor& factor) {
  const Edge& e = factor.edge;
  const Variable& vu = schema[e.u];
  const Variable& vv = schema[e.v];
  const std::string name = edge_name(schema, e);
  if (vu.kind.is_discrete() && vv.kind.is_discrete()) {
    const auto* f = std::get_if<DiscreteFactor>(&factor.params);
    if (f == nullptr) invalid("edge " + name + " needs a joint table");
    const std::size_t au = vu.kind.cardinality();
    const std::size_t av = vv.kind.cardinality();
    if (f->joint.size() != au * av) invalid("joint table of " + name + " has the wrong shape");
    check_distribution(f->joint, "joint table of " + name);
    const auto& pu = std::get<DiscreteMarginal>(marginals[e.u]).probs;
    const auto& pv = std::get<DiscreteMarginal>(marginals[e.v]).probs;
    for (std::size_t x = 0; x < au; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < av; ++y) row += f->joint[x * av + y];
      if (std::abs(row - pu[x]) > kProbTol) invalid("joint table of " + name + " disagrees with the row marginal");
    }
    for (std::size_t y = 0; y < av; ++y) {
      double col = 0.0;
      for (std::size_t x = 0; x < au; ++x) col += f->joint[x * av + y];
      if (std::abs(col - pv[y]) > kProbTol) invalid("joint table of " + name + " disagrees with the column marginal");
    }
  } else if (vu.kind.is_gaussian() && vv.kind.is_gaussian()) {
    const auto* f = std::get_if<GaussianFactor>(&factor.params);
    if (f == nullptr) invalid("edge " + name + " needs a correlation");
    if (!(std::abs(f->rho) < 1.0)) {
      throw Error(ErrorCode::DegenerateGaussian, "edge " + name + " has |rho| = 1");
    }
  } else {
    const auto* f = std::get_if<MixedFactor>(&factor.params);
    if (f == nullptr) invalid("edge " + name + " needs a class-conditional Gaussian");
    const Vertex g = vu.kind.is_gaussian() ? e.u : e.v;
    const Vertex d = vu.kind.is_gaussian() ? e.v : e.u;
    if (f->gaussian != g || f->discrete != d) invalid("edge " + name + " has swapped roles");
    const std::size_t alpha = schema[d].kind.cardinality();
    if (f->class_probs.size() != alpha || f->class_means.size() != alpha) {
      invalid("class parameters of " + name + " have the wrong arity");
    }
    check_distribution(f->class_probs, "class probabilities of " + name);
    const auto& pd = std::get<DiscreteMarginal>(marginals[d]).probs;
    for (std::size_t y = 0; y < alpha; ++y) {
      if (std::abs(f->class_probs[y] - pd[y]) > kProbTol) {
        invalid("class probabilities of " + name + " disagree with the node marginal");
      }
      if (!std::isfinite(f->class_means[y])) invalid("class mean of " + name + " is not finite");
    }
    if (!(f->variance > 0.0) || !std::isfinite(f->variance)) {
      throw Error(ErrorCode::DegenerateGaussian, "within-class variance of " + name + " is not positive");
    }
  }
}

double normal_log_density(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + d * d / variance);
}

}  // namespace

std::size_t parameter_count(const VariableSchema& schema, const Forest& forest) {
  std::size_t k = 0;
  for (const auto& var : schema.variables()) {
    k += var.kind.is_discrete() ? var.kind.cardinality() - 1 : 2;
  }
  for (const auto& e : forest.edges()) {
    k += (schema[e.u].kind.counting_arity() - 1) * (schema[e.v].kind.counting_arity() - 1);
  }
  return k;
}

DendroidModel::DendroidModel(VariableSchema schema, Forest forest,
                             std::vector<NodeMarginal> marginals,
                             std::vector<EdgeFactor> factors, std::size_t n)
    : schema_(std::move(schema)),
      forest_(std::move(forest)),
      marginals_(std::move(marginals)),
      factors_(std::move(factors)),
      n_(n) {
  if (forest_.n_vertices() != schema_.size()) {
    throw Error(ErrorCode::SchemaMismatch, "forest and schema disagree on the vertex count");
  }
  if (marginals_.size() != schema_.size()) invalid("one marginal per variable is required");
  for (Vertex v = 0; v < schema_.size(); ++v) check_marginal(schema_[v], marginals_[v]);
  if (factors_.size() != forest_.edges().size()) invalid("one factor per edge is required");
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].edge != forest_.edges()[k]) invalid("factors are not in forest edge order");
    check_factor(schema_, marginals_, factors_[k]);
  }
  k_ = dendroid::parameter_count(schema_, forest_);
}

DendroidModel fit(const Dataset& data, const Forest& forest) {
  const VariableSchema& schema = data.schema();
  if (forest.n_vertices() != schema.size()) {
    throw Error(ErrorCode::SchemaMismatch, "forest and dataset disagree on the vertex count");
  }
  const std::size_t n = data.rows();
  const double nd = static_cast<double>(n);

  std::vector<NodeMarginal> marginals;
  marginals.reserve(schema.size());
  for (Vertex v = 0; v < schema.size(); ++v) {
    if (schema[v].kind.is_discrete()) {
      std::vector<double> probs(schema[v].kind.cardinality(), 0.0);
      std::vector<Count> counts(probs.size(), 0);
      for (Category c : data.categories(v)) ++counts[static_cast<std::size_t>(c)];
      for (std::size_t x = 0; x < probs.size(); ++x) probs[x] = static_cast<double>(counts[x]) / nd;
      marginals.emplace_back(DiscreteMarginal{std::move(probs)});
    } else {
      const auto xs = data.values(v);
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= nd;
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var /= nd;
      if (!(var > 0.0)) {
        throw Error(ErrorCode::DegenerateGaussian,
                    "Gaussian column '" + schema[v].name + "' has zero sample variance");
      }
      marginals.emplace_back(GaussianMarginal{mean, var});
    }
  }

  std::vector<EdgeFactor> factors;
  for (const auto& e : forest.edges()) {
    PairStats stats = collect_pair_stats(data, e.u, e.v);
    EdgeFactor factor{e, GaussianFactor{}};
    if (const auto* s = std::get_if<DiscretePairStats>(&stats)) {
      DiscreteFactor f;
      f.joint.resize(s->joint.size());
      for (std::size_t k = 0; k < s->joint.size(); ++k) f.joint[k] = static_cast<double>(s->joint[k]) / nd;
      factor.params = std::move(f);
    } else if (const auto* s = std::get_if<GaussianPairStats>(&stats)) {
      if (!(std::abs(s->rho) < 1.0)) {
        throw Error(ErrorCode::DegenerateGaussian,
                    "edge " + edge_name(schema, e) + " is perfectly correlated");
      }
      factor.params = GaussianFactor{s->rho};
    } else {
      const auto& m = std::get<MixedPairStats>(stats);
      if (!(m.pooled_variance > 0.0)) {
        throw Error(ErrorCode::DegenerateGaussian,
                    "edge " + edge_name(schema, e) + " has zero within-class variance");
      }
      MixedFactor f;
      f.gaussian = m.gaussian;
      f.discrete = m.discrete;
      f.variance = m.pooled_variance;
      const auto& pd = std::get<DiscreteMarginal>(marginals[m.discrete]).probs;
      f.class_probs = pd;
      f.class_means.resize(m.class_counts.size());
      for (std::size_t y = 0; y < m.class_counts.size(); ++y) {
        f.class_means[y] = m.class_counts[y] > 0 ? m.class_means[y] : m.mean;
      }
      factor.params = std::move(f);
    }
    factors.push_back(std::move(factor));
  }
  return DendroidModel(schema, forest, std::move(marginals), std::move(factors), n);
}

namespace {

double node_term(const NodeMarginal& marginal, const Dataset& data, Vertex v, std::size_t r) {
  if (const auto* m = std::get_if<DiscreteMarginal>(&marginal)) {
    const double p = m->probs[static_cast<std::size_t>(data.categories(v)[r])];
    return p > 0.0 ? std::log(p) : kNegInf;
  }
  const auto& g = std::get<GaussianMarginal>(marginal);
  return normal_log_density(data.values(v)[r], g.mean, g.variance);
}

double edge_term(const DendroidModel& model, const EdgeFactor& factor, const Dataset& data,
                 std::size_t r) {
  const Edge& e = factor.edge;
  if (const auto* f = std::get_if<DiscreteFactor>(&factor.params)) {
    const auto x = static_cast<std::size_t>(data.categories(e.u)[r]);
    const auto y = static_cast<std::size_t>(data.categories(e.v)[r]);
    const std::size_t av = model.schema()[e.v].kind.cardinality();
    const double pj = f->joint[x * av + y];
    if (!(pj > 0.0)) return kNegInf;
    const double pu = std::get<DiscreteMarginal>(model.marginals()[e.u]).probs[x];
    const double pv = std::get<DiscreteMarginal>(model.marginals()[e.v]).probs[y];
    return std::log(pj) - std::log(pu) - std::log(pv);
  }
  if (const auto* f = std::get_if<GaussianFactor>(&factor.params)) {
    const auto& mu = std::get<GaussianMarginal>(model.marginals()[e.u]);
    const auto& mv = std::get<GaussianMarginal>(model.marginals()[e.v]);
    const double a = (data.values(e.u)[r] - mu.mean) / std::sqrt(mu.variance);
    const double b = (data.values(e.v)[r] - mv.mean) / std::sqrt(mv.variance);
    const double rho = f->rho;
    const double one_minus = 1.0 - rho * rho;
    return -0.5 * std::log1p(-rho * rho) - (rho * rho * (a * a + b * b) - 2.0 * rho * a * b) / (2.0 * one_minus);
  }
  const auto& f = std::get<MixedFactor>(factor.params);
  const auto y = static_cast<std::size_t>(data.categories(f.discrete)[r]);
  if (!(f.class_probs[y] > 0.0)) return kNegInf;
  const double x = data.values(f.gaussian)[r];
  const auto& mg = std::get<GaussianMarginal>(model.marginals()[f.gaussian]);
  // ln[P(y) f(x|y) / (P(y) N(x; μ, σ²))]
  return normal_log_density(x, f.class_means[y], f.variance) -
         normal_log_density(x, mg.mean, mg.variance);
}

void require_same_schema(const DendroidModel& model, const Dataset& data) {
  if (!(model.schema() == data.schema())) {
    throw Error(ErrorCode::SchemaMismatch, "dataset schema differs from the model schema");
  }
}

}  // namespace

double log_likelihood(const DendroidModel& model, const Dataset& data) {
  require_same_schema(model, data);
  const std::size_t n_vars = model.schema().size();
  double total = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    double row = 0.0;
    for (Vertex v = 0; v < n_vars; ++v) {
      const double t = node_term(model.marginals()[v], data, v, r);
      if (t == kNegInf) return kNegInf;
      row += t;
    }
    for (const auto& factor : model.factors()) {
      const double t = edge_term(model, factor, data, r);
      if (t == kNegInf) return kNegInf;
      row += t;
    }
    total += row;
  }
  return total;
}

double description_length(const DendroidModel& model, const Dataset& data,
                          const Criterion& criterion) {
  const double ll = log_likelihood(model, data);
  const double d_n = criterion.d_n(data.rows());
  return -ll + 0.5 * static_cast<double>(model.parameter_count()) * d_n;
}

Dataset sample(const DendroidModel& model, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::InvalidCount, "sample count must be at least 1");
  const VariableSchema& schema = model.schema();
  const std::size_t n_vars = schema.size();
  const RootedForest rooted = orient_forest(model.forest(), schema);
  const std::vector<Vertex> order = rooted.topological_order();

  // Factor lookup by child vertex.
  std::vector<const EdgeFactor*> factor_of(n_vars, nullptr);
  for (const auto& f : model.factors()) {
    const Vertex child = rooted.parent(f.edge.u) == f.edge.v ? f.edge.u : f.edge.v;
    factor_of[child] = &f;
  }

  std::vector<std::vector<Category>> cats(n_vars);
  std::vector<std::vector<double>> vals(n_vars);
  for (Vertex v = 0; v < n_vars; ++v) {
    if (schema[v].kind.is_discrete()) {
      cats[v].resize(count);
    } else {
      vals[v].resize(count);
    }
  }

  Rng rng(seed);
  std::vector<double> scratch;
  for (std::size_t r = 0; r < count; ++r) {
    for (Vertex v : order) {
      const auto parent = rooted.parent(v);
      const bool discrete = schema[v].kind.is_discrete();
      if (!parent) {
        if (discrete) {
          const auto& m = std::get<DiscreteMarginal>(model.marginals()[v]);
          cats[v][r] = static_cast<Category>(rng.categorical(m.probs));
        } else {
          const auto& m = std::get<GaussianMarginal>(model.marginals()[v]);
          vals[v][r] = rng.normal(m.mean, std::sqrt(m.variance));
        }
        continue;
      }
      const Vertex p = *parent;
      const EdgeFactor& factor = *factor_of[v];
      if (const auto* f = std::get_if<DiscreteFactor>(&factor.params)) {
        const std::size_t av = schema[factor.edge.v].kind.cardinality();
        const auto y = static_cast<std::size_t>(cats[p][r]);
        scratch.assign(schema[v].kind.cardinality(), 0.0);
        for (std::size_t x = 0; x < scratch.size(); ++x) {
          scratch[x] = v == factor.edge.u ? f->joint[x * av + y] : f->joint[y * av + x];
        }
        cats[v][r] = static_cast<Category>(rng.categorical(scratch));
      } else if (const auto* f = std::get_if<GaussianFactor>(&factor.params)) {
        const auto& mc = std::get<GaussianMarginal>(model.marginals()[v]);
        const auto& mp = std::get<GaussianMarginal>(model.marginals()[p]);
        const double sc = std::sqrt(mc.variance);
        const double sp = std::sqrt(mp.variance);
        const double mean = mc.mean + f->rho * sc / sp * (vals[p][r] - mp.mean);
        vals[v][r] = rng.normal(mean, sc * std::sqrt(1.0 - f->rho * f->rho));
      } else {
        const auto& mf = std::get<MixedFactor>(factor.params);
        if (!discrete) {
          const auto y = static_cast<std::size_t>(cats[p][r]);
          vals[v][r] = rng.normal(mf.class_means[y], std::sqrt(mf.variance));
        } else {
          // P(y | x) ∝ P(y) f(x | y)
          const double x = vals[p][r];
          scratch.assign(mf.class_probs.size(), kNegInf);
          double top = kNegInf;
          for (std::size_t y = 0; y < scratch.size(); ++y) {
            if (mf.class_probs[y] <= 0.0) continue;
            const double d = x - mf.class_means[y];
            scratch[y] = std::log(mf.class_probs[y]) - 0.5 * d * d / mf.variance;
            top = std::max(top, scratch[y]);
          }
          for (double& w : scratch) w = w == kNegInf ? 0.0 : std::exp(w - top);
          cats[v][r] = static_cast<Category>(rng.categorical(scratch));
        }
      }
    }
  }

  std::vector<Column> columns;
  columns.reserve(n_vars);
  for (Vertex v = 0; v < n_vars; ++v) {
    if (schema[v].kind.is_discrete()) {
      columns.emplace_back(std::move(cats[v]));
    } else {
      columns.emplace_back(std::move(vals[v]));
    }
  }
  return Dataset(schema, std::move(columns));
}

}  // namespace dendroid
