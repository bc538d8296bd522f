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

#include "dendroid/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dendroid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_spread(const Dataset& data, Vertex v, double variance) {
  if (!(variance > 0.0)) {
    throw Error(ErrorCode::DegenerateGaussian,
                "Gaussian column '" + data.schema()[v].name +
                    "' has zero sample variance");
  }
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments_of(std::span<const double> xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(xs.size());
  return m;
}

DiscretePairStats discrete_stats(const Dataset& data, Vertex i, Vertex j) {
  DiscretePairStats s;
  s.i = i;
  s.j = j;
  s.alpha_i = data.schema()[i].kind.cardinality();
  s.alpha_j = data.schema()[j].kind.cardinality();
  s.n = data.rows();
  s.joint.assign(s.alpha_i * s.alpha_j, 0);
  s.marginal_i.assign(s.alpha_i, 0);
  s.marginal_j.assign(s.alpha_j, 0);
  const auto xs = data.categories(i);
  const auto ys = data.categories(j);
  for (std::size_t r = 0; r < s.n; ++r) {
    const auto x = static_cast<std::size_t>(xs[r]);
    const auto y = static_cast<std::size_t>(ys[r]);
    ++s.joint[x * s.alpha_j + y];
    ++s.marginal_i[x];
    ++s.marginal_j[y];
  }
  return s;
}

GaussianPairStats gaussian_stats(const Dataset& data, Vertex i, Vertex j) {
  GaussianPairStats s;
  s.i = i;
  s.j = j;
  s.n = data.rows();
  const auto xs = data.values(i);
  const auto ys = data.values(j);
  const Moments mx = moments_of(xs);
  const Moments my = moments_of(ys);
  require_spread(data, i, mx.variance);
  require_spread(data, j, my.variance);
  double cov = 0.0;
  for (std::size_t r = 0; r < s.n; ++r) cov += (xs[r] - mx.mean) * (ys[r] - my.mean);
  cov /= static_cast<double>(s.n);
  s.mean_i = mx.mean;
  s.mean_j = my.mean;
  s.var_i = mx.variance;
  s.var_j = my.variance;
  s.cov = cov;
  s.rho = std::clamp(cov / std::sqrt(mx.variance * my.variance), -1.0, 1.0);
  return s;
}

MixedPairStats mixed_stats(const Dataset& data, Vertex gaussian, Vertex discrete,
                           bool swapped) {
  MixedPairStats s;
  s.gaussian = gaussian;
  s.discrete = discrete;
  s.swapped = swapped;
  s.n = data.rows();
  const std::size_t alpha = data.schema()[discrete].kind.cardinality();
  const auto xs = data.values(gaussian);
  const auto ys = data.categories(discrete);
  const Moments m = moments_of(xs);
  require_spread(data, gaussian, m.variance);
  s.mean = m.mean;
  s.variance = m.variance;

  s.class_counts.assign(alpha, 0);
  s.class_means.assign(alpha, 0.0);
  for (std::size_t r = 0; r < s.n; ++r) {
    const auto y = static_cast<std::size_t>(ys[r]);
    ++s.class_counts[y];
    s.class_means[y] += xs[r];
  }
  for (std::size_t y = 0; y < alpha; ++y) {
    if (s.class_counts[y] > 0) s.class_means[y] /= static_cast<double>(s.class_counts[y]);
  }
  double residual = 0.0;
  for (std::size_t r = 0; r < s.n; ++r) {
    const double d = xs[r] - s.class_means[static_cast<std::size_t>(ys[r])];
    residual += d * d;
  }
  s.pooled_variance = residual / static_cast<double>(s.n);
  return s;
}

}  // namespace

PairStats collect_pair_stats(const Dataset& data, Vertex i, Vertex j) {
  if (i == j) throw Error(ErrorCode::SameVertex, "pair statistics need two distinct columns");
  if (i >= data.cols() || j >= data.cols()) {
    throw Error(ErrorCode::InvalidArgument, "column index out of range");
  }
  const bool di = data.schema()[i].kind.is_discrete();
  const bool dj = data.schema()[j].kind.is_discrete();
  if (di && dj) return discrete_stats(data, i, j);
  if (!di && !dj) return gaussian_stats(data, i, j);
  if (!di) return mixed_stats(data, i, j, false);
  return mixed_stats(data, j, i, true);
}

double mi_discrete(const DiscretePairStats& s) {
  const double n = static_cast<double>(s.n);
  double total = 0.0;
  for (std::size_t x = 0; x < s.alpha_i; ++x) {
    for (std::size_t y = 0; y < s.alpha_j; ++y) {
      const Count c = s.count(x, y);
      if (c == 0) continue;
      const double cd = static_cast<double>(c);
      total += cd * std::log(n * cd / (static_cast<double>(s.marginal_i[x]) *
                                       static_cast<double>(s.marginal_j[y])));
    }
  }
  return std::max(total, 0.0);
}

double mi_gaussian(double rho, std::size_t n) {
  if (std::isnan(rho) || std::abs(rho) > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "correlation outside [-1, 1]");
  }
  const double one_minus = 1.0 - rho * rho;
  if (one_minus <= 0.0) return kInf;
  return std::max(-0.5 * static_cast<double>(n) * std::log1p(-rho * rho), 0.0);
}

double mi_gaussian(const GaussianPairStats& s) {
  if (!(s.var_i > 0.0) || !(s.var_j > 0.0)) {
    throw Error(ErrorCode::DegenerateGaussian, "zero variance in Gaussian pair");
  }
  return mi_gaussian(s.rho, s.n);
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

namespace {

// Mixture on the standardized axis u = x / sqrt(φ); only classes with
// positive probability.
struct Mixture {
  std::vector<double> log_p;
  std::vector<double> p;
  std::vector<double> mu;
};

// ln f_y(u) - ln Σ_z p_z f_z(u), where f are unit-variance normal densities.
double log_ratio(const Mixture& mix, std::size_t y, double u) {
  const std::size_t k = mix.p.size();
  // s_z = ln(f_z / f_y) = -(m_y - m_z)(2u - m_y - m_z) / 2
  double s_absmax = 0.0;
  double s_buf[64];
  std::vector<double> s_heap;
  double* s = s_buf;
  if (k > 64) {
    s_heap.resize(k);
    s = s_heap.data();
  }
  for (std::size_t z = 0; z < k; ++z) {
    s[z] = z == y ? 0.0 : -0.5 * (mix.mu[y] - mix.mu[z]) * (2.0 * u - mix.mu[y] - mix.mu[z]);
    s_absmax = std::max(s_absmax, std::abs(s[z]));
  }
  if (s_absmax <= 1.0) {
    // Near-coincident components: Σ p_z e^{s_z} = 1 + Σ p_z expm1(s_z).
    double acc = 0.0;
    for (std::size_t z = 0; z < k; ++z) acc += mix.p[z] * std::expm1(s[z]);
    return -std::log1p(acc);
  }
  double t_max = -std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < k; ++z) t_max = std::max(t_max, mix.log_p[z] + s[z]);
  double acc = 0.0;
  for (std::size_t z = 0; z < k; ++z) acc += std::exp(mix.log_p[z] + s[z] - t_max);
  return -(t_max + std::log(acc));
}

double integrand(const Mixture& mix, double u) {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  double total = 0.0;
  for (std::size_t y = 0; y < mix.p.size(); ++y) {
    const double d = u - mix.mu[y];
    const double weight = mix.p[y] * kInvSqrt2Pi * std::exp(-0.5 * d * d);
    if (weight == 0.0) continue;
    total += weight * log_ratio(mix, y, u);
  }
  return total;
}

// Panel boundaries covering the support [μ_y ± 12] of every component, with a
// base grid of width 2, breakpoints at the means, and graded panels across
// every pairwise crossing of p_y f_y and p_z f_z. Around a crossing the log
// ratio behaves like softplus with slope |Δμ|; its complex poles sit π/|Δμ|
// off the axis, so panels there are 2π/|Δμ| wide.
std::vector<double> panel_breaks(const Mixture& mix) {
  constexpr double kReach = 12.0;
  constexpr double kBaseWidth = 2.0;
  constexpr double kSaturation = 40.0;

  std::vector<std::pair<double, double>> support;
  for (double m : mix.mu) support.emplace_back(m - kReach, m + kReach);
  std::sort(support.begin(), support.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& seg : support) {
    if (!merged.empty() && seg.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, seg.second);
    } else {
      merged.push_back(seg);
    }
  }
  auto inside = [&](double x) {
    return std::any_of(merged.begin(), merged.end(), [x](const auto& seg) {
      return seg.first <= x && x <= seg.second;
    });
  };

  std::vector<double> pts;
  for (const auto& [a, b] : merged) {
    pts.push_back(a);
    pts.push_back(b);
    const auto steps = static_cast<std::size_t>(std::ceil((b - a) / kBaseWidth));
    for (std::size_t s = 1; s < steps; ++s) pts.push_back(a + static_cast<double>(s) * kBaseWidth);
  }
  for (double m : mix.mu) pts.push_back(m);
  for (std::size_t y = 0; y < mix.mu.size(); ++y) {
    for (std::size_t z = y + 1; z < mix.mu.size(); ++z) {
      const double gap = mix.mu[y] - mix.mu[z];
      if (gap == 0.0) continue;
      const double centre = 0.5 * (mix.mu[y] + mix.mu[z]) + (mix.log_p[z] - mix.log_p[y]) / gap;
      const double half = kSaturation / std::abs(gap);
      const double width = 2.0 * std::numbers::pi / std::abs(gap);
      const auto count = static_cast<std::size_t>(std::ceil(2.0 * half / width));
      for (std::size_t q = 0; q <= count; ++q) {
        pts.push_back(centre - half + static_cast<double>(q) * (2.0 * half / static_cast<double>(count)));
      }
    }
  }
  std::erase_if(pts, [&](double x) { return !inside(x); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double integrate(const Mixture& mix, const std::vector<double>& breaks,
                 const QuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b];
    const double hi = breaks[b + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    // Skip gaps between disjoint support segments.
    const bool covered = std::any_of(mix.mu.begin(), mix.mu.end(),
                                     [mid](double m) { return std::abs(mid - m) <= 12.0; });
    if (!covered) continue;
    const double half = 0.5 * (hi - lo);
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * integrand(mix, mid + half * rule.nodes[k]);
    }
    total += half * panel;
  }
  return total;
}

}  // namespace

double mixture_mutual_information(std::span<const double> probs,
                                  std::span<const double> means, double variance,
                                  const QuadratureSpec& quad) {
  validate(quad);
  if (probs.size() != means.size()) {
    throw Error(ErrorCode::InvalidArgument, "class probabilities and means differ in length");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw Error(ErrorCode::DegenerateGaussian, "pooled within-class variance is zero");
  }
  Mixture mix;
  double mass = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (!(probs[y] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative class probability");
    mass += probs[y];
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "no class has positive probability");
  const double scale = 1.0 / std::sqrt(variance);
  double centre = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (probs[y] > 0.0) centre += probs[y] / mass * means[y];
  }
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (probs[y] <= 0.0) continue;
    mix.p.push_back(probs[y] / mass);
    mix.log_p.push_back(std::log(probs[y] / mass));
    mix.mu.push_back((means[y] - centre) * scale);
  }
  const double h = entropy(mix.p);
  const auto [lo, hi] = std::minmax_element(mix.mu.begin(), mix.mu.end());
  if (mix.p.size() < 2 || *lo == *hi) return 0.0;

  const std::vector<double> breaks = panel_breaks(mix);
  const auto order = static_cast<std::size_t>(quad.order);
  const double coarse = integrate(mix, breaks, gauss_legendre(order));
  const double fine = integrate(mix, breaks, gauss_legendre(2 * order));
  if (std::abs(coarse - fine) > quad.tolerance * std::abs(fine) + 1e-14) {
    throw Error(ErrorCode::QuadratureFailure,
                "mixed-pair integral not converged: order " + std::to_string(order) +
                    " gives " + std::to_string(coarse) + ", order " +
                    std::to_string(2 * order) + " gives " + std::to_string(fine));
  }
  if (coarse > h * (1.0 + quad.tolerance) + 1e-14) {
    throw Error(ErrorCode::QuadratureFailure,
                "mixed-pair mutual information exceeds the class entropy");
  }
  return std::clamp(coarse, 0.0, h);
}

double mi_mixed(const MixedPairStats& s, const QuadratureSpec& quad) {
  if (s.n == 0) throw Error(ErrorCode::EmptyDataset, "mixed pair over zero rows");
  if (!(s.pooled_variance > 0.0)) {
    throw Error(ErrorCode::DegenerateGaussian,
                "Gaussian column is constant within every class (pooled variance 0)");
  }
  std::vector<double> probs(s.class_counts.size());
  for (std::size_t y = 0; y < probs.size(); ++y) {
    probs[y] = static_cast<double>(s.class_counts[y]) / static_cast<double>(s.n);
  }
  return static_cast<double>(s.n) *
         mixture_mutual_information(probs, s.class_means, s.pooled_variance, quad);
}

double estimate_mi(const PairStats& stats, const QuadratureSpec& quad) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscretePairStats>) {
          return mi_discrete(s);
        } else if constexpr (std::is_same_v<T, GaussianPairStats>) {
          return mi_gaussian(s);
        } else {
          return mi_mixed(s, quad);
        }
      },
      stats);
}

}  // namespace dendroid
