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

#include "dendroid/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dendroid/error.hpp"

namespace dendroid {

void validate(const QuadratureSpec& spec) {
  if (spec.order < 8 || spec.order % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "quadrature order must be even and >= 8, got " +
                    std::to_string(spec.order));
  }
  if (!(spec.tolerance > 0.0) || !std::isfinite(spec.tolerance)) {
    throw Error(ErrorCode::InvalidArgument,
                "quadrature tolerance must be a positive real");
  }
}

QuadratureRule gauss_legendre(std::size_t order) {
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "empty quadrature rule");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const std::size_t half = (order + 1) / 2;
  const double n = static_cast<double>(order);
  for (std::size_t k = 0; k < half; ++k) {
    // Tricomi's approximation of the k-th root, refined by Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(k) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t m = 2; m <= order; ++m) {
        const double md = static_cast<double>(m);
        const double p2 = ((2.0 * md - 1.0) * x * p1 - (md - 1.0) * p0) / md;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t m = 2; m <= order; ++m) {
      const double md = static_cast<double>(m);
      const double p2 = ((2.0 * md - 1.0) * x * p1 - (md - 1.0) * p0) / md;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.nodes[order - 1 - k] = x;
    rule.weights[k] = w;
    rule.weights[order - 1 - k] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace dendroid
