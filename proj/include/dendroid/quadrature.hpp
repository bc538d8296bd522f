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
#include <vector>

namespace dendroid {

/// Controls the numerical integration used for Gaussian×discrete pairs.
///
/// `order` is the number of Gauss-Legendre nodes per panel (even, >= 8).
/// Every integral is also evaluated at 2·order; the two must agree to
/// `tolerance` (relative, with an absolute floor of 1e-14 nats) or the
/// evaluation fails.
struct QuadratureSpec {
  int order = 64;
  double tolerance = 1e-8;
};

void validate(const QuadratureSpec& spec);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t order);

}  // namespace dendroid
