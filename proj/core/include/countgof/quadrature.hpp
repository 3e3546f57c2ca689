// Copyright 2026 The countgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

namespace countgof {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo, hi]. Nodes by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Cached n-point Gauss-Legendre rule on [0, 1]; safe to call concurrently.
const QuadratureRule& gauss_legendre_unit(int n);

/// n-point Gauss-Hermite rule for weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int n);

}  // namespace countgof
