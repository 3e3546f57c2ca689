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

#include "countgof/special.hpp"

#include <cmath>
#include <string>

#include "countgof/error.hpp"

namespace countgof {
namespace {

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// sum_k theta^k / (k! (a + k + 1)), theta >= 0.
double power_series(double a, double theta) {
  Kahan acc;
  double p = 1.0;  // theta^k / k!
  for (int k = 0; k < 10000; ++k) {
    const double term = p / (a + k + 1.0);
    acc.add(term);
    if (k > theta && term < 1e-17 * acc.sum) break;
    p *= theta / (k + 1.0);
  }
  return acc.sum;
}

// sum_k x^k / ((a+2)_k), x >= 0.
double kummer_series(double a, double x) {
  Kahan acc;
  double term = 1.0;
  for (int k = 0; k < 10000; ++k) {
    acc.add(term);
    if (k > x && term < 1e-17 * acc.sum) break;
    term *= x / (a + 2.0 + k);
  }
  return acc.sum;
}

}  // namespace

double incomplete_I(double a, double theta) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw DomainError("incomplete_I: a must be >= 0, got " + std::to_string(a));
  if (!(std::fabs(theta) <= 700.0))
    throw DomainError("incomplete_I: |theta| > 700 overflows, got " + std::to_string(theta));
  if (theta >= 0.0) return power_series(a, theta);
  return std::exp(theta) / (a + 1.0) * kummer_series(a, -theta);
}

double scaled_incomplete_I(double a, double lambda) {
  if (!(lambda >= 0.0))
    throw DomainError("scaled_incomplete_I: lambda must be >= 0");
  if (a == 0.0) {
    if (lambda < 1e-12) return 1.0 - 0.5 * lambda;
    return -std::expm1(-lambda) / lambda;
  }
  if (lambda > 700.0) throw DomainError("scaled_incomplete_I: lambda > 700");
  return std::exp(-lambda) * power_series(a, lambda);
}

}  // namespace countgof
