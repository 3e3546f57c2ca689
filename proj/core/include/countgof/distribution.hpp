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

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace countgof {

enum class Family { Poisson, NegBinomial, ZeroInflatedPoisson };

/// Mean-parameterized count distribution F_lambda: lambda is always the mean.
///
/// NegBinomial(r) has variance lambda (1 + lambda / r). ZeroInflatedPoisson(z)
/// mixes a point mass z at zero with Poisson(lambda / (1 - z)), so its mean is
/// still lambda.
class CountDistribution {
 public:
  static CountDistribution poisson();
  static CountDistribution neg_binomial(double r);
  static CountDistribution zero_inflated_poisson(double zero_prob);

  Family family() const noexcept { return family_; }
  /// NB dispersion r; NaN for other families.
  double dispersion() const noexcept { return shape_; }
  /// ZIP zero probability; NaN for other families.
  double zero_prob() const noexcept { return shape_; }

  double log_pmf(std::int64_t y, double lambda) const;
  double pmf(std::int64_t y, double lambda) const;
  double cdf(std::int64_t y, double lambda) const;
  /// g_lambda(u) = E[u^Y] for u in [0, 1].
  double pgf(double lambda, double u) const;
  /// d g_lambda(u) / d lambda.
  double pgf_dlambda(double lambda, double u) const;

  /// Same family with the shape parameter replaced (r for NB, zero-prob for ZIP).
  CountDistribution with_shape(double shape) const;

  std::string name() const;
  /// Parses "poisson", "negbin", "zip" (case-insensitive) with an optional shape.
  static CountDistribution from_name(const std::string& name,
                                     std::optional<double> shape = std::nullopt);

  bool operator==(const CountDistribution& o) const noexcept {
    // Poisson carries a NaN shape.
    return family_ == o.family_ && (shape_ == o.shape_ || (shape_ != shape_ && o.shape_ != o.shape_));
  }

 private:
  CountDistribution(Family f, double shape) : family_(f), shape_(shape) {}
  Family family_;
  double shape_;
};

/// pgf with domain checks: lambda > 0, u in [0, 1].
double pgf(const CountDistribution& dist, double lambda, double u);

struct StochasticOrderReport {
  bool holds = true;
  /// First violating (lambda_1 < lambda_2, y) triple, if any.
  std::optional<double> lambda_lo;
  std::optional<double> lambda_hi;
  std::optional<std::int64_t> y;
};

/// Checks lambda_1 <= lambda_2 => F_{lambda_1}(y) >= F_{lambda_2}(y) on the
/// given sorted grids. Report-only; never throws for sorted input.
StochasticOrderReport stochastic_order_check(const CountDistribution& dist,
                                             std::span<const double> lambda_grid,
                                             std::span<const std::int64_t> y_grid);

}  // namespace countgof
