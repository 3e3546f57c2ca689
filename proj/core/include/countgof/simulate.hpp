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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "countgof/distribution.hpp"
#include "countgof/model.hpp"
#include "countgof/rng.hpp"

namespace countgof {

enum class ExogKind { AR1, Deterministic, UserSupplied };

/// One exogenous covariate column.
///
/// AR1: X_t = rho X_{t-1} + e_t with centred normal innovations. The default
/// innovation variance is 1 / (1 - rho^2); it can be overridden.
/// Deterministic: `values` repeated cyclically (e.g. a weekday pattern).
/// UserSupplied: `values` used as-is for the retained window.
struct ExogSpec {
  ExogKind kind = ExogKind::AR1;
  double rho = 0.5;
  std::optional<double> innovation_variance;
  std::vector<double> values;

  static ExogSpec ar1(double rho, std::optional<double> innovation_variance = std::nullopt);
  static ExogSpec deterministic(std::vector<double> values);
  static ExogSpec user_supplied(std::vector<double> values);

  double innovation_var() const;
  void validate() const;
};

/// AR(1) path of length T started from the stationary marginal (or the
/// deterministic / user values). Deterministic given the seed.
std::vector<double> simulate_exog(const ExogSpec& spec, std::size_t T, std::uint64_t seed);

/// Full data-generating process: family, link, true parameters and covariates.
struct DgpSpec {
  CountDistribution dist = CountDistribution::poisson();
  LinkSpec link;
  ParamVector theta;
  std::vector<ExogSpec> exog;
  std::size_t burn_in = 500;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimulatedSeries {
  CountSeries series;
  /// True conditional means lambda_1..lambda_T of the retained window.
  std::vector<double> lambda;
  /// State just before the retained window; filtering `series` with
  /// InitPolicy::explicit_values(presample) reproduces `lambda` exactly.
  Presample presample;
};

/// Recursive generation lambda_t -> Y_t ~ F_{lambda_t}, burn-in discarded.
SimulatedSeries simulate_counts(const DgpSpec& dgp, std::size_t T);

/// Simulates counts on a fixed covariate matrix X (T x m) from the given
/// presample state. Used for parametric bootstrap worlds.
SimulatedSeries simulate_conditional(const CountDistribution& dist, const LinkSpec& link,
                                     const ParamVector& theta, const Matrix& covariates,
                                     const Presample& presample, Rng& rng);

/// Single draw from F_lambda.
std::int64_t draw_count(const CountDistribution& dist, double lambda, Rng& rng);

}  // namespace countgof
