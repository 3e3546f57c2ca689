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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countgof/distribution.hpp"
#include "countgof/model.hpp"

namespace countgof {

struct FitOptions {
  int max_iterations = 500;
  /// Sup-norm of the gradient of the mean negative log-likelihood in the
  /// unconstrained coordinates.
  double gradient_tolerance = 1e-8;
  /// Number of starting points: small positives, moment-based, then random.
  int n_starts = 3;
  /// Persistence is kept below 1 - boundary_delta.
  double boundary_delta = 1e-6;
  /// Optional warm start, tried first and counted against n_starts.
  std::optional<ParamVector> start;
  std::uint64_t seed = 0x5eed;
  InitPolicy init;
  /// Upper box for the NegBinomial dispersion.
  double max_dispersion = 1e6;
};

struct FitResult {
  ParamVector theta;
  std::vector<double> lambda;
  CountDistribution dist = CountDistribution::poisson();
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::size_t n_params = 0;
  std::size_t T = 0;
  /// Diagnostics such as "boundary", "all_zero_counts",
  /// "dispersion_at_upper_bound".
  std::vector<std::string> flags;
  /// Objective (mean negative log-likelihood) after each accepted step of the
  /// winning start.
  std::vector<double> objective_trace;

  bool has_flag(std::string_view f) const;
};

struct InformationCriteria {
  double aic = 0.0;
  double bic = 0.0;
};

/// aic = -2 loglik + 2K, bic = -2 loglik + K ln T.
InformationCriteria information_criteria(double loglik, std::size_t n_params, std::size_t T);
InformationCriteria information_criteria(const FitResult& fit, std::size_t T);

/// Full log-likelihood (including the -log y! terms) for given means.
double log_likelihood(const CountDistribution& dist, std::span<const std::int64_t> counts,
                      std::span<const double> lambda);

/// Log-likelihood at theta and its gradient in natural coordinates
/// (omega, alpha, beta, c[, r]); the r component is present only for NB.
double log_likelihood_gradient(const CountSeries& series, const LinkSpec& link,
                               const ParamVector& theta, const CountDistribution& dist,
                               const InitPolicy& init, std::vector<double>& gradient);

/// Poisson (quasi-)maximum likelihood over the feasible region via a smooth
/// reparameterization and BFGS.
FitResult poisson_qmle(const CountSeries& series, const LinkSpec& link,
                       const FitOptions& opts = {});

/// NegBinomial maximum likelihood, dispersion estimated jointly.
FitResult neg_binomial_mle(const CountSeries& series, const LinkSpec& link,
                           const FitOptions& opts = {});

/// Dispatches on the family: Poisson -> QMLE, NegBinomial -> MLE.
FitResult fit_model(const CountSeries& series, const LinkSpec& link,
                    const CountDistribution& family, const FitOptions& opts = {});

}  // namespace countgof
