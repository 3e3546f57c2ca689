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
#include <vector>

#include "countgof/distribution.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/model.hpp"
#include "countgof/rng.hpp"

namespace countgof {

/// Block: the column is resampled in blocks. Fixed: copied unchanged
/// (deterministic regressors such as calendar dummies).
enum class CovariatePolicy { Block, Fixed };

struct BootstrapPlan {
  int B = 499;
  /// Empty means automatic: floor(T^{1/3}).
  std::optional<std::size_t> block_length;
  /// One entry per covariate column; empty means every column is Block.
  std::vector<CovariatePolicy> covariate_policy;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  int workers = 1;
  /// Runs with a larger share of dropped replicates fail.
  double max_drop_fraction = 0.02;
  /// When false, excess drops are reported in BootstrapReport instead of
  /// throwing StatisticalFailure.
  bool fail_on_excess_drops = true;

  std::size_t resolved_block_length(std::size_t T) const;
  void validate() const;
};

/// Overlapping block bootstrap of the rows of X: ceil(T/l) block starts drawn
/// uniformly from 0..T-l, concatenated and truncated to T rows. Fixed columns
/// are copied through.
Matrix block_bootstrap(const Matrix& x, std::size_t block_length, Rng& rng,
                       std::span<const CovariatePolicy> policy = {});
Matrix block_bootstrap(const Matrix& x, std::size_t block_length, std::uint64_t seed,
                       std::span<const CovariatePolicy> policy = {});

/// 1-based index of the order statistic used by the rejection rule:
/// B - floor(B alpha).
std::size_t rejection_order_index(std::size_t B, double alpha);

/// (1 + #{replicates >= observed}) / (B + 1).
double bootstrap_p_value(double observed, std::span<const double> replicates);

/// observed > sorted_replicates[rejection_order_index - 1].
bool bootstrap_reject(double observed, std::span<const double> replicates, double alpha);

struct BootstrapReport {
  FitResult fit;
  /// One result per requested statistic, with replicates, p-value and decision.
  std::vector<GofResult> results;
  std::size_t requested = 0;
  std::size_t retried = 0;
  std::size_t dropped = 0;
  bool excess_drops = false;
};

/// Parametric bootstrap of several statistics on shared bootstrap worlds:
/// fit theta, then for each b resample the covariates, simulate counts from
/// the fitted model, refit and recompute every statistic.
BootstrapReport bootstrap_test(const CountSeries& series, const LinkSpec& link,
                               const CountDistribution& dist,
                               std::span<const StatisticSpec> specs, const BootstrapPlan& plan,
                               const FitOptions& fit_options = {});

/// Same as bootstrap_test but reuses a fit of `series` under (link, dist).
BootstrapReport bootstrap_test(const CountSeries& series, const LinkSpec& link,
                               const FitResult& fit, std::span<const StatisticSpec> specs,
                               const BootstrapPlan& plan, const FitOptions& fit_options = {});

/// Single DeltaTW test.
GofResult bootstrap_pvalue(const CountSeries& series, const LinkSpec& link,
                           const CountDistribution& dist, const TestTuning& tuning,
                           const BootstrapPlan& plan);

}  // namespace countgof
