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

#include "countgof/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countgof/error.hpp"
#include "countgof/parallel.hpp"
#include "countgof/simulate.hpp"

namespace countgof {
namespace {

struct Replicate {
  bool ok = false;
  bool retried = false;
  std::vector<double> values;
};

bool usable(const FitResult& f) {
  return f.converged && std::all_of(f.lambda.begin(), f.lambda.end(),
                                    [](double l) { return l > 0.0 && std::isfinite(l); });
}

std::optional<FitResult> try_fit(const CountSeries& s, const LinkSpec& link,
                                 const CountDistribution& dist, const FitOptions& opts) {
  try {
    FitResult f = fit_model(s, link, dist, opts);
    if (usable(f)) return f;
  } catch (const DomainError&) {
  } catch (const ConstraintError&) {
  }
  return std::nullopt;
}

}  // namespace

std::size_t BootstrapPlan::resolved_block_length(std::size_t T) const {
  if (block_length) return *block_length;
  auto l = static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(T)) + 1e-9));
  return std::max<std::size_t>(l, 1);
}

void BootstrapPlan::validate() const {
  if (B < 1) throw ConstraintError("B >= 1", "got " + std::to_string(B));
  if (block_length && *block_length < 1) throw ConstraintError("block length >= 1", "got 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConstraintError("alpha in (0,1)", std::to_string(alpha));
  if (!(max_drop_fraction >= 0.0 && max_drop_fraction <= 1.0))
    throw ConstraintError("max_drop_fraction in [0,1]", std::to_string(max_drop_fraction));
}

Matrix block_bootstrap(const Matrix& x, std::size_t block_length, Rng& rng,
                       std::span<const CovariatePolicy> policy) {
  const std::size_t T = x.rows();
  const std::size_t m = x.cols();
  if (block_length < 1) throw ConstraintError("block length >= 1", "got 0");
  if (block_length > T)
    throw ConstraintError("block length <= T", std::to_string(block_length) + " > " +
                                                   std::to_string(T));
  if (!policy.empty() && policy.size() != m)
    throw ConstraintError("one policy per covariate column",
                          std::to_string(policy.size()) + " policies for " + std::to_string(m));
  Matrix out = x;
  const auto max_start = static_cast<std::int64_t>(T - block_length);
  std::size_t t = 0;
  while (t < T) {
    const auto start = static_cast<std::size_t>(rng.uniform_int(0, max_start));
    for (std::size_t i = 0; i < block_length && t < T; ++i, ++t)
      for (std::size_t k = 0; k < m; ++k)
        if (policy.empty() || policy[k] == CovariatePolicy::Block) out(t, k) = x(start + i, k);
  }
  return out;
}

Matrix block_bootstrap(const Matrix& x, std::size_t block_length, std::uint64_t seed,
                       std::span<const CovariatePolicy> policy) {
  Rng rng(seed);
  return block_bootstrap(x, block_length, rng, policy);
}

std::size_t rejection_order_index(std::size_t B, double alpha) {
  if (B < 1) throw ConstraintError("B >= 1", "got 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConstraintError("alpha in (0,1)", std::to_string(alpha));
  // Guard against B * alpha landing just below an integer.
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(B) * alpha + 1e-9));
  return B - k;
}

double bootstrap_p_value(double observed, std::span<const double> replicates) {
  std::size_t count = 0;
  for (double v : replicates)
    if (v >= observed) ++count;
  return static_cast<double>(1 + count) / static_cast<double>(replicates.size() + 1);
}

bool bootstrap_reject(double observed, std::span<const double> replicates, double alpha) {
  if (replicates.empty()) return false;
  std::vector<double> sorted(replicates.begin(), replicates.end());
  const std::size_t k = rejection_order_index(sorted.size(), alpha);
  if (k == 0) return true;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   sorted.end());
  return observed > sorted[k - 1];
}

BootstrapReport bootstrap_test(const CountSeries& series, const LinkSpec& link,
                               const CountDistribution& dist,
                               std::span<const StatisticSpec> specs, const BootstrapPlan& plan,
                               const FitOptions& fit_options) {
  plan.validate();
  FitResult fit = fit_model(series, link, dist, fit_options);
  return bootstrap_test(series, link, fit, specs, plan, fit_options);
}

BootstrapReport bootstrap_test(const CountSeries& series, const LinkSpec& link,
                               const FitResult& fit, std::span<const StatisticSpec> specs,
                               const BootstrapPlan& plan, const FitOptions& fit_options) {
  plan.validate();
  series.validate();
  for (const auto& s : specs) s.validate();
  if (!usable(fit)) throw StatisticalFailure("bootstrap: the model fit did not converge");
  const std::size_t T = series.size();
  const std::size_t m = series.m();
  if (!plan.covariate_policy.empty() && plan.covariate_policy.size() != m)
    throw ConstraintError("one policy per covariate column",
                          std::to_string(plan.covariate_policy.size()) + " policies for " +
                              std::to_string(m) + " columns");
  const std::size_t l = m > 0 ? plan.resolved_block_length(T) : 1;
  if (m > 0 && l > T)
    throw ConstraintError("block length <= T", std::to_string(l) + " > " + std::to_string(T));

  BootstrapReport report;
  report.fit = fit;
  report.requested = static_cast<std::size_t>(plan.B);

  const GofInputs observed_in = make_gof_inputs(series, link, fit, fit_options.init);
  const std::vector<double> observed = evaluate_statistics(observed_in, specs, plan.workers);

  InitPolicy refit_init;
  refit_init.lambda0 = fit_options.init.lambda0;

  std::vector<Replicate> reps(report.requested);
  parallel_for(reps.size(), plan.workers, [&](std::size_t b) {
    Rng rng(derive_seed(plan.seed, {b}));
    Matrix xs = m > 0 ? block_bootstrap(series.covariates, l, rng, plan.covariate_policy)
                      : Matrix(T, 0);
    Presample pre;
    pre.y.assign(static_cast<std::size_t>(link.p), static_cast<double>(series.counts[0]));
    pre.lambda.assign(static_cast<std::size_t>(link.q), fit_options.init.lambda0);
    if (m > 0) pre.x.assign(xs.row(0).begin(), xs.row(0).end());
    SimulatedSeries sim = simulate_conditional(fit.dist, link, fit.theta, xs, pre, rng);
    sim.series.covariate_names = series.covariate_names;

    FitOptions opts = fit_options;
    opts.init = refit_init;
    opts.start = fit.theta;
    opts.n_starts = 1;
    opts.seed = derive_seed(plan.seed, {b, 1});
    std::optional<FitResult> refit = try_fit(sim.series, link, fit.dist, opts);
    Replicate& r = reps[b];
    if (!refit) {
      r.retried = true;
      opts.n_starts = std::max(fit_options.n_starts, 3) + 1;
      opts.seed = derive_seed(plan.seed, {b, 2});
      refit = try_fit(sim.series, link, fit.dist, opts);
    }
    if (!refit) return;
    const GofInputs in = make_gof_inputs(sim.series, link, *refit, refit_init);
    r.values = evaluate_statistics(in, specs, 1);
    r.ok = true;
  });

  std::vector<std::vector<double>> columns(specs.size());
  for (const Replicate& r : reps) {
    if (r.retried) ++report.retried;
    if (!r.ok) {
      ++report.dropped;
      continue;
    }
    for (std::size_t j = 0; j < specs.size(); ++j) columns[j].push_back(r.values[j]);
  }
  report.excess_drops = static_cast<double>(report.dropped) >
                        plan.max_drop_fraction * static_cast<double>(report.requested);
  if (report.excess_drops && plan.fail_on_excess_drops)
    throw StatisticalFailure("bootstrap: " + std::to_string(report.dropped) + " of " +
                             std::to_string(report.requested) +
                             " replicates dropped after refit failures");

  for (std::size_t j = 0; j < specs.size(); ++j) {
    GofResult g;
    g.statistic = observed[j];
    g.variant = specs[j].variant;
    g.tuning = specs[j].tuning;
    g.label = specs[j].label();
    if (!columns[j].empty()) {
      g.p_value = bootstrap_p_value(g.statistic, columns[j]);
      g.reject = bootstrap_reject(g.statistic, columns[j], plan.alpha);
    }
    g.replicates = std::move(columns[j]);
    report.results.push_back(std::move(g));
  }
  return report;
}

GofResult bootstrap_pvalue(const CountSeries& series, const LinkSpec& link,
                           const CountDistribution& dist, const TestTuning& tuning,
                           const BootstrapPlan& plan) {
  StatisticSpec spec;
  spec.tuning = tuning;
  return bootstrap_test(series, link, dist, std::span(&spec, 1), plan).results.front();
}

}  // namespace countgof
