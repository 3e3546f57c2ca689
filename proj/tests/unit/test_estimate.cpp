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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "countgof/config.hpp"
#include "countgof/error.hpp"
#include "countgof/estimate.hpp"
#include "countgof/rng.hpp"
#include "countgof/simulate.hpp"

namespace countgof {
namespace {

SimulatedSeries simulate(const std::string& preset, std::size_t T, std::uint64_t seed,
                         CountDistribution dist = CountDistribution::poisson()) {
  DgpSpec d = config::dgp_preset(preset);
  d.dist = dist;
  d.seed = seed;
  return simulate_counts(d, T);
}

TEST(InformationCriteria, Formulas) {
  const auto a = information_criteria(-1184.773, 5, 730);
  EXPECT_NEAR(a.aic, 2379.546, 1e-9);
  EXPECT_NEAR(a.bic, 2379.546 + 5 * (std::log(730.0) - 2), 1e-9);
  const auto b = information_criteria(-1182.25, 6, 730);
  EXPECT_NEAR(b.bic, 2404.058, 5e-4);
  const auto z = information_criteria(0.0, 0, 10);
  EXPECT_EQ(z.aic, 0.0);
  EXPECT_EQ(z.bic, 0.0);
}

TEST(Qmle, RecoversArxOneCos) {
  // Averaged over replicates; a single draw has sd about 0.03 for omega.
  const int n = 8;
  double omega = 0.0, alpha = 0.0, c = 0.0;
  for (int r = 0; r < n; ++r) {
    const auto sim = simulate("arx1-cos", 5000, 101 + r);
    const auto fit = poisson_qmle(sim.series, config::dgp_preset("arx1-cos").link);
    ASSERT_TRUE(fit.converged);
    EXPECT_EQ(fit.n_params, 3u);
    EXPECT_EQ(fit.T, 5000u);
    omega += fit.theta.omega / n;
    alpha += fit.theta.alpha[0] / n;
    c += fit.theta.exog[0] / n;
  }
  EXPECT_NEAR(omega, 0.2, 0.04);
  EXPECT_NEAR(alpha, 0.3, 0.03);
  EXPECT_NEAR(c, 0.5, 0.04);
}

TEST(Qmle, IidPoissonImpliedMean) {
  DgpSpec d;
  d.theta.omega = 2.0;
  d.theta.alpha = {0.0};
  d.seed = 8;
  const auto sim = simulate_counts(d, 5000);
  const auto fit = poisson_qmle(sim.series, d.link);
  EXPECT_NEAR(fit.theta.omega / (1 - fit.theta.alpha[0]), 2.0, 0.05);
}

TEST(Qmle, LoglikEqualsDirectEvaluation) {
  const auto sim = simulate("garchx11-cos", 1000, 5);
  const LinkSpec link = config::dgp_preset("garchx11-cos").link;
  const auto fit = poisson_qmle(sim.series, link);
  const auto lam = filter_lambda(sim.series, link, fit.theta);
  EXPECT_NEAR(fit.loglik, log_likelihood(CountDistribution::poisson(), sim.series.counts, lam),
              1e-10 * std::fabs(fit.loglik));
  for (std::size_t t = 0; t < lam.size(); ++t) EXPECT_DOUBLE_EQ(lam[t], fit.lambda[t]);
  const auto ic = information_criteria(fit.loglik, fit.n_params, fit.T);
  EXPECT_DOUBLE_EQ(ic.aic, fit.aic);
  EXPECT_DOUBLE_EQ(ic.bic, fit.bic);
}

TEST(Qmle, ObjectiveTraceNeverIncreases) {
  const auto sim = simulate("garchx11-cos", 800, 15);
  const auto fit = poisson_qmle(sim.series, config::dgp_preset("garchx11-cos").link);
  ASSERT_GE(fit.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    EXPECT_LE(fit.objective_trace[i], fit.objective_trace[i - 1]);
}

TEST(Qmle, MultiStartAgreement) {
  const auto sim = simulate("garchx11-cos", 1500, 44);
  const LinkSpec link = config::dgp_preset("garchx11-cos").link;
  std::vector<double> lls;
  for (std::uint64_t s = 0; s < 5; ++s) {
    FitOptions o;
    o.n_starts = 1;
    Rng rng(1000 + s);
    ParamVector start;
    start.omega = 0.05 + rng.uniform();
    const double a = 0.05 + 0.4 * rng.uniform();
    start.alpha = {a};
    start.beta = {0.5 * (0.95 - a) * rng.uniform()};
    start.exog = {0.05 + rng.uniform()};
    o.start = start;
    const auto fit = poisson_qmle(sim.series, link, o);
    if (fit.converged) lls.push_back(fit.loglik);
  }
  ASSERT_GE(lls.size(), 3u);
  for (double ll : lls) EXPECT_NEAR(ll, lls.front(), 1e-6);
}

TEST(Gradient, AnalyticMatchesFiniteDifference) {
  const auto sim = simulate("garchx11-cos", 400, 2);
  const LinkSpec link = config::dgp_preset("garchx11-cos").link;
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ParamVector th;
    th.omega = 0.1 + rng.uniform();
    const double a = 0.05 + 0.5 * rng.uniform();
    th.alpha = {a};
    th.beta = {(0.9 - a) * rng.uniform()};
    th.exog = {0.1 + rng.uniform()};
    for (auto dist : {CountDistribution::poisson(), CountDistribution::neg_binomial(2.5)}) {
      if (dist.family() == Family::NegBinomial) th.dispersion = 2.5;
      std::vector<double> g;
      log_likelihood_gradient(sim.series, link, th, dist, {}, g);
      auto f = [&](const ParamVector& p) {
        const auto d = p.dispersion ? CountDistribution::neg_binomial(*p.dispersion) : dist;
        return log_likelihood(d, sim.series.counts, filter_lambda(sim.series, link, p));
      };
      auto v = th.mean_params();
      for (std::size_t k = 0; k < g.size(); ++k) {
        ParamVector up = th, dn = th;
        const double h = 1e-5;
        if (k < v.size()) {
          auto vu = v, vd = v;
          vu[k] += h;
          vd[k] -= h;
          up = ParamVector::from_mean_params(link, vu);
          dn = ParamVector::from_mean_params(link, vd);
          up.dispersion = dn.dispersion = th.dispersion;
        } else {
          up.dispersion = *th.dispersion + h;
          dn.dispersion = *th.dispersion - h;
        }
        const double fd = (f(up) - f(dn)) / (2 * h);
        EXPECT_NEAR(g[k], fd, 1e-5 * std::max(1.0, std::fabs(fd))) << trial << " " << k;
      }
      th.dispersion.reset();
    }
  }
}

TEST(NegBinomialMle, RecoversDispersion) {
  const auto sim = simulate("arx1-cos", 5000, 19, CountDistribution::neg_binomial(3.0));
  const auto fit = neg_binomial_mle(sim.series, config::dgp_preset("arx1-cos").link);
  ASSERT_TRUE(fit.converged);
  ASSERT_TRUE(fit.theta.dispersion.has_value());
  EXPECT_GE(*fit.theta.dispersion, 2.5);
  EXPECT_LE(*fit.theta.dispersion, 3.5);
  EXPECT_EQ(fit.n_params, 4u);
}

TEST(NegBinomialMle, PoissonDataDrivesDispersionUp) {
  const auto sim = simulate("arx1-cos", 5000, 23);
  FitOptions o;
  o.max_dispersion = 1e4;
  const auto fit = neg_binomial_mle(sim.series, config::dgp_preset("arx1-cos").link, o);
  ASSERT_TRUE(fit.theta.dispersion.has_value());
  EXPECT_TRUE(*fit.theta.dispersion >= 100.0 || fit.has_flag("dispersion_at_upper_bound"));
}

TEST(NegBinomialMle, ConstantMean) {
  DgpSpec d;
  d.dist = CountDistribution::neg_binomial(2.0);
  d.theta.omega = 1.5;
  d.theta.alpha = {0.0};
  d.seed = 4;
  const auto sim = simulate_counts(d, 5000);
  const auto fit = neg_binomial_mle(sim.series, d.link);
  EXPECT_NEAR(fit.theta.omega / (1 - fit.theta.alpha[0]), 1.5, 0.08);
}

TEST(Qmle, MeanParametersUnderNegBinomialData) {
  const auto sim = simulate("arx1-cos", 10000, 61, CountDistribution::neg_binomial(3.0));
  const auto fit = poisson_qmle(sim.series, config::dgp_preset("arx1-cos").link);
  EXPECT_NEAR(fit.theta.omega, 0.2, 0.05);
  EXPECT_NEAR(fit.theta.alpha[0], 0.3, 0.05);
  EXPECT_NEAR(fit.theta.exog[0], 0.5, 0.05);
}

TEST(Qmle, AllZeroCountsFlagged) {
  CountSeries s;
  s.counts.assign(100, 0);
  s.covariates = Matrix(100, 0);
  LinkSpec link;
  const auto fit = poisson_qmle(s, link);
  EXPECT_TRUE(fit.has_flag("all_zero_counts"));
}

TEST(Qmle, TooFewObservations) {
  CountSeries s;
  s.counts = {1, 2};
  s.covariates = Matrix(2, 0);
  LinkSpec link;
  link.q = 1;
  EXPECT_THROW(poisson_qmle(s, link), ConstraintError);
}

}  // namespace
}  // namespace countgof
