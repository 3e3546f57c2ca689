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

#include "countgof/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "countgof/error.hpp"

namespace countgof {

ExogSpec ExogSpec::ar1(double rho, std::optional<double> innovation_variance) {
  ExogSpec s;
  s.kind = ExogKind::AR1;
  s.rho = rho;
  s.innovation_variance = innovation_variance;
  return s;
}

ExogSpec ExogSpec::deterministic(std::vector<double> values) {
  ExogSpec s;
  s.kind = ExogKind::Deterministic;
  s.values = std::move(values);
  return s;
}

ExogSpec ExogSpec::user_supplied(std::vector<double> values) {
  ExogSpec s;
  s.kind = ExogKind::UserSupplied;
  s.values = std::move(values);
  return s;
}

double ExogSpec::innovation_var() const {
  return innovation_variance ? *innovation_variance : 1.0 / (1.0 - rho * rho);
}

void ExogSpec::validate() const {
  switch (kind) {
    case ExogKind::AR1:
      if (!(std::fabs(rho) < 1.0))
        throw ConstraintError("|rho_X| < 1", "got rho_X = " + std::to_string(rho));
      if (!(innovation_var() > 0.0))
        throw ConstraintError("innovation variance > 0", "non-positive variance");
      break;
    case ExogKind::Deterministic:
    case ExogKind::UserSupplied:
      if (values.empty()) throw ConstraintError("exog values", "empty value sequence");
      break;
  }
}

std::vector<double> simulate_exog(const ExogSpec& spec, std::size_t T, std::uint64_t seed) {
  spec.validate();
  if (T == 0) throw ConstraintError("T >= 1", "empty path requested");
  std::vector<double> x(T);
  switch (spec.kind) {
    case ExogKind::AR1: {
      Rng rng(seed);
      const double sd = std::sqrt(spec.innovation_var());
      const double stationary_sd = sd / std::sqrt(1.0 - spec.rho * spec.rho);
      double prev = stationary_sd * rng.normal();  // X_0
      for (std::size_t t = 0; t < T; ++t) {
        prev = spec.rho * prev + sd * rng.normal();
        x[t] = prev;
      }
      break;
    }
    case ExogKind::Deterministic:
      for (std::size_t t = 0; t < T; ++t) x[t] = spec.values[t % spec.values.size()];
      break;
    case ExogKind::UserSupplied:
      if (spec.values.size() < T)
        throw ConstraintError("user covariate length >= T",
                              std::to_string(spec.values.size()) + " values for T = " +
                                  std::to_string(T));
      x.assign(spec.values.begin(), spec.values.begin() + T);
      break;
  }
  return x;
}

void DgpSpec::validate() const {
  link.validate();
  theta.validate(link);
  if (exog.size() != link.m())
    throw ConstraintError("exog specs == m", std::to_string(exog.size()) +
                                                 " covariate specs for m = " +
                                                 std::to_string(link.m()));
  for (const auto& e : exog) e.validate();
}

std::int64_t draw_count(const CountDistribution& dist, double lambda, Rng& rng) {
  switch (dist.family()) {
    case Family::Poisson:
      return rng.poisson(lambda);
    case Family::NegBinomial:
      return rng.neg_binomial(lambda, dist.dispersion());
    case Family::ZeroInflatedPoisson: {
      const double z = dist.zero_prob();
      const double u = rng.uniform();
      const std::int64_t y = rng.poisson(lambda / (1.0 - z));
      return u < z ? 0 : y;
    }
  }
  return 0;
}

SimulatedSeries simulate_counts(const DgpSpec& dgp, std::size_t T) {
  dgp.validate();
  if (T == 0) throw ConstraintError("T >= 1", "empty series requested");
  const LinkSpec& link = dgp.link;
  const std::size_t m = link.m();
  const std::size_t N = dgp.burn_in + T;
  const auto p = static_cast<std::size_t>(link.p);
  const auto q = static_cast<std::size_t>(link.q);

  // Covariate paths on indices 0..N; index s is X_s and the retained window is
  // s = burn_in + 1 .. N.
  Matrix xs(N + 1, m);
  for (std::size_t k = 0; k < m; ++k) {
    const ExogSpec& spec = dgp.exog[k];
    std::vector<double> path;
    if (spec.kind == ExogKind::AR1) {
      path = simulate_exog(spec, N + 1, derive_seed(dgp.seed, {1, k}));
    } else {
      path.resize(N + 1);
      const std::size_t n = spec.values.size();
      for (std::size_t s = 0; s <= N; ++s) {
        if (spec.kind == ExogKind::Deterministic) {
          // Cycle aligned so that X_{burn_in + 1} = values[0].
          const auto offset = static_cast<std::ptrdiff_t>(s) -
                              static_cast<std::ptrdiff_t>(dgp.burn_in) - 1;
          const auto nn = static_cast<std::ptrdiff_t>(n);
          path[s] = spec.values[static_cast<std::size_t>(((offset % nn) + nn) % nn)];
        } else {
          if (n < T)
            throw ConstraintError("user covariate length >= T",
                                  std::to_string(n) + " values for T = " + std::to_string(T));
          path[s] = s > dgp.burn_in ? spec.values[s - dgp.burn_in - 1] : spec.values[0];
        }
      }
    }
    for (std::size_t s = 0; s <= N; ++s) xs(s, k) = path[s];
  }

  // History buffers with `pad` slots in front for indices <= 0.
  const std::size_t pad = std::max(p, q) + 1;
  const double start = dgp.theta.omega / (1.0 - dgp.theta.persistence());
  std::vector<double> y(pad + N + 1, start);
  std::vector<double> lam(pad + N + 1, start);
  auto Y = [&](std::ptrdiff_t s) -> double& { return y[static_cast<std::size_t>(s + static_cast<std::ptrdiff_t>(pad))]; };
  auto L = [&](std::ptrdiff_t s) -> double& { return lam[static_cast<std::size_t>(s + static_cast<std::ptrdiff_t>(pad))]; };

  Rng rng(derive_seed(dgp.seed, {0}));
  std::vector<double> yl(p), ll(q), fx(m);
  std::vector<std::int64_t> counts(T);
  std::vector<double> lambda(T);
  for (std::size_t s = 1; s <= N; ++s) {
    const auto si = static_cast<std::ptrdiff_t>(s);
    for (std::size_t i = 0; i < p; ++i) yl[i] = Y(si - 1 - static_cast<std::ptrdiff_t>(i));
    for (std::size_t j = 0; j < q; ++j) ll[j] = L(si - 1 - static_cast<std::ptrdiff_t>(j));
    for (std::size_t k = 0; k < m; ++k) fx[k] = link.exog[k](xs(s - link.lag(k), k));
    const double l = link_value(dgp.theta, yl, ll, fx);
    if (!(l > 0.0) || !std::isfinite(l))
      throw DomainError("simulate_counts: non-positive conditional mean at s = " + std::to_string(s));
    const std::int64_t draw = draw_count(dgp.dist, l, rng);
    L(si) = l;
    Y(si) = static_cast<double>(draw);
    if (s > dgp.burn_in) {
      counts[s - dgp.burn_in - 1] = draw;
      lambda[s - dgp.burn_in - 1] = l;
    }
  }

  SimulatedSeries out;
  out.series.counts = std::move(counts);
  out.series.covariates = Matrix(T, m);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t k = 0; k < m; ++k) out.series.covariates(t, k) = xs(dgp.burn_in + 1 + t, k);
  for (std::size_t k = 0; k < m; ++k) out.series.covariate_names.push_back("x" + std::to_string(k + 1));
  out.lambda = std::move(lambda);
  const auto b = static_cast<std::ptrdiff_t>(dgp.burn_in);
  for (std::size_t i = 0; i < p; ++i) out.presample.y.push_back(Y(b - static_cast<std::ptrdiff_t>(i)));
  for (std::size_t j = 0; j < q; ++j) out.presample.lambda.push_back(L(b - static_cast<std::ptrdiff_t>(j)));
  for (std::size_t k = 0; k < m; ++k) out.presample.x.push_back(xs(dgp.burn_in, k));
  return out;
}

SimulatedSeries simulate_conditional(const CountDistribution& dist, const LinkSpec& link,
                                     const ParamVector& theta, const Matrix& covariates,
                                     const Presample& presample, Rng& rng) {
  const std::size_t T = covariates.rows();
  const std::size_t m = link.m();
  const auto p = static_cast<std::size_t>(link.p);
  const auto q = static_cast<std::size_t>(link.q);
  if (covariates.cols() != m)
    throw ConstraintError("covariate columns == m", "bootstrap covariates mismatch");
  if (presample.y.size() < p || presample.lambda.size() < q || (m > 0 && presample.x.size() != m))
    throw ConstraintError("presample length", "incomplete presample state");

  SimulatedSeries out;
  out.series.counts.resize(T);
  out.series.covariates = covariates;
  out.lambda.resize(T);
  out.presample = presample;
  std::vector<double> yl(p), ll(q), fx(m);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < p; ++i) {
      const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - 1 - static_cast<std::ptrdiff_t>(i);
      yl[i] = s >= 0 ? static_cast<double>(out.series.counts[s]) : presample.y[-s - 1];
    }
    for (std::size_t j = 0; j < q; ++j) {
      const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - 1 - static_cast<std::ptrdiff_t>(j);
      ll[j] = s >= 0 ? out.lambda[s] : presample.lambda[-s - 1];
    }
    for (std::size_t k = 0; k < m; ++k) {
      const int lag = link.lag(k);
      const double x = (t >= static_cast<std::size_t>(lag)) ? covariates(t - lag, k) : presample.x[k];
      fx[k] = link.exog[k](x);
    }
    const double l = link_value(theta, yl, ll, fx);
    if (!(l > 0.0) || !std::isfinite(l))
      throw DomainError("simulate_conditional: non-positive conditional mean");
    out.lambda[t] = l;
    out.series.counts[t] = draw_count(dist, l, rng);
  }
  return out;
}

}  // namespace countgof
