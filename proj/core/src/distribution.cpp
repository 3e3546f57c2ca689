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

#include "countgof/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "countgof/error.hpp"

namespace countgof {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double poisson_log_pmf(std::int64_t y, double mu) {
  if (mu == 0.0) return y == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  const double yd = static_cast<double>(y);
  return yd * std::log(mu) - mu - std::lgamma(yd + 1.0);
}

}  // namespace

CountDistribution CountDistribution::poisson() {
  return CountDistribution(Family::Poisson, kNaN);
}

CountDistribution CountDistribution::neg_binomial(double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw ConstraintError("dispersion r > 0", "got r = " + std::to_string(r));
  return CountDistribution(Family::NegBinomial, r);
}

CountDistribution CountDistribution::zero_inflated_poisson(double zero_prob) {
  if (!(zero_prob >= 0.0 && zero_prob < 1.0))
    throw ConstraintError("zero probability in [0,1)",
                          "got " + std::to_string(zero_prob));
  return CountDistribution(Family::ZeroInflatedPoisson, zero_prob);
}

CountDistribution CountDistribution::with_shape(double shape) const {
  switch (family_) {
    case Family::Poisson: return poisson();
    case Family::NegBinomial: return neg_binomial(shape);
    case Family::ZeroInflatedPoisson: return zero_inflated_poisson(shape);
  }
  return poisson();
}

double CountDistribution::log_pmf(std::int64_t y, double lambda) const {
  if (y < 0) return -std::numeric_limits<double>::infinity();
  switch (family_) {
    case Family::Poisson:
      return poisson_log_pmf(y, lambda);
    case Family::NegBinomial: {
      const double r = shape_;
      const double yd = static_cast<double>(y);
      return std::lgamma(yd + r) - std::lgamma(r) - std::lgamma(yd + 1.0) +
             r * std::log(r / (r + lambda)) +
             (y == 0 ? 0.0 : yd * std::log(lambda / (r + lambda)));
    }
    case Family::ZeroInflatedPoisson: {
      const double z = shape_;
      const double mu = lambda / (1.0 - z);
      if (y == 0) return std::log(z + (1.0 - z) * std::exp(-mu));
      return std::log1p(-z) + poisson_log_pmf(y, mu);
    }
  }
  return kNaN;
}

double CountDistribution::pmf(std::int64_t y, double lambda) const {
  return std::exp(log_pmf(y, lambda));
}

double CountDistribution::cdf(std::int64_t y, double lambda) const {
  if (y < 0) return 0.0;
  double sum = 0.0;
  for (std::int64_t k = 0; k <= y; ++k) sum += pmf(k, lambda);
  return std::min(sum, 1.0);
}

double CountDistribution::pgf(double lambda, double u) const {
  switch (family_) {
    case Family::Poisson:
      return std::exp(lambda * (u - 1.0));
    case Family::NegBinomial:
      return std::pow(1.0 + lambda * (1.0 - u) / shape_, -shape_);
    case Family::ZeroInflatedPoisson: {
      const double z = shape_;
      return z + (1.0 - z) * std::exp(lambda / (1.0 - z) * (u - 1.0));
    }
  }
  return kNaN;
}

double CountDistribution::pgf_dlambda(double lambda, double u) const {
  switch (family_) {
    case Family::Poisson:
      return (u - 1.0) * std::exp(lambda * (u - 1.0));
    case Family::NegBinomial:
      return -(1.0 - u) * std::pow(1.0 + lambda * (1.0 - u) / shape_, -shape_ - 1.0);
    case Family::ZeroInflatedPoisson:
      return (u - 1.0) * std::exp(lambda / (1.0 - shape_) * (u - 1.0));
  }
  return kNaN;
}

std::string CountDistribution::name() const {
  switch (family_) {
    case Family::Poisson: return "poisson";
    case Family::NegBinomial: return "negbin";
    case Family::ZeroInflatedPoisson: return "zip";
  }
  return "unknown";
}

CountDistribution CountDistribution::from_name(const std::string& name,
                                               std::optional<double> shape) {
  const std::string n = lower(name);
  if (n == "poisson") return poisson();
  if (n == "negbin" || n == "negbinomial" || n == "nb" || n == "negative_binomial") {
    if (!shape) throw ConfigError("negbin distribution requires a dispersion");
    return neg_binomial(*shape);
  }
  if (n == "zip" || n == "zero_inflated_poisson") {
    if (!shape) throw ConfigError("zip distribution requires a zero probability");
    return zero_inflated_poisson(*shape);
  }
  throw ConfigError("unknown distribution family '" + name + "'");
}

double pgf(const CountDistribution& dist, double lambda, double u) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("pgf: lambda must be positive, got " + std::to_string(lambda));
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("pgf: u must lie in [0,1], got " + std::to_string(u));
  return dist.pgf(lambda, u);
}

StochasticOrderReport stochastic_order_check(const CountDistribution& dist,
                                             std::span<const double> lambda_grid,
                                             std::span<const std::int64_t> y_grid) {
  StochasticOrderReport report;
  if (lambda_grid.size() < 2 || y_grid.empty()) return report;
  const std::int64_t y_max = *std::max_element(y_grid.begin(), y_grid.end());
  // Cumulative sums per lambda up to y_max, then compare adjacent lambdas.
  std::vector<std::vector<double>> cdfs;
  cdfs.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    std::vector<double> c(static_cast<std::size_t>(std::max<std::int64_t>(y_max, 0)) + 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      sum += dist.pmf(static_cast<std::int64_t>(k), lambda);
      c[k] = sum;
    }
    cdfs.push_back(std::move(c));
  }
  const double slack = 1e-12;
  for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i) {
    for (std::int64_t y : y_grid) {
      if (y < 0) continue;
      const auto k = static_cast<std::size_t>(y);
      if (cdfs[i][k] + slack < cdfs[i + 1][k]) {
        report.holds = false;
        report.lambda_lo = lambda_grid[i];
        report.lambda_hi = lambda_grid[i + 1];
        report.y = y;
        return report;
      }
    }
  }
  return report;
}

}  // namespace countgof
