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

#include "countgof/model.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "countgof/error.hpp"

namespace countgof {
namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, ExogTransform>& registry() {
  static std::map<std::string, ExogTransform> r;
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ExogTransform ExogTransform::linear() {
  return {"linear", [](double x) { return x; }};
}
ExogTransform ExogTransform::cos_plus_one() {
  return {"cos_plus_one", [](double x) { return std::cos(x) + 1.0; }};
}
ExogTransform ExogTransform::sin_plus_one() {
  return {"sin_plus_one", [](double x) { return std::sin(x) + 1.0; }};
}
ExogTransform ExogTransform::abs_window() {
  return {"abs_window",
          [](double x) { return std::fabs(x) < 2.0 ? 2.0 - std::fabs(x) : 0.0; }};
}
ExogTransform ExogTransform::custom(std::string name, Fn fn) {
  if (name.empty() || !fn) throw ConfigError("custom transform needs a name and a function");
  return {std::move(name), std::move(fn)};
}

ExogTransform ExogTransform::from_name(const std::string& name) {
  if (name == "linear") return linear();
  if (name == "cos_plus_one" || name == "cos") return cos_plus_one();
  if (name == "sin_plus_one" || name == "sin") return sin_plus_one();
  if (name == "abs_window" || name == "abs") return abs_window();
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end())
    throw ConfigError("unknown covariate transform '" + name + "'");
  return it->second;
}

void register_exog_transform(const ExogTransform& transform) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry().insert_or_assign(transform.name(), transform);
}

void LinkSpec::validate() const {
  if (p < 1) throw ConstraintError("p >= 1", "got p = " + std::to_string(p));
  if (q < 0) throw ConstraintError("q >= 0", "got q = " + std::to_string(q));
  if (!exog_lag.empty() && exog_lag.size() != exog.size())
    throw ConstraintError("exog_lag size", "one lag per covariate column required");
  for (int l : exog_lag)
    if (l != 0 && l != 1)
      throw ConstraintError("exog lag in {0,1}", "got " + std::to_string(l));
}

double ParamVector::persistence() const {
  double s = 0.0;
  for (double a : alpha) s += a;
  for (double b : beta) s += b;
  return s;
}

std::vector<double> ParamVector::mean_params() const {
  std::vector<double> v;
  v.reserve(1 + alpha.size() + beta.size() + exog.size());
  v.push_back(omega);
  v.insert(v.end(), alpha.begin(), alpha.end());
  v.insert(v.end(), beta.begin(), beta.end());
  v.insert(v.end(), exog.begin(), exog.end());
  return v;
}

ParamVector ParamVector::from_mean_params(const LinkSpec& link,
                                          std::span<const double> v) {
  if (v.size() != link.n_mean_params())
    throw ConstraintError("parameter dimension",
                          "expected " + std::to_string(link.n_mean_params()) +
                              " values, got " + std::to_string(v.size()));
  ParamVector theta;
  std::size_t i = 0;
  theta.omega = v[i++];
  theta.alpha.assign(v.begin() + i, v.begin() + i + link.p);
  i += link.p;
  theta.beta.assign(v.begin() + i, v.begin() + i + link.q);
  i += link.q;
  theta.exog.assign(v.begin() + i, v.end());
  return theta;
}

std::optional<std::string> ParamVector::violation(const LinkSpec& link) const {
  if (alpha.size() != static_cast<std::size_t>(link.p))
    return "alpha has " + std::to_string(alpha.size()) + " entries, p = " + std::to_string(link.p);
  if (beta.size() != static_cast<std::size_t>(link.q))
    return "beta has " + std::to_string(beta.size()) + " entries, q = " + std::to_string(link.q);
  if (exog.size() != link.m())
    return "exog has " + std::to_string(exog.size()) + " coefficients, m = " +
           std::to_string(link.m());
  if (!(omega > 0.0) || !std::isfinite(omega)) return "omega > 0 (got " + num(omega) + ")";
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (!(alpha[i] >= 0.0)) return "alpha_" + std::to_string(i + 1) + " >= 0 (got " + num(alpha[i]) + ")";
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (!(beta[j] >= 0.0)) return "beta_" + std::to_string(j + 1) + " >= 0 (got " + num(beta[j]) + ")";
  for (std::size_t k = 0; k < exog.size(); ++k) {
    if (!std::isfinite(exog[k])) return "exog coefficient " + std::to_string(k + 1) + " finite";
    if (link.exog[k].is_linear() ? !(exog[k] >= 0.0) : !(exog[k] > 0.0))
      return "exog coefficient c_" + std::to_string(k + 1) +
             (link.exog[k].is_linear() ? " >= 0" : " > 0") + " (got " + num(exog[k]) + ")";
  }
  if (const double s = persistence(); !(s < 1.0))
    return "sum(alpha) + sum(beta) < 1 (got " + num(s) + ")";
  if (dispersion && !(*dispersion > 0.0)) return "dispersion r > 0 (got " + num(*dispersion) + ")";
  return std::nullopt;
}

void ParamVector::validate(const LinkSpec& link) const {
  if (auto v = violation(link)) throw ConstraintError(*v, "infeasible parameter vector");
}

void CountSeries::validate() const {
  for (std::size_t t = 0; t < counts.size(); ++t)
    if (counts[t] < 0)
      throw ConstraintError("counts >= 0", "negative count at t = " + std::to_string(t + 1));
  if (covariates.cols() > 0 && covariates.rows() != counts.size())
    throw ConstraintError("covariate rows == T",
                          std::to_string(covariates.rows()) + " rows for T = " +
                              std::to_string(counts.size()));
}

FilterDesign make_design(const CountSeries& series, const LinkSpec& link,
                         const InitPolicy& init) {
  link.validate();
  series.validate();
  const std::size_t T = series.size();
  if (T == 0) throw ConstraintError("T >= 1", "empty series");
  if (series.m() != link.m())
    throw ConstraintError("covariate columns == m",
                          "series has " + std::to_string(series.m()) + " columns, link expects " +
                              std::to_string(link.m()));
  FilterDesign d;
  d.T = T;
  d.p = link.p;
  d.q = link.q;
  d.m = link.m();
  d.y_lags = Matrix(T, link.p);
  d.fx = Matrix(T, d.m);
  d.x_raw = Matrix(T, d.m);

  const Presample* pre = init.presample ? &*init.presample : nullptr;
  auto y_at = [&](std::ptrdiff_t t) -> double {  // 1-based t, may be <= 0
    if (t >= 1) return static_cast<double>(series.counts[t - 1]);
    if (pre) {
      const auto i = static_cast<std::size_t>(-t);
      if (i >= pre->y.size())
        throw ConstraintError("presample length", "needs Y_" + std::to_string(t));
      return pre->y[i];
    }
    return static_cast<double>(series.counts[0]);
  };
  for (std::size_t t = 1; t <= T; ++t) {
    for (int i = 1; i <= link.p; ++i)
      d.y_lags(t - 1, i - 1) = y_at(static_cast<std::ptrdiff_t>(t) - i);
    for (std::size_t k = 0; k < d.m; ++k) {
      const int lag = link.lag(k);
      double x;
      if (t - lag >= 1) {
        x = series.covariates(t - lag - 1, k);
      } else if (pre) {
        if (pre->x.size() != d.m)
          throw ConstraintError("presample length", "needs X_0 with m entries");
        x = pre->x[k];
      } else {
        x = series.covariates(0, k);
      }
      d.x_raw(t - 1, k) = x;
      d.fx(t - 1, k) = link.exog[k](x);
    }
  }
  d.lambda_presample.assign(link.q, init.lambda0);
  if (pre) {
    if (pre->lambda.size() < static_cast<std::size_t>(link.q))
      throw ConstraintError("presample length", "needs q lagged means");
    for (int j = 0; j < link.q; ++j) d.lambda_presample[j] = pre->lambda[j];
  }
  return d;
}

double link_value(const ParamVector& theta, std::span<const double> y_lags,
                  std::span<const double> lambda_lags, std::span<const double> fx) {
  double v = theta.omega;
  for (std::size_t i = 0; i < y_lags.size(); ++i) v += theta.alpha[i] * y_lags[i];
  for (std::size_t j = 0; j < lambda_lags.size(); ++j) v += theta.beta[j] * lambda_lags[j];
  for (std::size_t k = 0; k < fx.size(); ++k) v += theta.exog[k] * fx[k];
  return v;
}

namespace {

// lambda_{t-j} for 0-based t and j >= 1.
inline double lagged_mean(const FilterDesign& d, const std::vector<double>& lambda,
                          std::size_t t, int j) {
  const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t) - j;
  return s >= 0 ? lambda[s] : d.lambda_presample[-s - 1];
}

}  // namespace

bool filter_lambda(const FilterDesign& d, const ParamVector& theta,
                   std::vector<double>& lambda) {
  lambda.resize(d.T);
  for (std::size_t t = 0; t < d.T; ++t) {
    double v = theta.omega;
    for (int i = 0; i < d.p; ++i) v += theta.alpha[i] * d.y_lags(t, i);
    for (int j = 1; j <= d.q; ++j) v += theta.beta[j - 1] * lagged_mean(d, lambda, t, j);
    for (std::size_t k = 0; k < d.m; ++k) v += theta.exog[k] * d.fx(t, k);
    if (!(v > 0.0) || !std::isfinite(v)) return false;
    lambda[t] = v;
  }
  return true;
}

std::vector<double> filter_lambda(const CountSeries& series, const LinkSpec& link,
                                  const ParamVector& theta, const InitPolicy& init) {
  theta.validate(link);
  const FilterDesign d = make_design(series, link, init);
  std::vector<double> lambda;
  if (!filter_lambda(d, theta, lambda))
    throw DomainError("filter_lambda: non-positive conditional mean; covariates must keep h(z) > 0");
  return lambda;
}

bool filter_with_sensitivities(const FilterDesign& d, const ParamVector& theta,
                               std::vector<double>& lambda, Matrix& dlambda) {
  const std::size_t K = 1 + static_cast<std::size_t>(d.p + d.q) + d.m;
  lambda.resize(d.T);
  if (dlambda.rows() != d.T || dlambda.cols() != K) dlambda = Matrix(d.T, K);
  const std::size_t a0 = 1;
  const std::size_t b0 = a0 + d.p;
  const std::size_t c0 = b0 + d.q;
  for (std::size_t t = 0; t < d.T; ++t) {
    double v = theta.omega;
    auto g = dlambda.row(t);
    g[0] = 1.0;
    for (int i = 0; i < d.p; ++i) {
      v += theta.alpha[i] * d.y_lags(t, i);
      g[a0 + i] = d.y_lags(t, i);
    }
    for (std::size_t k = 0; k < d.m; ++k) {
      v += theta.exog[k] * d.fx(t, k);
      g[c0 + k] = d.fx(t, k);
    }
    for (int j = 1; j <= d.q; ++j) {
      const double lag = lagged_mean(d, lambda, t, j);
      v += theta.beta[j - 1] * lag;
      g[b0 + j - 1] = lag;
    }
    // Recursive part: sum_j beta_j * d lambda_{t-j}; presample terms are constant.
    for (int j = 1; j <= d.q; ++j) {
      if (t < static_cast<std::size_t>(j)) continue;
      const auto prev = dlambda.row(t - j);
      const double bj = theta.beta[j - 1];
      for (std::size_t k = 0; k < K; ++k) g[k] += bj * prev[k];
    }
    if (!(v > 0.0) || !std::isfinite(v)) return false;
    lambda[t] = v;
  }
  return true;
}

Matrix regressors(const FilterDesign& d, std::span<const double> lambda) {
  const std::size_t dim = static_cast<std::size_t>(d.p + d.q) + d.m;
  Matrix z(d.T, dim);
  std::vector<double> lam(lambda.begin(), lambda.end());
  for (std::size_t t = 0; t < d.T; ++t) {
    std::size_t c = 0;
    for (int i = 0; i < d.p; ++i) z(t, c++) = d.y_lags(t, i);
    for (int j = 1; j <= d.q; ++j) z(t, c++) = lagged_mean(d, lam, t, j);
    for (std::size_t k = 0; k < d.m; ++k) z(t, c++) = d.x_raw(t, k);
  }
  return z;
}

}  // namespace countgof
