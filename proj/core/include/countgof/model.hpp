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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace countgof {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A covariate transform f used in pi(x; c) = sum_j c_j f_j(x_j).
///
/// Built-ins: linear f(x) = x, cos_plus_one, sin_plus_one and
/// abs_window f(x) = (2 - |x|) 1[|x| < 2]. Further forms can be registered
/// by name; every registered form must be nonnegative.
class ExogTransform {
 public:
  using Fn = std::function<double(double)>;

  static ExogTransform linear();
  static ExogTransform cos_plus_one();
  static ExogTransform sin_plus_one();
  static ExogTransform abs_window();
  static ExogTransform custom(std::string name, Fn fn);
  /// Built-in or previously registered transform; throws ConfigError.
  static ExogTransform from_name(const std::string& name);

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const noexcept { return name_; }
  bool is_linear() const noexcept { return name_ == "linear"; }

  bool operator==(const ExogTransform& o) const { return name_ == o.name_; }

 private:
  ExogTransform(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name_;
  Fn fn_;
};

/// Adds a user transform to the global registry (thread-safe).
void register_exog_transform(const ExogTransform& transform);

/// lambda_t = omega + sum_i alpha_i Y_{t-i} + sum_j beta_j lambda_{t-j}
///            + sum_k c_k f_k(X_{t-lag_k, k}).
///
/// The endogenous part is linear, so its derivative in the lagged means is
/// the constant beta vector.
struct LinkSpec {
  int p = 1;
  int q = 0;
  std::vector<ExogTransform> exog;
  /// Per-column lag in {0, 1}; empty means every column uses lag 1.
  std::vector<int> exog_lag;

  std::size_t m() const noexcept { return exog.size(); }
  /// Dimension of the regressor vector Z_t.
  std::size_t d() const noexcept { return static_cast<std::size_t>(p + q) + m(); }
  /// Number of mean parameters (omega, alpha, beta, c).
  std::size_t n_mean_params() const noexcept { return 1 + d(); }
  int lag(std::size_t column) const { return exog_lag.empty() ? 1 : exog_lag[column]; }

  /// Throws ConstraintError naming the violated constraint.
  void validate() const;
};

/// Model parameter theta = (omega, alpha, beta, c[, r]).
struct ParamVector {
  double omega = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> exog;
  /// NegBinomial dispersion; absent for Poisson models.
  std::optional<double> dispersion;

  double persistence() const;
  /// Flat (omega, alpha..., beta..., c...) without the dispersion.
  std::vector<double> mean_params() const;
  static ParamVector from_mean_params(const LinkSpec& link, std::span<const double> v);

  /// Name of the first violated constraint, if any.
  std::optional<std::string> violation(const LinkSpec& link) const;
  void validate(const LinkSpec& link) const;

  bool operator==(const ParamVector&) const = default;
};

/// Observed counts Y_1..Y_T with covariate rows X_1..X_T (T x m).
struct CountSeries {
  std::vector<std::int64_t> counts;
  Matrix covariates;
  std::vector<std::string> covariate_names;
  std::vector<std::string> timestamps;

  std::size_t size() const noexcept { return counts.size(); }
  std::size_t m() const noexcept { return covariates.cols(); }
  void validate() const;
};

/// Values before the first observation: y[i] = Y_{-i}, lambda[i] = lambda_{-i},
/// x = row X_0.
struct Presample {
  std::vector<double> y;
  std::vector<double> lambda;
  std::vector<double> x;
};

/// Initial values for the recursion. The default is lambda_0 = 0, Y_0 = Y_1,
/// X_0 = X_1 (all earlier lags equal to these).
struct InitPolicy {
  double lambda0 = 0.0;
  std::optional<Presample> presample;

  static InitPolicy defaults() { return {}; }
  static InitPolicy explicit_values(Presample p) { return {0.0, std::move(p)}; }
};

/// Lagged counts, transformed and raw covariates prepared once per
/// (series, link, init); reused across many parameter evaluations.
struct FilterDesign {
  std::size_t T = 0;
  int p = 0;
  int q = 0;
  std::size_t m = 0;
  Matrix y_lags;   // T x p: Y_{t-1..t-p}
  Matrix fx;       // T x m: f_k(X_{t-lag_k})
  Matrix x_raw;    // T x m: X_{t-lag_k}
  std::vector<double> lambda_presample;  // lambda_0, lambda_{-1}, ... (size q)
};

FilterDesign make_design(const CountSeries& series, const LinkSpec& link,
                         const InitPolicy& init = {});

/// h(z; theta) for one time point.
double link_value(const ParamVector& theta, std::span<const double> y_lags,
                  std::span<const double> lambda_lags, std::span<const double> fx);

/// Filtered conditional means lambda_1..lambda_T. Throws ConstraintError for
/// infeasible theta and DomainError when a mean is not positive.
std::vector<double> filter_lambda(const CountSeries& series, const LinkSpec& link,
                                  const ParamVector& theta, const InitPolicy& init = {});

/// Unchecked fast path over a prepared design; returns false if some
/// lambda_t <= 0 or is not finite.
bool filter_lambda(const FilterDesign& design, const ParamVector& theta,
                   std::vector<double>& lambda);

/// Filter plus d lambda_t / d theta (T x (1+p+q+m)) by forward recursion.
bool filter_with_sensitivities(const FilterDesign& design, const ParamVector& theta,
                               std::vector<double>& lambda, Matrix& dlambda);

/// Regressors Z_t = (Y_{t-1..t-p}, lambda_{t-1..t-q}, X_{t-lag}) as a T x d
/// matrix, using the same initial values as the filter.
Matrix regressors(const FilterDesign& design, std::span<const double> lambda);

}  // namespace countgof
