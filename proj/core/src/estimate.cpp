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

#include "countgof/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "countgof/error.hpp"
#include "countgof/rng.hpp"

namespace countgof {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unconstrained coordinates z <-> theta:
//   omega = exp(z_0)
//   (alpha, beta) = (1 - delta) softmax-with-slack(z_1..z_{p+q})
//   c_k = exp(z)
//   r = r_max * logistic(z)  (NB only)
struct Reparam {
  int p = 1;
  int q = 0;
  std::size_t m = 0;
  bool nb = false;
  double scale = 1.0 - 1e-6;
  double r_max = 1e6;

  std::size_t n_mean() const { return 1 + static_cast<std::size_t>(p + q) + m; }
  std::size_t dim() const { return n_mean() + (nb ? 1 : 0); }

  void to_natural(std::span<const double> z, ParamVector& theta) const {
    theta.omega = std::exp(z[0]);
    const std::size_t n = static_cast<std::size_t>(p + q);
    double zmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) zmax = std::max(zmax, z[1 + i]);
    double denom = std::exp(-zmax);
    for (std::size_t i = 0; i < n; ++i) denom += std::exp(z[1 + i] - zmax);
    theta.alpha.resize(p);
    theta.beta.resize(q);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = scale * std::exp(z[1 + i] - zmax) / denom;
      if (i < static_cast<std::size_t>(p)) theta.alpha[i] = v; else theta.beta[i - p] = v;
    }
    theta.exog.resize(m);
    for (std::size_t k = 0; k < m; ++k) theta.exog[k] = std::exp(z[1 + n + k]);
    if (nb) {
      const double zr = z[n_mean()];
      theta.dispersion = r_max / (1.0 + std::exp(-zr));
    } else {
      theta.dispersion.reset();
    }
  }

  std::vector<double> from_natural(const ParamVector& theta) const {
    std::vector<double> z(dim());
    z[0] = std::log(std::max(theta.omega, 1e-300));
    const std::size_t n = static_cast<std::size_t>(p + q);
    std::vector<double> v(n);
    for (int i = 0; i < p; ++i) v[i] = theta.alpha[i];
    for (int j = 0; j < q; ++j) v[p + j] = theta.beta[j];
    double s = 0.0;
    for (double& x : v) {
      x = std::max(x, 1e-8);
      s += x;
    }
    if (s >= 0.999 * scale) {
      for (double& x : v) x *= 0.999 * scale / s;
      s = 0.999 * scale;
    }
    const double slack = 1.0 - s / scale;
    for (std::size_t i = 0; i < n; ++i) z[1 + i] = std::log(v[i] / scale) - std::log(slack);
    for (std::size_t k = 0; k < m; ++k) z[1 + n + k] = std::log(std::max(theta.exog[k], 1e-8));
    if (nb) {
      const double r = std::clamp(theta.dispersion.value_or(10.0), 1e-6, 0.999 * r_max);
      z[n_mean()] = std::log(r / (r_max - r));
    }
    return z;
  }

  // grad_z = J^T grad_theta (in place layout: omega, alpha, beta, c, r).
  void chain(const ParamVector& theta, std::span<const double> g_nat,
             std::span<double> g_z) const {
    g_z[0] = g_nat[0] * theta.omega;
    const std::size_t n = static_cast<std::size_t>(p + q);
    double vg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = i < static_cast<std::size_t>(p) ? theta.alpha[i] : theta.beta[i - p];
      vg += v * g_nat[1 + i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double v = i < static_cast<std::size_t>(p) ? theta.alpha[i] : theta.beta[i - p];
      g_z[1 + i] = v * g_nat[1 + i] - v * vg / scale;
    }
    for (std::size_t k = 0; k < m; ++k) g_z[1 + n + k] = g_nat[1 + n + k] * theta.exog[k];
    if (nb) {
      const double r = *theta.dispersion;
      g_z[n_mean()] = g_nat[n_mean()] * r * (1.0 - r / r_max);
    }
  }
};

// Sum over t of d log f(y_t; lambda_t [, r]) / d(lambda_t [, r]).
double loglik_and_scores(const CountDistribution& family, std::span<const std::int64_t> y,
                         const std::vector<double>& lambda, double r,
                         std::vector<double>& dl_dlambda, double& dl_dr) {
  const std::size_t T = y.size();
  dl_dlambda.resize(T);
  dl_dr = 0.0;
  double ll = 0.0;
  if (family.family() == Family::NegBinomial) {
    const double lgr = std::lgamma(r);
    for (std::size_t t = 0; t < T; ++t) {
      const double yt = static_cast<double>(y[t]);
      const double l = lambda[t];
      const double rl = r + l;
      ll += std::lgamma(yt + r) - lgr - std::lgamma(yt + 1.0) + r * std::log(r / rl) +
            (y[t] > 0 ? yt * std::log(l / rl) : 0.0);
      dl_dlambda[t] = yt / l - (yt + r) / rl;
      double dig = 0.0;
      if (y[t] <= 200) {
        for (std::int64_t k = 0; k < y[t]; ++k) dig += 1.0 / (r + static_cast<double>(k));
      } else {
        dig = boost::math::digamma(yt + r) - boost::math::digamma(r);
      }
      dl_dr += dig + std::log(r / rl) + 1.0 - (yt + r) / rl;
    }
  } else {
    for (std::size_t t = 0; t < T; ++t) {
      const double yt = static_cast<double>(y[t]);
      const double l = lambda[t];
      ll += (y[t] > 0 ? yt * std::log(l) : 0.0) - l - std::lgamma(yt + 1.0);
      dl_dlambda[t] = yt / l - 1.0;
    }
  }
  return ll;
}

class Objective {
 public:
  Objective(const FilterDesign& design, std::span<const std::int64_t> counts,
            const CountDistribution& family, Reparam rp)
      : design_(design), counts_(counts), family_(family), rp_(rp) {}

  // Mean negative log-likelihood and its gradient in z.
  double operator()(std::span<const double> z, std::span<double> grad) {
    rp_.to_natural(z, theta_);
    if (!filter_with_sensitivities(design_, theta_, lambda_, dlambda_)) return kInf;
    double dl_dr = 0.0;
    const double r = theta_.dispersion.value_or(0.0);
    const double ll = loglik_and_scores(family_, counts_, lambda_, r, score_, dl_dr);
    if (!std::isfinite(ll)) return kInf;
    const std::size_t K = rp_.n_mean();
    g_nat_.assign(rp_.dim(), 0.0);
    for (std::size_t t = 0; t < design_.T; ++t) {
      const auto row = dlambda_.row(t);
      const double s = score_[t];
      for (std::size_t k = 0; k < K; ++k) g_nat_[k] += s * row[k];
    }
    if (rp_.nb) g_nat_[K] = dl_dr;
    const double inv_T = 1.0 / static_cast<double>(design_.T);
    for (double& g : g_nat_) g *= -inv_T;
    rp_.chain(theta_, g_nat_, grad);
    return -ll * inv_T;
  }

 private:
  const FilterDesign& design_;
  std::span<const std::int64_t> counts_;
  CountDistribution family_;
  Reparam rp_;
  ParamVector theta_;
  std::vector<double> lambda_;
  Matrix dlambda_;
  std::vector<double> score_;
  std::vector<double> g_nat_;
};

constexpr double kStallTolerance = 1e-6;

struct MinimizeResult {
  std::vector<double> z;
  double f = kInf;
  double gnorm = kInf;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

// BFGS on the inverse Hessian with backtracking Armijo line search. Accepted
// steps never increase the objective.
template <class F>
MinimizeResult bfgs(F& fn, std::vector<double> z, int max_iter, double gtol) {
  const std::size_t n = z.size();
  MinimizeResult res;
  std::vector<double> g(n), g_new(n), z_new(n), d(n), s(n), y(n), hy(n);
  double f = fn(z, g);
  if (!std::isfinite(f)) {
    res.z = z;
    return res;
  }
  res.trace.push_back(f);
  std::vector<double> H(n * n, 0.0);
  auto reset_h = [&](double diag) {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = diag;
  };
  reset_h(1.0);
  bool h_is_identity = true;
  bool stalled = false;
  int flat_steps = 0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (sup_norm(g) < gtol) break;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc -= H[i * n + j] * g[j];
      d[i] = acc;
    }
    double gd = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
    if (!(gd < 0.0)) {
      reset_h(1.0);
      h_is_identity = true;
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      gd = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    }
    double step = 1.0;
    const double dmax = sup_norm(d);
    if (dmax > 5.0) step = 5.0 / dmax;
    bool accepted = false;
    double f_new = kInf;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) z_new[i] = z[i] + step * d[i];
      f_new = fn(z_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!h_is_identity) {
        reset_h(1.0);
        h_is_identity = true;
        continue;
      }
      stalled = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = z_new[i] - z[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
    const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
    const double ss = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      if (h_is_identity) reset_h(sy / yy);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
      const double rho = 1.0 / sy;
      const double c = rho * rho * yhy + rho;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + c * s[i] * s[j];
      h_is_identity = false;
    }
    flat_steps = (f - f_new <= 1e-14 * (1.0 + std::fabs(f))) ? flat_steps + 1 : 0;
    z.swap(z_new);
    g.swap(g_new);
    f = f_new;
    res.trace.push_back(f);
    // Crawling towards a boundary in the unconstrained coordinates.
    if (flat_steps >= 5 && sup_norm(g) < kStallTolerance) {
      stalled = true;
      ++iter;
      break;
    }
  }
  res.z = std::move(z);
  res.f = f;
  res.gnorm = sup_norm(g);
  res.iterations = iter;
  // A line search that cannot improve on a point whose gradient is at the
  // level of rounding noise counts as converged.
  res.converged = res.gnorm < gtol || (stalled && res.gnorm < kStallTolerance);
  return res;
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Candidate starting points in natural coordinates.
std::vector<ParamVector> starting_points(const FilterDesign& design,
                                         std::span<const std::int64_t> counts,
                                         const FitOptions& opts) {
  std::vector<ParamVector> starts;
  if (opts.start) starts.push_back(*opts.start);
  const std::size_t T = counts.size();
  double ybar = 0.0;
  for (auto y : counts) ybar += static_cast<double>(y);
  ybar /= static_cast<double>(T);
  std::vector<double> fx_mean(design.m);
  for (std::size_t k = 0; k < design.m; ++k) fx_mean[k] = mean_of(design.fx.column(k));

  auto finish = [&](ParamVector th, double exog_share) {
    const double s = th.persistence();
    const double level = std::max(ybar * (1.0 - s), 0.05);
    double used = 0.0;
    th.exog.assign(design.m, 0.1);
    for (std::size_t k = 0; k < design.m; ++k) {
      if (fx_mean[k] > 1e-8) th.exog[k] = exog_share * level / (static_cast<double>(design.m) * fx_mean[k]);
      th.exog[k] = std::max(th.exog[k], 1e-3);
      used += th.exog[k] * fx_mean[k];
    }
    th.omega = std::max(level - used, 0.05 * level);
    return th;
  };

  // Small positive coefficients.
  {
    ParamVector th;
    th.alpha.assign(design.p, 0.3 / design.p);
    th.beta.assign(design.q, design.q ? 0.3 / design.q : 0.0);
    starts.push_back(finish(th, 0.5));
  }
  // Moment-based: lag-1 autocorrelation drives the persistence.
  {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double a = static_cast<double>(counts[t]) - ybar;
      den += a * a;
      if (t > 0) num += a * (static_cast<double>(counts[t - 1]) - ybar);
    }
    const double rho1 = den > 0.0 ? std::clamp(num / den, 0.02, 0.9) : 0.1;
    ParamVector th;
    th.alpha.assign(design.p, 0.01);
    th.alpha[0] = design.q ? 0.6 * rho1 : rho1;
    th.beta.assign(design.q, design.q ? 0.3 / design.q : 0.0);
    starts.push_back(finish(th, 0.4));
  }
  // Random feasible points.
  Rng rng(opts.seed);
  while (static_cast<int>(starts.size()) < std::max(opts.n_starts, 1) + 2) {
    ParamVector th;
    const double total = 0.1 + 0.7 * rng.uniform();
    std::vector<double> w(static_cast<std::size_t>(design.p + design.q));
    double ws = 0.0;
    for (double& x : w) ws += (x = rng.exponential());
    th.alpha.resize(design.p);
    th.beta.resize(design.q);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double v = total * w[i] / ws;
      if (i < static_cast<std::size_t>(design.p)) th.alpha[i] = v; else th.beta[i - design.p] = v;
    }
    th = finish(th, 0.2 + 0.6 * rng.uniform());
    th.omega *= 0.5 + rng.uniform();
    starts.push_back(th);
  }
  starts.resize(static_cast<std::size_t>(std::max(opts.n_starts, 1)));
  return starts;
}

void add_flags(FitResult& fit, const FitOptions& opts, bool all_zero) {
  const auto& th = fit.theta;
  bool boundary = th.omega < 1e-6 || th.persistence() > 1.0 - opts.boundary_delta - 1e-4;
  for (double a : th.alpha) boundary |= a < 1e-4;
  for (double b : th.beta) boundary |= b < 1e-4;
  for (double c : th.exog) boundary |= c < 1e-4;
  if (boundary) fit.flags.emplace_back("boundary");
  if (all_zero) fit.flags.emplace_back("all_zero_counts");
  if (th.dispersion && *th.dispersion > 0.99 * opts.max_dispersion)
    fit.flags.emplace_back("dispersion_at_upper_bound");
  if (!fit.converged) fit.flags.emplace_back("not_converged");
}

FitResult run_fit(const CountSeries& series, const LinkSpec& link, const FitOptions& opts,
                  const CountDistribution& family, const std::vector<ParamVector>& starts,
                  const FilterDesign& design) {
  Reparam rp;
  rp.p = link.p;
  rp.q = link.q;
  rp.m = link.m();
  rp.nb = family.family() == Family::NegBinomial;
  rp.scale = 1.0 - opts.boundary_delta;
  rp.r_max = opts.max_dispersion;
  Objective objective(design, series.counts, family, rp);

  MinimizeResult best;
  bool best_converged = false;
  for (const ParamVector& start : starts) {
    MinimizeResult r = bfgs(objective, rp.from_natural(start), opts.max_iterations,
                            opts.gradient_tolerance);
    if (!std::isfinite(r.f)) continue;
    const bool better = (r.converged && !best_converged) ||
                        (r.converged == best_converged && r.f < best.f);
    if (better) {
      best_converged = r.converged;
      best = std::move(r);
    }
  }

  FitResult fit;
  fit.T = series.size();
  fit.dist = family;
  fit.n_params = rp.dim();
  if (best.z.empty()) {
    fit.converged = false;
    fit.flags.emplace_back("no_finite_start");
    fit.loglik = -kInf;
    return fit;
  }
  rp.to_natural(best.z, fit.theta);
  if (rp.nb) fit.dist = CountDistribution::neg_binomial(*fit.theta.dispersion);
  if (!filter_lambda(design, fit.theta, fit.lambda))
    throw DomainError("fit produced non-positive conditional means");
  fit.loglik = log_likelihood(fit.dist, series.counts, fit.lambda);
  const auto ic = information_criteria(fit.loglik, fit.n_params, fit.T);
  fit.aic = ic.aic;
  fit.bic = ic.bic;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  fit.gradient_norm = best.gnorm;
  fit.objective_trace = std::move(best.trace);
  const bool all_zero = std::all_of(series.counts.begin(), series.counts.end(),
                                    [](std::int64_t y) { return y == 0; });
  add_flags(fit, opts, all_zero);
  return fit;
}

void check_fit_inputs(const CountSeries& series, const LinkSpec& link, std::size_t K) {
  if (series.size() <= K)
    throw ConstraintError("T > K", "T = " + std::to_string(series.size()) + " observations for " +
                                       std::to_string(K) + " parameters");
  for (std::size_t k = 0; k < link.m(); ++k) {
    if (!link.exog[k].is_linear()) continue;
    for (std::size_t t = 0; t < series.size(); ++t)
      if (series.covariates(t, k) < 0.0)
        throw ConstraintError("linear covariates >= 0",
                              "column " + std::to_string(k + 1) + " has a negative value at t = " +
                                  std::to_string(t + 1));
  }
}

}  // namespace

bool FitResult::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

InformationCriteria information_criteria(double loglik, std::size_t n_params, std::size_t T) {
  const double K = static_cast<double>(n_params);
  InformationCriteria ic;
  ic.aic = -2.0 * loglik + 2.0 * K;
  ic.bic = -2.0 * loglik + (n_params == 0 ? 0.0 : K * std::log(static_cast<double>(T)));
  return ic;
}

InformationCriteria information_criteria(const FitResult& fit, std::size_t T) {
  return information_criteria(fit.loglik, fit.n_params, T);
}

double log_likelihood(const CountDistribution& dist, std::span<const std::int64_t> counts,
                      std::span<const double> lambda) {
  double ll = 0.0;
  for (std::size_t t = 0; t < counts.size(); ++t) ll += dist.log_pmf(counts[t], lambda[t]);
  return ll;
}

double log_likelihood_gradient(const CountSeries& series, const LinkSpec& link,
                               const ParamVector& theta, const CountDistribution& dist,
                               const InitPolicy& init, std::vector<double>& gradient) {
  theta.validate(link);
  const FilterDesign design = make_design(series, link, init);
  std::vector<double> lambda;
  Matrix dl;
  if (!filter_with_sensitivities(design, theta, lambda, dl))
    throw DomainError("log_likelihood_gradient: non-positive conditional mean");
  const bool nb = dist.family() == Family::NegBinomial;
  const double r = nb ? theta.dispersion.value_or(dist.dispersion()) : 0.0;
  std::vector<double> score;
  double dl_dr = 0.0;
  const double ll = loglik_and_scores(dist, series.counts, lambda, r, score, dl_dr);
  const std::size_t K = link.n_mean_params();
  gradient.assign(K + (nb ? 1 : 0), 0.0);
  for (std::size_t t = 0; t < design.T; ++t)
    for (std::size_t k = 0; k < K; ++k) gradient[k] += score[t] * dl(t, k);
  if (nb) gradient[K] = dl_dr;
  return ll;
}

FitResult poisson_qmle(const CountSeries& series, const LinkSpec& link, const FitOptions& opts) {
  link.validate();
  check_fit_inputs(series, link, link.n_mean_params());
  const FilterDesign design = make_design(series, link, opts.init);
  return run_fit(series, link, opts, CountDistribution::poisson(),
                 starting_points(design, series.counts, opts), design);
}

FitResult neg_binomial_mle(const CountSeries& series, const LinkSpec& link,
                           const FitOptions& opts) {
  link.validate();
  check_fit_inputs(series, link, link.n_mean_params() + 1);
  const FilterDesign design = make_design(series, link, opts.init);

  // Mean parameters from the Poisson QMLE, dispersion from moments.
  FitOptions qopts = opts;
  if (qopts.start) qopts.start->dispersion.reset();
  const FitResult qmle = run_fit(series, link, qopts, CountDistribution::poisson(),
                                 starting_points(design, series.counts, qopts), design);
  double pearson = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    const double e = static_cast<double>(series.counts[t]) - qmle.lambda[t];
    pearson += e * e / qmle.lambda[t];
  }
  pearson /= static_cast<double>(series.size());
  // Var = lambda (1 + lambda / r): solve for r with the mean lambda.
  const double lbar = mean_of(qmle.lambda);
  const double r0 = pearson > 1.0 + 1e-3 ? std::clamp(lbar / (pearson - 1.0), 0.05, 1e4) : 1e4;

  std::vector<ParamVector> starts;
  if (opts.start && opts.start->dispersion) starts.push_back(*opts.start);
  ParamVector s1 = qmle.theta;
  s1.dispersion = r0;
  starts.push_back(s1);
  ParamVector s2 = qmle.theta;
  s2.dispersion = 1.0;
  starts.push_back(s2);
  return run_fit(series, link, opts, CountDistribution::neg_binomial(1.0), starts, design);
}

FitResult fit_model(const CountSeries& series, const LinkSpec& link,
                    const CountDistribution& family, const FitOptions& opts) {
  switch (family.family()) {
    case Family::Poisson:
      return poisson_qmle(series, link, opts);
    case Family::NegBinomial:
      return neg_binomial_mle(series, link, opts);
    case Family::ZeroInflatedPoisson:
      break;
  }
  throw ConfigError("fitting is implemented for poisson and negbin families only");
}

}  // namespace countgof
