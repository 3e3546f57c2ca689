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

#include "countgof/goftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "countgof/error.hpp"
#include "countgof/parallel.hpp"
#include "countgof/quadrature.hpp"
#include "countgof/special.hpp"

namespace countgof {
namespace {

constexpr std::size_t kRowBlock = 32;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline double xi_from_sq(double d2, double gamma, double eta) {
  double r;
  if (eta == 2.0) {
    r = d2;
  } else if (eta == 1.0) {
    r = std::sqrt(d2);
  } else if (eta == 0.5) {
    r = std::sqrt(std::sqrt(d2));
  } else if (eta == 0.25) {
    r = std::sqrt(std::sqrt(std::sqrt(d2)));
  } else {
    r = std::pow(d2, 0.5 * eta);
  }
  return std::exp(-gamma * r);
}

inline double sq_dist(const Matrix& z, std::size_t t, std::size_t s) {
  const auto a = z.row(t);
  const auto b = z.row(s);
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    d2 += diff * diff;
  }
  return d2;
}

bool closed_form_applies(const GofInputs& in, const TestTuning& tu) {
  return tu.kernel_eval == KernelEval::ClosedFormPoisson && tu.u_weight == UWeight::PowerRho &&
         in.dist.family() == Family::Poisson;
}

// Evaluates K_{w,ts} for one row t against columns s >= t.
class UKernel {
 public:
  UKernel(const GofInputs& in, const TestTuning& tu) : in_(in), rho_(tu.rho) {
    const std::size_t T = in.size();
    closed_ = closed_form_applies(in, tu);
    if (closed_) {
      // A(v, s) = exp(-lambda_s) I(v + rho, lambda_s) for every distinct count v.
      for (std::size_t t = 0; t < T; ++t) {
        auto [it, inserted] = y_index_.try_emplace(in.counts[t], y_index_.size());
        (void)it;
        (void)inserted;
      }
      a_table_ = Matrix(y_index_.size(), T);
      for (const auto& [v, idx] : y_index_)
        for (std::size_t s = 0; s < T; ++s)
          a_table_(idx, s) = scaled_incomplete_I(static_cast<double>(v) + rho_, in.lambda[s]);
      row_y_.resize(T);
      for (std::size_t t = 0; t < T; ++t) row_y_[t] = y_index_.at(in.counts[t]);
    } else {
      const QuadratureRule& rule = gauss_legendre_unit(tu.n_nodes);
      const std::size_t N = rule.nodes.size();
      e_ = Matrix(T, N);
      for (std::size_t k = 0; k < N; ++k) {
        const double u = rule.nodes[k];
        const double sw = std::sqrt(rule.weights[k] * tu.weight(u));
        for (std::size_t t = 0; t < T; ++t)
          e_(t, k) = sw * residual(u, in.counts[t], in.lambda[t], in.dist);
      }
    }
  }

  double operator()(std::size_t t, std::size_t s) const {
    if (closed_) {
      const double yt = static_cast<double>(in_.counts[t]);
      const double ys = static_cast<double>(in_.counts[s]);
      return 1.0 / (1.0 + yt + ys + rho_) - a_table_(row_y_[t], s) - a_table_(row_y_[s], t) +
             scaled_incomplete_I(rho_, in_.lambda[t] + in_.lambda[s]);
    }
    const auto a = e_.row(t);
    const auto b = e_.row(s);
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
  }

 private:
  const GofInputs& in_;
  double rho_;
  bool closed_ = false;
  std::map<std::int64_t, std::size_t> y_index_;
  std::vector<std::size_t> row_y_;
  Matrix a_table_;
  Matrix e_;
};

struct KernelKey {
  double rho;
  int weight;
  double kappa;
  bool closed;
  int nodes;
  auto operator<=>(const KernelKey&) const = default;
};

// Pairwise sums for several (gamma, eta) pairs sharing one u-kernel.
std::vector<double> pairwise_statistics(const GofInputs& in, const TestTuning& kernel_tuning,
                                        std::span<const std::pair<double, double>> ge,
                                        int workers) {
  const std::size_t T = in.size();
  const UKernel kernel(in, kernel_tuning);
  const std::size_t n_blocks = (T + kRowBlock - 1) / kRowBlock;
  const std::size_t n_specs = ge.size();
  std::vector<double> partial(n_blocks * n_specs, 0.0);
  parallel_for(n_blocks, workers, [&](std::size_t b) {
    std::vector<double> acc(n_specs, 0.0);
    const std::size_t t_end = std::min(T, (b + 1) * kRowBlock);
    for (std::size_t t = b * kRowBlock; t < t_end; ++t) {
      const double kd = kernel(t, t);
      for (std::size_t j = 0; j < n_specs; ++j) acc[j] += kd;
      for (std::size_t s = t + 1; s < T; ++s) {
        const double k2 = 2.0 * kernel(t, s);
        const double d2 = sq_dist(in.z, t, s);
        for (std::size_t j = 0; j < n_specs; ++j)
          acc[j] += k2 * xi_from_sq(d2, ge[j].first, ge[j].second);
      }
    }
    for (std::size_t j = 0; j < n_specs; ++j) partial[b * n_specs + j] = acc[j];
  });
  std::vector<double> out(n_specs, 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b)
    for (std::size_t j = 0; j < n_specs; ++j) out[j] += partial[b * n_specs + j];
  for (double& v : out) v = std::max(0.0, v / static_cast<double>(T));
  return out;
}

// Mean residual (1/T) sum_t e_t(u), grouping equal counts.
class MeanResidual {
 public:
  explicit MeanResidual(const GofInputs& in) : in_(in) {
    for (auto y : in.counts) ++count_freq_[y];
  }
  double operator()(double u) const {
    double s = 0.0;
    for (const auto& [y, n] : count_freq_)
      s += static_cast<double>(n) * (y == 0 ? 1.0 : std::pow(u, static_cast<double>(y)));
    for (double l : in_.lambda) s -= in_.dist.pgf(l, u);
    return s / static_cast<double>(in_.size());
  }

 private:
  const GofInputs& in_;
  std::map<std::int64_t, std::size_t> count_freq_;
};

void check_inputs(const GofInputs& in) {
  if (in.counts.empty()) throw ConstraintError("T >= 1", "empty statistic input");
  if (in.lambda.size() != in.counts.size())
    throw ConstraintError("lambda aligned with counts",
                          std::to_string(in.lambda.size()) + " means for " +
                              std::to_string(in.counts.size()) + " counts");
  if (in.z.rows() != in.counts.size())
    throw ConstraintError("regressor rows == T", "regressor matrix misaligned");
  for (double l : in.lambda)
    if (!(l > 0.0)) throw DomainError("statistic: fitted means must be positive");
}

}  // namespace

void TestTuning::validate() const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ConstraintError("rho >= 0", "got " + fmt(rho));
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConstraintError("gamma > 0", "got " + fmt(gamma));
  if (!(eta > 0.0 && eta <= 2.0)) throw ConstraintError("eta in (0,2]", "got " + fmt(eta));
  if (!(kappa >= 0.0)) throw ConstraintError("kappa >= 0", "got " + fmt(kappa));
  if (n_nodes < 32) throw ConstraintError("quadrature nodes >= 32", "got " + std::to_string(n_nodes));
}

double TestTuning::weight(double u) const {
  double w = rho == 0.0 ? 1.0 : std::pow(u, rho);
  if (u_weight == UWeight::Beta && kappa != 0.0) w *= std::pow(1.0 - u, kappa);
  return w;
}

std::string TestTuning::label() const {
  std::string s = "rho=" + fmt(rho) + ";gamma=" + fmt(gamma) + ";eta=" + fmt(eta);
  if (u_weight == UWeight::Beta) s += ";kappa=" + fmt(kappa);
  return s;
}

void StatisticSpec::validate() const {
  if (variant == Variant::DeltaTW) tuning.validate();
  if (variant == Variant::Delta0 && tuning.n_nodes < 32)
    throw ConstraintError("quadrature nodes >= 32", "got " + std::to_string(tuning.n_nodes));
  if (variant == Variant::Delta1 && grid_size < 101)
    throw ConstraintError("grid_size >= 101", "got " + std::to_string(grid_size));
}

std::string StatisticSpec::label() const {
  switch (variant) {
    case Variant::DeltaTW: return "DeltaTW(" + tuning.label() + ")";
    case Variant::Delta0: return delta0_form == Delta0Form::Plain ? "Delta0" : "Delta0sq";
    case Variant::Delta1: return "Delta1";
  }
  return "?";
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::DeltaTW: return "DeltaTW";
    case Variant::Delta0: return "Delta0";
    case Variant::Delta1: return "Delta1";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "DeltaTW" || name == "tw" || name == "TW") return Variant::DeltaTW;
  if (name == "Delta0" || name == "delta0" || name == "0") return Variant::Delta0;
  if (name == "Delta1" || name == "delta1" || name == "1") return Variant::Delta1;
  throw ConfigError("unknown statistic variant '" + name + "'");
}

double residual(double u, std::int64_t y, double lambda, const CountDistribution& dist) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("residual: u must lie in [0,1]");
  if (!(lambda > 0.0)) throw DomainError("residual: lambda must be positive");
  if (y < 0) throw DomainError("residual: negative count");
  const double uy = y == 0 ? 1.0 : std::pow(u, static_cast<double>(y));
  return uy - dist.pgf(lambda, u);
}

double xi_kernel(std::span<const double> z, double gamma, double eta) {
  if (!(gamma > 0.0) || !(eta > 0.0 && eta <= 2.0))
    throw DomainError("xi_kernel: need gamma > 0 and eta in (0,2]");
  double d2 = 0.0;
  for (double v : z) d2 += v * v;
  return xi_from_sq(d2, gamma, eta);
}

double k_rho_poisson(std::int64_t y1, std::int64_t y2, double lambda1, double lambda2,
                     double rho) {
  if (y1 < 0 || y2 < 0) throw DomainError("k_rho_poisson: negative count");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw DomainError("k_rho_poisson: lambda must be positive");
  if (!(rho >= 0.0)) throw DomainError("k_rho_poisson: rho must be >= 0");
  const double a1 = static_cast<double>(y1) + rho;
  const double a2 = static_cast<double>(y2) + rho;
  double c1 = scaled_incomplete_I(a1, lambda2);
  double c2 = scaled_incomplete_I(a2, lambda1);
  if (c2 < c1) std::swap(c1, c2);
  return 1.0 / (1.0 + static_cast<double>(y1 + y2) + rho) - (c1 + c2) +
         scaled_incomplete_I(rho, lambda1 + lambda2);
}

double k_w_general(std::int64_t y1, std::int64_t y2, double lambda1, double lambda2,
                   const CountDistribution& dist, const TestTuning& weight, int n_nodes) {
  if (n_nodes < 32) throw ConstraintError("quadrature nodes >= 32", "got " + std::to_string(n_nodes));
  const QuadratureRule& rule = gauss_legendre_unit(n_nodes);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = rule.nodes[k];
    acc += rule.weights[k] * weight.weight(u) * residual(u, y1, lambda1, dist) *
           residual(u, y2, lambda2, dist);
  }
  return acc;
}

GofInputs make_gof_inputs(const CountSeries& series, const LinkSpec& link, const FitResult& fit,
                          const InitPolicy& init) {
  if (fit.lambda.size() != series.size())
    throw ConstraintError("fit aligned with series", "fitted means do not match series length");
  const FilterDesign design = make_design(series, link, init);
  GofInputs in;
  in.counts = series.counts;
  in.lambda = fit.lambda;
  in.z = regressors(design, fit.lambda);
  in.dist = fit.dist;
  return in;
}

double delta_tw(const GofInputs& in, const TestTuning& tuning, int workers) {
  tuning.validate();
  check_inputs(in);
  const std::pair<double, double> ge{tuning.gamma, tuning.eta};
  return pairwise_statistics(in, tuning, std::span(&ge, 1), workers)[0];
}

double delta0(const GofInputs& in, int n_nodes, Delta0Form form) {
  check_inputs(in);
  if (n_nodes < 32) throw ConstraintError("quadrature nodes >= 32", "got " + std::to_string(n_nodes));
  const QuadratureRule& rule = gauss_legendre_unit(n_nodes);
  const double T = static_cast<double>(in.size());
  double acc = 0.0;
  if (form == Delta0Form::Plain) {
    const MeanResidual mean(in);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double m = mean(rule.nodes[k]);
      acc += rule.weights[k] * m * m;
    }
  } else {
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      double s = 0.0;
      for (std::size_t t = 0; t < in.size(); ++t) {
        const double e = residual(rule.nodes[k], in.counts[t], in.lambda[t], in.dist);
        s += e * e;
      }
      s /= T;
      acc += rule.weights[k] * s * s;
    }
  }
  return T * acc;
}

double delta1(const GofInputs& in, int grid_size) {
  check_inputs(in);
  if (grid_size < 101) throw ConstraintError("grid_size >= 101", "got " + std::to_string(grid_size));
  const MeanResidual mean(in);
  const double h = 1.0 / (grid_size + 1);
  double best = -1.0;
  int arg = 1;
  for (int i = 1; i <= grid_size; ++i) {
    const double v = std::fabs(mean(i * h));
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  // Golden-section refinement on the bracketing grid cells.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::max((arg - 1) * h, 1e-12);
  double hi = std::min((arg + 1) * h, 1.0 - 1e-12);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = std::fabs(mean(x1));
  double f2 = std::fabs(mean(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = std::fabs(mean(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = std::fabs(mean(x2));
    }
  }
  best = std::max({best, f1, f2});
  return std::sqrt(static_cast<double>(in.size())) * best;
}

std::vector<double> evaluate_statistics(const GofInputs& in, std::span<const StatisticSpec> specs,
                                        int workers) {
  check_inputs(in);
  std::vector<double> out(specs.size(), 0.0);
  std::map<KernelKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const StatisticSpec& s = specs[i];
    s.validate();
    switch (s.variant) {
      case Variant::DeltaTW: {
        const auto& tu = s.tuning;
        const bool closed = closed_form_applies(in, tu);
        groups[KernelKey{tu.rho, static_cast<int>(tu.u_weight),
                         tu.u_weight == UWeight::Beta ? tu.kappa : 0.0, closed,
                         closed ? 0 : tu.n_nodes}]
            .push_back(i);
        break;
      }
      case Variant::Delta0:
        out[i] = delta0(in, s.tuning.n_nodes, s.delta0_form);
        break;
      case Variant::Delta1:
        out[i] = delta1(in, s.grid_size);
        break;
    }
  }
  for (const auto& [key, members] : groups) {
    std::vector<std::pair<double, double>> ge;
    for (std::size_t i : members) ge.emplace_back(specs[i].tuning.gamma, specs[i].tuning.eta);
    const auto values = pairwise_statistics(in, specs[members.front()].tuning, ge, workers);
    for (std::size_t j = 0; j < members.size(); ++j) out[members[j]] = values[j];
  }
  return out;
}

GofResult compute_statistic(const GofInputs& in, const StatisticSpec& spec, int workers) {
  GofResult r;
  r.variant = spec.variant;
  r.tuning = spec.tuning;
  r.label = spec.label();
  r.statistic = evaluate_statistics(in, std::span(&spec, 1), workers)[0];
  return r;
}

}  // namespace countgof
