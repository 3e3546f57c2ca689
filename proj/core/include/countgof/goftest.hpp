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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countgof/distribution.hpp"
#include "countgof/estimate.hpp"
#include "countgof/model.hpp"

namespace countgof {

enum class UWeight { PowerRho, Beta };
enum class KernelEval { ClosedFormPoisson, QuadratureGeneral };
enum class Variant { DeltaTW, Delta0, Delta1 };
/// Delta0 integrates |mean residual|^2 (Plain) or |mean squared residual|^2.
enum class Delta0Form { Plain, Squared };

/// Weight W(u, v) = w(u) omega(v): w is u^rho or u^rho (1-u)^kappa, omega is
/// the spherical stable density whose cosine transform is
/// exp(-gamma ||z||^eta).
struct TestTuning {
  double rho = 0.0;
  double gamma = 0.5;
  double eta = 0.5;
  UWeight u_weight = UWeight::PowerRho;
  double kappa = 0.0;
  /// ClosedFormPoisson falls back to quadrature when the null family is not
  /// Poisson or the u-weight is Beta.
  KernelEval kernel_eval = KernelEval::ClosedFormPoisson;
  int n_nodes = 64;

  void validate() const;
  double weight(double u) const;
  std::string label() const;
  bool operator==(const TestTuning&) const = default;
};

struct StatisticSpec {
  Variant variant = Variant::DeltaTW;
  TestTuning tuning;
  Delta0Form delta0_form = Delta0Form::Plain;
  int grid_size = 1001;

  void validate() const;
  /// Stable column label, e.g. "DeltaTW(rho=0;gamma=0.5;eta=0.5)".
  std::string label() const;
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct GofResult {
  double statistic = 0.0;
  Variant variant = Variant::DeltaTW;
  TestTuning tuning;
  std::string label;
  std::optional<std::vector<double>> replicates;
  std::optional<double> p_value;
  /// Order-statistic decision at the plan's alpha; present with replicates.
  std::optional<bool> reject;
};

/// Residual u^y - g_lambda(u).
double residual(double u, std::int64_t y, double lambda, const CountDistribution& dist);

/// exp(-gamma ||z||^eta); 1 at z = 0.
double xi_kernel(std::span<const double> z, double gamma, double eta);

/// Integral over [0,1] of (u^y1 - e^{l1(u-1)})(u^y2 - e^{l2(u-1)}) u^rho du in
/// closed form.
double k_rho_poisson(std::int64_t y1, std::int64_t y2, double lambda1, double lambda2,
                     double rho);

/// Gauss-Legendre evaluation of the u-kernel for any family and u-weight.
double k_w_general(std::int64_t y1, std::int64_t y2, double lambda1, double lambda2,
                   const CountDistribution& dist, const TestTuning& weight, int n_nodes);

/// Everything a statistic needs: counts, fitted means, regressors Z_t (T x d)
/// and the null family.
struct GofInputs {
  std::vector<std::int64_t> counts;
  std::vector<double> lambda;
  Matrix z;
  CountDistribution dist = CountDistribution::poisson();

  std::size_t size() const noexcept { return counts.size(); }
};

GofInputs make_gof_inputs(const CountSeries& series, const LinkSpec& link,
                          const FitResult& fit, const InitPolicy& init = {});

/// (1/T) sum_{t,s} K_{w,ts} exp(-gamma ||Z_t - Z_s||^eta); O(T^2), evaluated as
/// the diagonal plus twice the upper triangle in fixed row blocks so the
/// result is bit-identical for any worker count.
double delta_tw(const GofInputs& in, const TestTuning& tuning, int workers = 1);

/// T * integral_0^1 |T^{-1} sum_t e_t(u)|^2 du by Gauss-Legendre.
double delta0(const GofInputs& in, int n_nodes = 64, Delta0Form form = Delta0Form::Plain);

/// sqrt(T) sup_{0<u<1} |T^{-1} sum_t e_t(u)| on an open uniform grid refined by
/// golden-section search around the grid maximum.
double delta1(const GofInputs& in, int grid_size = 1001);

/// All requested statistics on one dataset, sharing the u-kernel and distance
/// matrices between DeltaTW tunings.
std::vector<double> evaluate_statistics(const GofInputs& in,
                                        std::span<const StatisticSpec> specs,
                                        int workers = 1);

GofResult compute_statistic(const GofInputs& in, const StatisticSpec& spec, int workers = 1);

}  // namespace countgof
