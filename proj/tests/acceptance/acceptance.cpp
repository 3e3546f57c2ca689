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
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   countgof_acceptance [--only 1,3,7] [--workers N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "countgof/config.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/mcstudy.hpp"
#include "countgof/parallel.hpp"
#include "countgof/quadrature.hpp"
#include "countgof/rng.hpp"
#include "countgof/simulate.hpp"
#include "countgof_cli/cli.hpp"

namespace {

using namespace countgof;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int g_workers = 1;

// ---------------------------------------------------------------------------
// 1. Closed-form kernel against 256-node Gauss-Legendre.

// Integrand in v with u = v^2, so u^rho du = 2 v^{2 rho + 1} dv is smooth.
double legendre_kernel(std::int64_t y1, std::int64_t y2, double l1, double l2, double rho) {
  static const QuadratureRule rule = gauss_legendre(256, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = rule.nodes[k];
    const double u = v * v;
    const double e1 = std::pow(u, static_cast<double>(y1)) - std::exp(l1 * (u - 1.0));
    const double e2 = std::pow(u, static_cast<double>(y2)) - std::exp(l2 * (u - 1.0));
    s += rule.weights[k] * 2.0 * v * std::pow(u, rho) * e1 * e2;
  }
  return s;
}

Verdict kernel_oracle() {
  Rng rng(20260101);
  const double rhos[] = {0.0, 0.5, 2.0};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto y1 = rng.uniform_int(0, 20);
    const auto y2 = rng.uniform_int(0, 20);
    const double l1 = 0.05 + 19.95 * rng.uniform_open();
    const double l2 = 0.05 + 19.95 * rng.uniform_open();
    const double rho = rhos[rng.uniform_int(0, 2)];
    const double k = k_rho_poisson(y1, y2, l1, l2, rho);
    const double ref = legendre_kernel(y1, y2, l1, l2, rho);
    worst = std::max(worst, std::fabs(k - ref) / std::fabs(ref));
  }
  return {worst < 1e-9, "1000 tuples, max relative error " + fmt("%.2e", worst) + " (limit 1e-9)"};
}

// ---------------------------------------------------------------------------
// 2. Double-sum statistic against tensor quadrature of the defining integral.

// T * int_0^1 int_{R^2} |D_T(u; v)|^2 phi(v) dv du with phi = N(0, 2 gamma I),
// the spectral density of exp(-gamma ||z||^2). Gauss-Legendre in u,
// Gauss-Hermite in each v coordinate.
double definitional(const GofInputs& in, double gamma, int nu, int nv) {
  const std::size_t T = in.size();
  const auto ur = gauss_legendre(nu, 0.0, 1.0);
  const auto hr = gauss_hermite(nv);
  const double scale = std::sqrt(4.0 * gamma);
  std::vector<std::vector<double>> eps(ur.nodes.size(), std::vector<double>(T));
  for (std::size_t k = 0; k < ur.nodes.size(); ++k)
    for (std::size_t t = 0; t < T; ++t) {
      const double u = ur.nodes[k];
      eps[k][t] = std::pow(u, static_cast<double>(in.counts[t])) - std::exp(in.lambda[t] * (u - 1.0));
    }
  std::vector<double> c(T), s(T);
  double total = 0.0;
  for (std::size_t i = 0; i < hr.nodes.size(); ++i)
    for (std::size_t j = 0; j < hr.nodes.size(); ++j) {
      const double w = hr.weights[i] * hr.weights[j] / kPi;
      for (std::size_t t = 0; t < T; ++t) {
        const double arg = scale * (hr.nodes[i] * in.z(t, 0) + hr.nodes[j] * in.z(t, 1));
        c[t] = std::cos(arg);
        s[t] = std::sin(arg);
      }
      double inner = 0.0;
      for (std::size_t k = 0; k < ur.nodes.size(); ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
          re += eps[k][t] * c[t];
          im += eps[k][t] * s[t];
        }
        inner += ur.weights[k] * (re * re + im * im);
      }
      total += w * inner;
    }
  return total / static_cast<double>(T);
}

Verdict definitional_equivalence() {
  const DgpSpec base = config::dgp_preset("arx1-cos");
  double worst = 0.0;
  std::size_t d = 0;
  for (int r = 0; r < 20; ++r) {
    DgpSpec dgp = base;
    dgp.seed = 500 + static_cast<std::uint64_t>(r);
    const SimulatedSeries sim = simulate_counts(dgp, 50);
    const FitResult fit = poisson_qmle(sim.series, dgp.link);
    const GofInputs in = make_gof_inputs(sim.series, dgp.link, fit);
    d = in.z.cols();
    TestTuning tu;
    tu.eta = 2.0;
    tu.gamma = r % 2 == 0 ? 0.5 : 1.0;
    const double ref = definitional(in, tu.gamma, 64, 160);
    worst = std::max(worst, std::fabs(delta_tw(in, tu, 1) - ref) / ref);
  }
  return {worst < 1e-5 && d == 2, "20 datasets, T=50, d=" + std::to_string(d) +
                                      ", max relative error " + fmt("%.2e", worst) + " (limit 1e-5)"};
}

// ---------------------------------------------------------------------------
// 3, 4, 5, 7. Monte-Carlo studies at desk scale.

ExperimentDesign design(const std::string& json_text) {
  return config::read_experiment(config::json::parse(json_text));
}

const ExperimentResult& size_study() {
  static const ExperimentResult r = run_experiment(design(R"({
      "name": "size", "null": {"preset": "arx1-cos"}, "dgp": {"preset": "arx1-cos"},
      "T": [200], "M": 500, "B": 199, "alpha": 0.05,
      "tunings": [{"gamma": 0.25, "eta": 0.25}, {"gamma": 0.5, "eta": 0.5}, {"gamma": 1, "eta": 1}],
      "variants": ["DeltaTW"], "seed": 2026})"), g_workers);
  return r;
}

Verdict size() {
  const ExperimentResult& r = size_study();
  bool ok = true;
  std::string detail;
  for (std::size_t c = 0; c < r.table.columns.size(); ++c) {
    const RejectionCell& cell = r.table.cells[0][c];
    ok &= cell.rate() >= 0.027 && cell.rate() <= 0.073;
    detail += (c ? ", " : "") + r.table.columns[c] + "=" + fmt("%.3f", cell.rate()) +
              " (n=" + std::to_string(cell.n) + ")";
  }
  return {ok, detail + "; band [0.027, 0.073]"};
}

Verdict uniformity() {
  const ExperimentResult& r = size_study();
  double worst = 0.0;
  std::string detail;
  for (std::size_t c = 0; c < r.table.columns.size(); ++c) {
    const double d = ks_uniform_distance(r.p_values[0][c]);
    worst = std::max(worst, d);
    detail += (c ? ", " : "") + fmt("%.4f", d);
  }
  return {worst < 0.08, "KS distance of null p-values per tuning: " + detail + " (limit 0.08)"};
}

Verdict power_negbin() {
  const ExperimentResult r = run_experiment(design(R"({
      "name": "nb", "null": {"preset": "arx1-cos"},
      "dgp": {"preset": "arx1-cos", "family": "negbin", "shape": 3},
      "T": [200], "M": 300, "B": 199, "tunings": [{"gamma": 0.5, "eta": 0.5}],
      "variants": ["DeltaTW"], "seed": 2027})"), g_workers);
  const double rate = r.table.cells[0][0].rate();
  return {std::fabs(rate - 0.884) <= 0.08,
          "rate " + fmt("%.3f", rate) + " (target 0.884 +- 0.08, n=" +
              std::to_string(r.table.cells[0][0].n) + ")"};
}

Verdict power_sin() {
  const ExperimentResult r = run_experiment(design(R"({
      "name": "sin", "null": {"preset": "arx1-cos"},
      "dgp": {"preset": "arx1-cos", "transform": "sin_plus_one"},
      "T": [200], "M": 300, "B": 199, "tunings": [{"gamma": 1, "eta": 1}],
      "variants": ["DeltaTW", "Delta0"], "seed": 2028})"), g_workers);
  const double tw = r.table.cells[0][0].rate();
  const double d0 = r.table.cells[0][1].rate();
  return {std::fabs(tw - 0.969) <= 0.08 && d0 < tw,
          "DeltaTW rate " + fmt("%.3f", tw) + " (target 0.969 +- 0.08), Delta0 rate " +
              fmt("%.3f", d0) + " (must be lower)"};
}

// ---------------------------------------------------------------------------
// 6. Estimation consistency and gradient.

Verdict estimation() {
  const DgpSpec base = config::dgp_preset("garchx11-cos");
  const std::vector<double> truth = base.theta.mean_params();
  std::vector<std::vector<double>> est(50);
  std::vector<int> conv(50, 0);
  parallel_for(50, g_workers, [&](std::size_t r) {
    DgpSpec dgp = base;
    dgp.seed = 9000 + r;
    const SimulatedSeries sim = simulate_counts(dgp, 5000);
    const FitResult fit = poisson_qmle(sim.series, dgp.link);
    est[r] = fit.theta.mean_params();
    conv[r] = fit.converged;
  });
  std::vector<double> mae(truth.size(), 0.0);
  for (const auto& e : est)
    for (std::size_t k = 0; k < truth.size(); ++k) mae[k] += std::fabs(e[k] - truth[k]) / 50.0;
  const double worst_mae = *std::max_element(mae.begin(), mae.end());
  const int n_conv = std::accumulate(conv.begin(), conv.end(), 0);

  // Central differences of the log-likelihood at random feasible points.
  DgpSpec dgp = base;
  dgp.seed = 9100;
  const SimulatedSeries sim = simulate_counts(dgp, 5000);
  Rng rng(9101);
  double worst_grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    ParamVector th;
    th.omega = 0.05 + rng.uniform();
    const double a = 0.05 + 0.6 * rng.uniform();
    th.alpha = {a};
    th.beta = {(0.95 - a) * rng.uniform()};
    th.exog = {0.05 + rng.uniform()};
    std::vector<double> g;
    log_likelihood_gradient(sim.series, dgp.link, th, CountDistribution::poisson(), {}, g);
    const std::vector<double> v = th.mean_params();
    auto ll = [&](const std::vector<double>& p) {
      const ParamVector q = ParamVector::from_mean_params(dgp.link, p);
      return log_likelihood(CountDistribution::poisson(), sim.series.counts,
                            filter_lambda(sim.series, dgp.link, q));
    };
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::fabs(v[k]));
      auto up = v, dn = v;
      up[k] += h;
      dn[k] -= h;
      const double fd = (ll(up) - ll(dn)) / (2.0 * h);
      worst_grad = std::max(worst_grad, std::fabs(g[k] - fd) / std::max(1.0, std::fabs(fd)));
    }
  }
  std::string detail = "MAE (omega, alpha1, beta1, c) = (";
  for (std::size_t k = 0; k < mae.size(); ++k) detail += (k ? ", " : "") + fmt("%.4f", mae[k]);
  detail += ") limit 0.05, " + std::to_string(n_conv) + "/50 converged; gradient max relative gap " +
            fmt("%.2e", worst_grad) + " (limit 1e-5)";
  return {worst_mae < 0.05 && worst_grad < 1e-5, detail};
}

// ---------------------------------------------------------------------------
// 8. Determinism of the mc subcommand across worker counts.

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "countgof_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "design.json";
  std::ofstream(cfg) << R"({
    "name": "determinism", "dgp": {"preset": "arx1-cos"}, "T": [100, 200],
    "M": 24, "B": 49, "tunings": "standard", "variants": ["DeltaTW", "Delta0", "Delta1"],
    "seed": 77})";
  std::vector<std::string> csv;
  for (int w : {1, 4, 8}) {
    const std::string prefix = (dir / ("w" + std::to_string(w))).string();
    const std::string ws = std::to_string(w);
    const std::string cfg_s = cfg.string();
    const char* argv[] = {"countgof", "mc", "--config", cfg_s.c_str(), "--workers", ws.c_str(),
                          "--out", prefix.c_str()};
    std::ostringstream out, err;
    if (cli::run(8, argv, out, err) != 0) return {false, "mc failed: " + err.str()};
    std::ifstream f(prefix + ".csv", std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    csv.push_back(os.str());
  }
  fs::remove_all(dir);
  const bool same = csv[0] == csv[1] && csv[1] == csv[2] && !csv[0].empty();
  return {same, std::string(same ? "identical" : "different") + " CSV bytes for workers 1, 4, 8 (" +
                    std::to_string(csv[0].size()) + " bytes)"};
}

// ---------------------------------------------------------------------------
// 9. Information criteria against the applied table.

Verdict information_criteria_check() {
  // (K, AIC, BIC) per model, T = 730. The log-likelihood is recovered from AIC.
  struct Row {
    const char* name;
    std::size_t K;
    double aic, bic;
  };
  const Row rows[] = {{"M1", 5, 2379.546, 2402.511}, {"M2", 6, 2376.500, 2404.058}};
  bool ok = true;
  std::string detail;
  for (const Row& r : rows) {
    const double loglik = (2.0 * static_cast<double>(r.K) - r.aic) / 2.0;
    const InformationCriteria ic = information_criteria(loglik, r.K, 730);
    ok &= std::fabs(ic.aic - r.aic) < 5e-4 && std::fabs(ic.bic - r.bic) < 5e-4;
    detail += std::string(r.name) + ": loglik " + fmt("%.3f", loglik) + " -> AIC " + fmt("%.3f", ic.aic) +
              ", BIC " + fmt("%.3f", ic.bic) + "; ";
  }
  // The fit record must carry the same numbers.
  DgpSpec dgp = config::dgp_preset("arx1-cos");
  const SimulatedSeries sim = simulate_counts(dgp, 730);
  const FitResult fit = poisson_qmle(sim.series, dgp.link);
  const InformationCriteria own = information_criteria(fit.loglik, fit.n_params, fit.T);
  ok &= own.aic == fit.aic && own.bic == fit.bic && fit.n_params == 3;
  return {ok, detail + "fit record consistent"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else if (a == "--workers" && i + 1 < argc) {
      g_workers = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only 1,2,...] [--workers N]\n", argv[0]);
      return 2;
    }
  }
  g_workers = resolve_workers(g_workers);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"kernel closed form vs Gauss-Legendre", kernel_oracle},
      {"double sum vs defining integral", definitional_equivalence},
      {"empirical size under the null", size},
      {"power against NB(3) data", power_negbin},
      {"power against the sin alternative", power_sin},
      {"estimation consistency and gradient", estimation},
      {"uniformity of null p-values", uniformity},
      {"mc output independent of workers", determinism},
      {"information criteria", information_criteria_check},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d [%s]: %s - %s (%.1f s)\n", id, criteria[i].first, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), sec);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
