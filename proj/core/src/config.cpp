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

#include "countgof/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "countgof/error.hpp"

namespace countgof::config {
namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

long long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<long long>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where + ": expected true or false");
  return j.get<bool>();
}

std::vector<double> num_list(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(where + ": expected a list of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

double opt_num(const json& j, const char* key, const std::string& where, double def) {
  return j.contains(key) ? num(j.at(key), where + "." + key) : def;
}

int opt_int(const json& j, const char* key, const std::string& where, int def) {
  return j.contains(key) ? static_cast<int>(integer(j.at(key), where + "." + key)) : def;
}

std::uint64_t read_seed(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::uint64_t>(j.get<long long>());
  throw ConfigError(where + ": seed must be a nonnegative integer");
}

CovariatePolicy read_policy(const json& j, const std::string& where) {
  const std::string s = str(j, where);
  if (s == "block") return CovariatePolicy::Block;
  if (s == "fixed") return CovariatePolicy::Fixed;
  throw ConfigError(where + ": policy must be 'block' or 'fixed'");
}

// Wraps domain-level validation failures with the key path.
template <class F>
void validated(const std::string& where, F&& f) {
  try {
    f();
  } catch (const ConstraintError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

CountDistribution read_distribution(const json& j, const std::string& where) {
  require_object(j, where);
  const std::string fam = j.contains("family") ? str(j.at("family"), where + ".family") : "poisson";
  std::optional<double> shape;
  if (j.contains("shape")) shape = num(j.at("shape"), where + ".shape");
  try {
    return CountDistribution::from_name(fam, shape);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

LinkSpec read_link(const json& j, const std::string& where) {
  check_keys(j, where, {"p", "q", "exog"});
  LinkSpec link;
  link.p = opt_int(j, "p", where, 1);
  link.q = opt_int(j, "q", where, 0);
  if (j.contains("exog")) {
    const json& ex = j.at("exog");
    if (!ex.is_array()) throw ConfigError(where + ".exog: expected a list");
    bool any_lag = false;
    std::vector<int> lags;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const std::string w = where + ".exog[" + std::to_string(k) + "]";
      std::string form;
      int lag = 1;
      if (ex[k].is_string()) {
        form = ex[k].get<std::string>();
      } else {
        check_keys(ex[k], w, {"transform", "lag"});
        form = ex[k].contains("transform") ? str(ex[k].at("transform"), w + ".transform") : "linear";
        if (ex[k].contains("lag")) {
          lag = static_cast<int>(integer(ex[k].at("lag"), w + ".lag"));
          any_lag = true;
        }
      }
      try {
        link.exog.push_back(ExogTransform::from_name(form));
      } catch (const ConfigError& e) {
        throw ConfigError(w + ": " + e.what());
      }
      lags.push_back(lag);
    }
    if (any_lag) link.exog_lag = lags;
  }
  validated(where, [&] { link.validate(); });
  return link;
}

ParamVector read_params(const json& j, const std::string& where) {
  check_keys(j, where, {"omega", "alpha", "beta", "exog", "dispersion"});
  ParamVector th;
  if (!j.contains("omega")) throw ConfigError(where + ": missing 'omega'");
  th.omega = num(j.at("omega"), where + ".omega");
  if (j.contains("alpha")) th.alpha = num_list(j.at("alpha"), where + ".alpha");
  if (j.contains("beta")) th.beta = num_list(j.at("beta"), where + ".beta");
  if (j.contains("exog")) th.exog = num_list(j.at("exog"), where + ".exog");
  if (j.contains("dispersion")) th.dispersion = num(j.at("dispersion"), where + ".dispersion");
  return th;
}

ExogSpec read_exog(const json& j, const std::string& where) {
  check_keys(j, where, {"kind", "rho", "innovation_variance", "values"});
  const std::string kind = j.contains("kind") ? str(j.at("kind"), where + ".kind") : "ar1";
  ExogSpec e;
  if (kind == "ar1") {
    std::optional<double> var;
    if (j.contains("innovation_variance"))
      var = num(j.at("innovation_variance"), where + ".innovation_variance");
    e = ExogSpec::ar1(opt_num(j, "rho", where, 0.5), var);
  } else if (kind == "deterministic" || kind == "user") {
    if (!j.contains("values")) throw ConfigError(where + ": '" + kind + "' needs 'values'");
    auto v = num_list(j.at("values"), where + ".values");
    e = kind == "deterministic" ? ExogSpec::deterministic(std::move(v))
                                : ExogSpec::user_supplied(std::move(v));
  } else {
    throw ConfigError(where + ".kind: expected ar1, deterministic or user");
  }
  validated(where, [&] { e.validate(); });
  return e;
}

DgpSpec dgp_preset(const std::string& name) {
  DgpSpec d;
  d.link.p = 1;
  d.link.q = 0;
  d.link.exog = {ExogTransform::cos_plus_one()};
  d.theta.omega = 0.2;
  d.theta.alpha = {0.3};
  d.theta.exog = {0.5};
  d.exog = {ExogSpec::ar1(0.5)};
  if (name == "arx1-cos") return d;
  if (name == "garchx11-cos" || name == "garchx11-cos-persistent") {
    d.link.q = 1;
    d.theta.beta = {name == "garchx11-cos" ? 0.3 : 0.6};
    return d;
  }
  if (name == "arx2-cos") {
    d.link.p = 2;
    d.theta.alpha = {0.3, 0.6};
    return d;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

DgpSpec read_dgp(const json& j, const std::string& where) {
  check_keys(j, where,
             {"preset", "family", "shape", "transform", "link", "theta", "covariates", "burn_in", "seed"});
  DgpSpec d;
  if (j.contains("preset")) {
    d = dgp_preset(str(j.at("preset"), where + ".preset"));
  } else if (!j.contains("link") || !j.contains("theta")) {
    throw ConfigError(where + ": give either 'preset' or both 'link' and 'theta'");
  }
  if (j.contains("family") || j.contains("shape")) d.dist = read_distribution(j, where);
  if (j.contains("link")) d.link = read_link(j.at("link"), where + ".link");
  if (j.contains("transform")) {
    const std::string form = str(j.at("transform"), where + ".transform");
    for (auto& f : d.link.exog) f = ExogTransform::from_name(form);
  }
  if (j.contains("theta")) d.theta = read_params(j.at("theta"), where + ".theta");
  if (j.contains("covariates")) {
    const json& c = j.at("covariates");
    if (!c.is_array()) throw ConfigError(where + ".covariates: expected a list");
    d.exog.clear();
    for (std::size_t k = 0; k < c.size(); ++k)
      d.exog.push_back(read_exog(c[k], where + ".covariates[" + std::to_string(k) + "]"));
  }
  if (j.contains("burn_in")) {
    const long long b = integer(j.at("burn_in"), where + ".burn_in");
    if (b < 0) throw ConfigError(where + ".burn_in: must be >= 0");
    d.burn_in = static_cast<std::size_t>(b);
  }
  if (j.contains("seed")) d.seed = read_seed(j.at("seed"), where + ".seed");
  validated(where, [&] { d.validate(); });
  return d;
}

TestTuning read_tuning(const json& j, const std::string& where) {
  check_keys(j, where, {"rho", "gamma", "eta", "weight", "kappa", "kernel", "nodes"});
  TestTuning t;
  t.rho = opt_num(j, "rho", where, t.rho);
  t.gamma = opt_num(j, "gamma", where, t.gamma);
  t.eta = opt_num(j, "eta", where, t.eta);
  t.kappa = opt_num(j, "kappa", where, t.kappa);
  t.n_nodes = opt_int(j, "nodes", where, t.n_nodes);
  if (j.contains("weight")) {
    const std::string w = str(j.at("weight"), where + ".weight");
    if (w == "power") t.u_weight = UWeight::PowerRho;
    else if (w == "beta") t.u_weight = UWeight::Beta;
    else throw ConfigError(where + ".weight: expected 'power' or 'beta'");
  }
  if (j.contains("kernel")) {
    const std::string k = str(j.at("kernel"), where + ".kernel");
    if (k == "closed") t.kernel_eval = KernelEval::ClosedFormPoisson;
    else if (k == "quadrature") t.kernel_eval = KernelEval::QuadratureGeneral;
    else throw ConfigError(where + ".kernel: expected 'closed' or 'quadrature'");
  }
  validated(where, [&] { t.validate(); });
  return t;
}

FitOptions read_fit_options(const json& j, const std::string& where) {
  check_keys(j, where, {"max_iterations", "gradient_tolerance", "n_starts", "boundary_delta",
                        "seed", "max_dispersion"});
  FitOptions f;
  f.max_iterations = opt_int(j, "max_iterations", where, f.max_iterations);
  f.gradient_tolerance = opt_num(j, "gradient_tolerance", where, f.gradient_tolerance);
  f.n_starts = opt_int(j, "n_starts", where, f.n_starts);
  f.boundary_delta = opt_num(j, "boundary_delta", where, f.boundary_delta);
  f.max_dispersion = opt_num(j, "max_dispersion", where, f.max_dispersion);
  if (j.contains("seed")) f.seed = read_seed(j.at("seed"), where + ".seed");
  if (f.max_iterations < 1 || f.n_starts < 1 || !(f.gradient_tolerance > 0.0) ||
      !(f.boundary_delta > 0.0 && f.boundary_delta < 1.0) || !(f.max_dispersion > 0.0))
    throw ConfigError(where + ": fit options out of range");
  return f;
}

BootstrapPlan read_bootstrap(const json& j, const std::string& where) {
  check_keys(j, where, {"B", "block_length", "seed", "alpha", "max_drop_fraction", "policy"});
  BootstrapPlan p;
  p.B = opt_int(j, "B", where, p.B);
  if (j.contains("block_length") && !j.at("block_length").is_null()) {
    const json& bl = j.at("block_length");
    if (!(bl.is_string() && bl.get<std::string>() == "auto")) {
      const long long l = integer(bl, where + ".block_length");
      if (l < 1) throw ConfigError(where + ".block_length: must be >= 1");
      p.block_length = static_cast<std::size_t>(l);
    }
  }
  if (j.contains("seed")) p.seed = read_seed(j.at("seed"), where + ".seed");
  p.alpha = opt_num(j, "alpha", where, p.alpha);
  p.max_drop_fraction = opt_num(j, "max_drop_fraction", where, p.max_drop_fraction);
  if (j.contains("policy")) {
    const json& pol = j.at("policy");
    if (!pol.is_array()) throw ConfigError(where + ".policy: expected a list");
    for (std::size_t k = 0; k < pol.size(); ++k)
      p.covariate_policy.push_back(read_policy(pol[k], where + ".policy[" + std::to_string(k) + "]"));
  }
  validated(where, [&] { p.validate(); });
  return p;
}

std::vector<TestTuning> standard_tuning_grid() {
  const double pairs[][2] = {{0.25, 0.25}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 0.5},
                             {1.0, 1.0},   {1.0, 2.0}, {2.0, 2.0}};
  std::vector<TestTuning> out;
  for (const auto& pr : pairs) {
    TestTuning t;
    t.gamma = pr[0];
    t.eta = pr[1];
    out.push_back(t);
  }
  return out;
}

ExperimentDesign read_experiment(const json& j) {
  const std::string where = "experiment";
  check_keys(j, where, {"name", "null", "dgp", "T", "M", "B", "alpha", "tunings", "variants",
                        "delta0_form", "delta1_grid", "block_length", "seed", "fit"});
  ExperimentDesign d;
  if (j.contains("name")) d.name = str(j.at("name"), where + ".name");
  if (!j.contains("dgp")) throw ConfigError(where + ": missing 'dgp'");
  d.dgp = read_dgp(j.at("dgp"), where + ".dgp");
  if (j.contains("null")) {
    const json& n = j.at("null");
    const std::string w = where + ".null";
    check_keys(n, w, {"preset", "family", "shape", "link", "transform"});
    if (n.contains("preset")) {
      const DgpSpec pre = dgp_preset(str(n.at("preset"), w + ".preset"));
      d.null_link = pre.link;
    } else if (n.contains("link")) {
      d.null_link = read_link(n.at("link"), w + ".link");
    } else {
      throw ConfigError(w + ": give 'preset' or 'link'");
    }
    if (n.contains("transform")) {
      const std::string form = str(n.at("transform"), w + ".transform");
      for (auto& f : d.null_link.exog) f = ExogTransform::from_name(form);
    }
    d.null_dist = read_distribution(n, w);
  } else {
    d.null_link = d.dgp.link;
  }
  if (j.contains("T")) {
    d.T.clear();
    const json& t = j.at("T");
    const json arr = t.is_array() ? t : json::array({t});
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const long long v = integer(arr[i], where + ".T[" + std::to_string(i) + "]");
      if (v < 1) throw ConfigError(where + ".T: sample sizes must be positive");
      d.T.push_back(static_cast<std::size_t>(v));
    }
  }
  d.M = opt_int(j, "M", where, d.M);
  d.B = opt_int(j, "B", where, d.B);
  d.alpha = opt_num(j, "alpha", where, d.alpha);
  if (j.contains("tunings")) {
    const json& t = j.at("tunings");
    if (t.is_string() && t.get<std::string>() == "standard") {
      d.tunings = standard_tuning_grid();
    } else {
      if (!t.is_array()) throw ConfigError(where + ".tunings: expected a list or \"standard\"");
      for (std::size_t i = 0; i < t.size(); ++i)
        d.tunings.push_back(read_tuning(t[i], where + ".tunings[" + std::to_string(i) + "]"));
    }
  } else {
    d.tunings = standard_tuning_grid();
  }
  if (j.contains("variants")) {
    d.variants.clear();
    const json& v = j.at("variants");
    if (!v.is_array()) throw ConfigError(where + ".variants: expected a list");
    for (std::size_t i = 0; i < v.size(); ++i) {
      try {
        d.variants.push_back(variant_from_name(str(v[i], where + ".variants")));
      } catch (const ConfigError& e) {
        throw ConfigError(where + ".variants[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (j.contains("delta0_form")) {
    const std::string f = str(j.at("delta0_form"), where + ".delta0_form");
    if (f == "plain") d.delta0_form = Delta0Form::Plain;
    else if (f == "squared") d.delta0_form = Delta0Form::Squared;
    else throw ConfigError(where + ".delta0_form: expected 'plain' or 'squared'");
  }
  d.delta1_grid = opt_int(j, "delta1_grid", where, d.delta1_grid);
  if (j.contains("block_length") && !j.at("block_length").is_null() &&
      !(j.at("block_length").is_string() && j.at("block_length").get<std::string>() == "auto")) {
    const long long l = integer(j.at("block_length"), where + ".block_length");
    if (l < 1) throw ConfigError(where + ".block_length: must be >= 1");
    d.block_length = static_cast<std::size_t>(l);
  }
  if (j.contains("seed")) d.seed = read_seed(j.at("seed"), where + ".seed");
  if (j.contains("fit")) d.fit = read_fit_options(j.at("fit"), where + ".fit");
  validated(where, [&] { d.validate(); });
  return d;
}

std::vector<ColumnSchema> read_schema(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of columns");
  std::vector<ColumnSchema> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    check_keys(j[i], w, {"name", "type"});
    ColumnSchema c;
    c.name = str(j[i].at("name"), w + ".name");
    const std::string t = j[i].contains("type") ? str(j[i].at("type"), w + ".type") : "real";
    if (t == "integer") c.type = ColumnType::Integer;
    else if (t == "real") c.type = ColumnType::Real;
    else if (t == "text") c.type = ColumnType::Text;
    else if (t == "date") c.type = ColumnType::Date;
    else throw ConfigError(w + ".type: expected integer, real, text or date");
    out.push_back(c);
  }
  return out;
}

CovariateRecipe read_recipe(const json& j, const std::string& where) {
  check_keys(j, where, {"count", "date", "transforms"});
  CovariateRecipe r;
  if (j.contains("count")) r.count_column = str(j.at("count"), where + ".count");
  if (j.contains("date")) r.date_column = str(j.at("date"), where + ".date");
  if (!j.contains("transforms")) return r;
  const json& ts = j.at("transforms");
  if (!ts.is_array()) throw ConfigError(where + ".transforms: expected a list");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string w = where + ".transforms[" + std::to_string(i) + "]";
    const json& t = ts[i];
    check_keys(t, w, {"kind", "column", "name", "a", "b", "a2", "b2", "threshold", "center",
                      "halfwidth", "scale", "bins", "levels", "weekdays", "combine", "policy",
                      "lag"});
    CovariateTransform tr;
    if (!t.contains("kind")) throw ConfigError(w + ": missing 'kind'");
    if (!t.contains("column")) throw ConfigError(w + ": missing 'column'");
    const std::string kind = str(t.at("kind"), w + ".kind");
    if (kind == "identity") tr.kind = TransformKind::Identity;
    else if (kind == "affine") tr.kind = TransformKind::Affine;
    else if (kind == "indicator_gt") tr.kind = TransformKind::IndicatorGreater;
    else if (kind == "window") tr.kind = TransformKind::IndicatorWindow;
    else if (kind == "split_linear") tr.kind = TransformKind::SplitLinear;
    else if (kind == "bins") tr.kind = TransformKind::Bins;
    else if (kind == "dummies") tr.kind = TransformKind::Dummies;
    else if (kind == "weekday") tr.kind = TransformKind::WeekdayDummy;
    else throw ConfigError(w + ".kind: unknown transform '" + kind + "'");
    tr.column = str(t.at("column"), w + ".column");
    if (t.contains("name")) tr.name = str(t.at("name"), w + ".name");
    tr.a = opt_num(t, "a", w, tr.a);
    tr.b = opt_num(t, "b", w, tr.b);
    tr.a2 = opt_num(t, "a2", w, tr.a2);
    tr.b2 = opt_num(t, "b2", w, tr.b2);
    tr.threshold = opt_num(t, "threshold", w, tr.threshold);
    tr.center = opt_num(t, "center", w, tr.center);
    tr.halfwidth = opt_num(t, "halfwidth", w, tr.halfwidth);
    tr.scale = opt_num(t, "scale", w, tr.scale);
    if (t.contains("bins")) {
      const json& b = t.at("bins");
      if (!b.is_array()) throw ConfigError(w + ".bins: expected a list of [lo, hi] pairs");
      for (std::size_t k = 0; k < b.size(); ++k) {
        const auto pr = num_list(b[k], w + ".bins[" + std::to_string(k) + "]");
        if (pr.size() != 2) throw ConfigError(w + ".bins[" + std::to_string(k) + "]: expected [lo, hi]");
        tr.bins.emplace_back(pr[0], pr[1]);
      }
    }
    if (t.contains("levels")) {
      const json& l = t.at("levels");
      if (!l.is_array()) throw ConfigError(w + ".levels: expected a list");
      for (std::size_t k = 0; k < l.size(); ++k) tr.levels.push_back(str(l[k], w + ".levels"));
    }
    if (t.contains("weekdays")) {
      for (double d : num_list(t.at("weekdays"), w + ".weekdays")) tr.weekdays.push_back(static_cast<int>(d));
    }
    if (t.contains("combine")) tr.combine = boolean(t.at("combine"), w + ".combine");
    if (t.contains("policy")) tr.policy = read_policy(t.at("policy"), w + ".policy");
    tr.lag = opt_int(t, "lag", w, tr.lag);
    if (tr.lag != 0 && tr.lag != 1) throw ConfigError(w + ".lag: must be 0 or 1");
    r.transforms.push_back(std::move(tr));
  }
  return r;
}

ModelSpec read_model(const json& j, const std::string& where) {
  check_keys(j, where, {"name", "family", "shape", "p", "q", "covariates"});
  ModelSpec m;
  m.name = j.contains("name") ? str(j.at("name"), where + ".name") : where;
  m.family = read_distribution(j, where);
  m.p = opt_int(j, "p", where, m.p);
  m.q = opt_int(j, "q", where, m.q);
  if (j.contains("covariates")) {
    const json& c = j.at("covariates");
    if (!c.is_array()) throw ConfigError(where + ".covariates: expected a list");
    for (std::size_t k = 0; k < c.size(); ++k) {
      const std::string w = where + ".covariates[" + std::to_string(k) + "]";
      if (c[k].is_string()) {
        m.covariates.emplace_back(c[k].get<std::string>(), "linear");
      } else {
        check_keys(c[k], w, {"column", "transform"});
        m.covariates.emplace_back(str(c[k].at("column"), w + ".column"),
                                  c[k].contains("transform") ? str(c[k].at("transform"), w + ".transform")
                                                             : "linear");
      }
    }
  }
  if (m.p < 0 || m.q < 0) throw ConfigError(where + ": p and q must be >= 0");
  return m;
}

json to_json(const CountDistribution& d) {
  json j;
  switch (d.family()) {
    case Family::Poisson: j["family"] = "poisson"; break;
    case Family::NegBinomial:
      j["family"] = "negbin";
      j["shape"] = d.dispersion();
      break;
    case Family::ZeroInflatedPoisson:
      j["family"] = "zip";
      j["shape"] = d.zero_prob();
      break;
  }
  return j;
}

json to_json(const LinkSpec& link) {
  json j;
  j["p"] = link.p;
  j["q"] = link.q;
  j["exog"] = json::array();
  for (std::size_t k = 0; k < link.m(); ++k)
    j["exog"].push_back({{"transform", link.exog[k].name()}, {"lag", link.lag(k)}});
  return j;
}

json to_json(const ParamVector& th) {
  json j;
  j["omega"] = th.omega;
  j["alpha"] = th.alpha;
  j["beta"] = th.beta;
  j["exog"] = th.exog;
  if (th.dispersion) j["dispersion"] = *th.dispersion;
  return j;
}

json to_json(const ExogSpec& e) {
  json j;
  switch (e.kind) {
    case ExogKind::AR1:
      j["kind"] = "ar1";
      j["rho"] = e.rho;
      if (e.innovation_variance) j["innovation_variance"] = *e.innovation_variance;
      break;
    case ExogKind::Deterministic:
      j["kind"] = "deterministic";
      j["values"] = e.values;
      break;
    case ExogKind::UserSupplied:
      j["kind"] = "user";
      j["values"] = e.values;
      break;
  }
  return j;
}

json to_json(const DgpSpec& d) {
  json j = to_json(d.dist);
  j["link"] = to_json(d.link);
  j["theta"] = to_json(d.theta);
  j["covariates"] = json::array();
  for (const auto& e : d.exog) j["covariates"].push_back(to_json(e));
  j["burn_in"] = d.burn_in;
  j["seed"] = d.seed;
  return j;
}

json to_json(const TestTuning& t) {
  json j{{"rho", t.rho}, {"gamma", t.gamma}, {"eta", t.eta}};
  if (t.u_weight == UWeight::Beta) {
    j["weight"] = "beta";
    j["kappa"] = t.kappa;
  }
  if (t.kernel_eval == KernelEval::QuadratureGeneral) j["kernel"] = "quadrature";
  if (t.n_nodes != TestTuning{}.n_nodes) j["nodes"] = t.n_nodes;
  return j;
}

json to_json(const FitOptions& f) {
  return {{"max_iterations", f.max_iterations}, {"gradient_tolerance", f.gradient_tolerance},
          {"n_starts", f.n_starts},             {"boundary_delta", f.boundary_delta},
          {"seed", f.seed},                     {"max_dispersion", f.max_dispersion}};
}

json to_json(const ExperimentDesign& d) {
  json j;
  j["name"] = d.name;
  j["null"] = to_json(d.null_dist);
  j["null"]["link"] = to_json(d.null_link);
  j["dgp"] = to_json(d.dgp);
  j["dgp"].erase("seed");
  j["T"] = d.T;
  j["M"] = d.M;
  j["B"] = d.B;
  j["alpha"] = d.alpha;
  j["tunings"] = json::array();
  for (const auto& t : d.tunings) j["tunings"].push_back(to_json(t));
  j["variants"] = json::array();
  for (auto v : d.variants) j["variants"].push_back(variant_name(v));
  j["delta0_form"] = d.delta0_form == Delta0Form::Plain ? "plain" : "squared";
  j["delta1_grid"] = d.delta1_grid;
  j["block_length"] = d.block_length ? json(*d.block_length) : json("auto");
  j["seed"] = d.seed;
  j["fit"] = to_json(d.fit);
  return j;
}

json to_json(const FitResult& f) {
  json j;
  j["theta"] = to_json(f.theta);
  j["distribution"] = to_json(f.dist);
  j["loglik"] = f.loglik;
  j["aic"] = f.aic;
  j["bic"] = f.bic;
  j["K"] = f.n_params;
  j["T"] = f.T;
  j["converged"] = f.converged;
  j["iterations"] = f.iterations;
  j["gradient_norm"] = f.gradient_norm;
  j["flags"] = f.flags;
  return j;
}

json to_json(const GofResult& g, bool with_replicates) {
  json j;
  j["label"] = g.label;
  j["variant"] = variant_name(g.variant);
  j["tuning"] = to_json(g.tuning);
  j["statistic"] = g.statistic;
  if (g.p_value) j["p_value"] = *g.p_value;
  if (g.reject) j["reject"] = *g.reject;
  if (g.replicates) {
    j["B_effective"] = g.replicates->size();
    if (with_replicates) j["replicates"] = *g.replicates;
  }
  return j;
}

}  // namespace countgof::config
