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
#include "countgof_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "countgof/bootstrap.hpp"
#include "countgof/datapipe.hpp"
#include "countgof/error.hpp"
#include "countgof/estimate.hpp"
#include "countgof/mcstudy.hpp"
#include "countgof/parallel.hpp"
#include "countgof/simulate.hpp"
#include "countgof/version.hpp"

namespace countgof::cli {
namespace {

using config::json;
using Clock = std::chrono::steady_clock;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string ordinal(std::size_t n) {
  const std::size_t h = n % 100;
  const char* suffix = "th";
  if (h < 11 || h > 13) {
    if (n % 10 == 1) suffix = "st";
    else if (n % 10 == 2) suffix = "nd";
    else if (n % 10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

void write_sidecar(const std::string& path, const RunManifest& m) {
  write_text(path + ".manifest.json", m.sidecar().dump(2) + "\n");
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Data loading shared by fit, test and analyze.

std::vector<ColumnSchema> infer_schema(const CovariateRecipe& r) {
  std::map<std::string, ColumnType> types;
  types[r.count_column] = ColumnType::Integer;
  if (r.date_column) types[*r.date_column] = ColumnType::Date;
  for (const auto& t : r.transforms) {
    ColumnType ty = ColumnType::Real;
    if (t.kind == TransformKind::Dummies) ty = ColumnType::Text;
    if (t.kind == TransformKind::WeekdayDummy) ty = ColumnType::Date;
    types.try_emplace(t.column, ty);
  }
  std::vector<ColumnSchema> out;
  for (const auto& [name, ty] : types) out.push_back({name, ty});
  return out;
}

// Identity recipe over the columns a model names directly.
CovariateRecipe direct_recipe(const ModelSpec& model, const std::string& count_column) {
  CovariateRecipe r;
  r.count_column = count_column;
  std::set<std::string> seen;
  for (const auto& [col, form] : model.covariates) {
    (void)form;
    if (!seen.insert(col).second) continue;
    CovariateTransform t;
    t.column = col;
    r.transforms.push_back(t);
  }
  return r;
}

struct RecipeFile {
  CovariateRecipe recipe;
  std::optional<std::vector<ColumnSchema>> schema;
};

// A recipe file is either a bare recipe or {"schema": [...], "recipe": {...}}.
RecipeFile read_recipe_file(const std::string& path) {
  const json j = config::load_file(path);
  RecipeFile rf;
  if (j.is_object() && j.contains("recipe")) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key != "recipe" && key != "schema") throw ConfigError(path + ": unknown key '" + key + "'");
    }
    rf.recipe = config::read_recipe(j.at("recipe"), "recipe");
    if (j.contains("schema")) rf.schema = config::read_schema(j.at("schema"), "schema");
  } else {
    rf.recipe = config::read_recipe(j, "recipe");
  }
  return rf;
}

PreparedData load_prepared(const std::string& data_path, const RecipeFile& rf) {
  const auto schema = rf.schema ? *rf.schema : infer_schema(rf.recipe);
  return apply_recipe(ingest_csv(data_path, schema), rf.recipe);
}

ModelSpec preset_model(const std::string& name) {
  const DgpSpec d = config::dgp_preset(name);
  ModelSpec m;
  m.name = name;
  m.p = d.link.p;
  m.q = d.link.q;
  for (std::size_t k = 0; k < d.link.exog.size(); ++k)
    m.covariates.emplace_back("x" + std::to_string(k + 1), d.link.exog[k].name());
  return m;
}

json model_json(const ModelSpec& m) {
  json j = config::to_json(m.family);
  j["name"] = m.name;
  j["p"] = m.p;
  j["q"] = m.q;
  j["covariates"] = json::array();
  for (const auto& [col, form] : m.covariates) j["covariates"].push_back({{"column", col}, {"transform", form}});
  return j;
}

CountDistribution family_flag(const std::string& name) {
  if (name == "poisson") return CountDistribution::poisson();
  if (name == "negbin") return CountDistribution::neg_binomial(1.0);
  throw ConfigError("--family: expected 'poisson' or 'negbin', got '" + name + "'");
}

struct ModelInput {
  std::string data;
  std::string model_path;
  std::string preset;
  std::string recipe_path;
  std::string count_column = "y";
  std::string family;

  void add_to(CLI::App* app) {
    app->add_option("--data", data, "CSV file with counts and covariates")->required();
    auto* m = app->add_option("--model", model_path, "model JSON (family, p, q, covariates)");
    auto* p = app->add_option("--preset", preset, "use a built-in model shape, e.g. arx1-cos");
    m->excludes(p);
    app->add_option("--recipe", recipe_path, "covariate recipe JSON applied to the data");
    app->add_option("--count-column", count_column, "count column when no recipe is given");
    app->add_option("--family", family, "override the model family: poisson or negbin");
  }

  ModelSpec model() const {
    ModelSpec m;
    if (!model_path.empty()) m = config::read_model(config::load_file(model_path), "model");
    else if (!preset.empty()) m = preset_model(preset);
    else throw ConfigError("one of --model or --preset is required");
    if (!family.empty()) m.family = family_flag(family);
    return m;
  }

  ModelData load(const ModelSpec& m) const {
    RecipeFile rf;
    if (!recipe_path.empty()) rf = read_recipe_file(recipe_path);
    else rf.recipe = direct_recipe(m, count_column);
    return select_model_data(load_prepared(data, rf), m);
  }

  json resolved(const ModelSpec& m) const {
    json j{{"data", data}, {"model", model_json(m)}};
    if (!recipe_path.empty()) j["recipe"] = config::load_file(recipe_path);
    else j["count_column"] = count_column;
    return j;
  }
};

std::string fit_summary(const std::string& name, const FitResult& f) {
  std::ostringstream os;
  os << "model " << name << ": T=" << f.T << " K=" << f.n_params << " loglik=" << g6(f.loglik)
     << " AIC=" << g6(f.aic) << " BIC=" << g6(f.bic)
     << (f.converged ? "" : " (not converged)") << "\n";
  os << "  omega=" << g6(f.theta.omega);
  for (std::size_t i = 0; i < f.theta.alpha.size(); ++i) os << " alpha" << i + 1 << "=" << g6(f.theta.alpha[i]);
  for (std::size_t i = 0; i < f.theta.beta.size(); ++i) os << " beta" << i + 1 << "=" << g6(f.theta.beta[i]);
  for (std::size_t i = 0; i < f.theta.exog.size(); ++i) os << " c" << i + 1 << "=" << g6(f.theta.exog[i]);
  if (f.theta.dispersion) os << " r=" << g6(*f.theta.dispersion);
  os << "\n";
  for (const auto& flag : f.flags) os << "  flag: " << flag << "\n";
  return os.str();
}

std::optional<std::size_t> parse_block_length(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos == s.size() && v >= 1) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError("--block-length: expected 'auto' or a positive integer, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config_path, preset, out;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  DgpSpec dgp;
  std::size_t T = 200;
  if (!a.config_path.empty()) {
    const json j = config::load_file(a.config_path);
    if (!j.is_object()) throw ConfigError(a.config_path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key != "dgp" && key != "T") throw ConfigError("simulate: unknown key '" + key + "'");
    }
    if (!j.contains("dgp")) throw ConfigError("simulate: missing 'dgp'");
    dgp = config::read_dgp(j.at("dgp"), "dgp");
    if (j.contains("T")) {
      if (!j.at("T").is_number_integer() || j.at("T").get<long long>() < 1)
        throw ConfigError("simulate.T: expected a positive integer");
      T = j.at("T").get<std::size_t>();
    }
  } else if (!a.preset.empty()) {
    dgp = config::dgp_preset(a.preset);
  } else {
    throw ConfigError("one of --config or --preset is required");
  }
  if (a.T > 0) T = a.T;
  if (a.seed_opt->count() > 0) dgp.seed = a.seed;
  dgp.validate();
  const SimulatedSeries sim = simulate_counts(dgp, T);

  RunManifest man;
  man.subcommand = "simulate";
  man.config = {{"dgp", config::to_json(dgp)}, {"T", T}};
  man.seed = dgp.seed;
  std::ostringstream csv;
  csv << man.header() << "t,y";
  for (std::size_t k = 0; k < sim.series.m(); ++k) csv << ",x" << k + 1;
  csv << ",lambda\n";
  for (std::size_t t = 0; t < T; ++t) {
    csv << t + 1 << "," << sim.series.counts[t];
    for (std::size_t k = 0; k < sim.series.m(); ++k) csv << "," << g17(sim.series.covariates(t, k));
    csv << "," << g17(sim.lambda[t]) << "\n";
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    write_text(a.out, csv.str());
    man.wall_clock_seconds = seconds_since(t0);
    write_sidecar(a.out, man);
    out << "wrote " << T << " rows to " << a.out << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  ModelInput input;
  std::string out;
  std::uint64_t seed = 1;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const ModelSpec model = a.input.model();
  const ModelData md = a.input.load(model);
  FitOptions opts;
  opts.seed = a.seed;
  const FitResult fit = fit_model(md.series, md.link, model.family, opts);

  RunManifest man;
  man.subcommand = "fit";
  man.config = a.input.resolved(model);
  man.seed = a.seed;
  out << man.header() << fit_summary(model.name, fit);
  if (!a.out.empty()) {
    json report{{"manifest", man.sidecar()}, {"model", model.name}, {"fit", config::to_json(fit)}};
    report["manifest"].erase("wall_clock_seconds");
    report["manifest"].erase("workers");
    write_text(a.out, report.dump(2) + "\n");
    man.wall_clock_seconds = seconds_since(t0);
    write_sidecar(a.out, man);
  }
  return fit.converged ? kSuccess : kRuntimeFailure;
}

// ---------------------------------------------------------------------------
// test

struct TestArgs {
  ModelInput input;
  double rho = 0.0, gamma = 0.5, eta = 0.5, alpha = 0.05;
  std::string variant = "DeltaTW";
  int B = 499;
  std::string block_length = "auto";
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

int cmd_test(const TestArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  StatisticSpec spec;
  spec.variant = variant_from_name(a.variant);
  spec.tuning.rho = a.rho;
  spec.tuning.gamma = a.gamma;
  spec.tuning.eta = a.eta;
  spec.validate();
  BootstrapPlan plan;
  plan.B = a.B;
  plan.block_length = parse_block_length(a.block_length);
  plan.alpha = a.alpha;
  plan.seed = a.seed;
  plan.workers = resolve_workers(a.workers);
  plan.validate();

  const ModelSpec model = a.input.model();
  const ModelData md = a.input.load(model);
  plan.covariate_policy = md.policy;
  FitOptions opts;
  opts.seed = a.seed;
  const std::vector<StatisticSpec> specs{spec};
  const BootstrapReport rep = bootstrap_test(md.series, md.link, model.family, specs, plan, opts);
  const GofResult& g = rep.results.front();
  const std::size_t b_eff = g.replicates->size();

  RunManifest man;
  man.subcommand = "test";
  man.config = a.input.resolved(model);
  man.config["statistic"] = {{"variant", variant_name(spec.variant)}, {"tuning", config::to_json(spec.tuning)}};
  man.config["bootstrap"] = {{"B", a.B},
                             {"block_length", plan.block_length ? json(*plan.block_length) : json("auto")},
                             {"alpha", a.alpha}};
  man.seed = a.seed;
  man.workers = plan.workers;

  std::ostringstream os;
  os << man.header() << fit_summary(model.name, rep.fit);
  os << "statistic " << g.label << " = " << g6(g.statistic) << "\n";
  os << "p-value = " << g6(g.p_value.value_or(NAN)) << " (B = " << b_eff;
  if (rep.dropped > 0) os << ", " << rep.dropped << " of " << rep.requested << " replicates dropped";
  os << ")\n";
  if (b_eff > 0) {
    const std::size_t k = rejection_order_index(b_eff, a.alpha);
    os << "decision at alpha = " << g6(a.alpha) << ": " << (*g.reject ? "reject" : "do not reject")
       << " the null model (statistic " << (*g.reject ? ">" : "<=") << " " << ordinal(k)
       << " order statistic of " << b_eff << " bootstrap replicates)\n";
  }
  out << os.str();
  if (!a.out.empty()) {
    std::ostringstream csv;
    csv << man.header() << "statistic,value,p_value,B,dropped,reject\n";
    csv << g.label << "," << g17(g.statistic) << "," << g17(g.p_value.value_or(NAN)) << "," << b_eff
        << "," << rep.dropped << "," << (g.reject.value_or(false) ? 1 : 0) << "\n";
    write_text(a.out, csv.str());
    man.wall_clock_seconds = seconds_since(t0);
    write_sidecar(a.out, man);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// mc

struct McArgs {
  std::string config_path, out;
  int workers = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  bool p_values = false;
};

std::string p_value_csv(const ExperimentResult& r, const std::string& header) {
  std::ostringstream os;
  os << header << "T,statistic,replicate,p_value\n";
  for (std::size_t i = 0; i < r.table.T.size(); ++i)
    for (std::size_t c = 0; c < r.table.columns.size(); ++c)
      for (std::size_t m = 0; m < r.p_values[i][c].size(); ++m)
        os << r.table.T[i] << "," << r.table.columns[c] << "," << m + 1 << ","
           << (std::isfinite(r.p_values[i][c][m]) ? g17(r.p_values[i][c][m]) : "nan") << "\n";
  return os.str();
}

int cmd_mc(const McArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  ExperimentDesign d = config::read_experiment(config::load_file(a.config_path));
  if (a.seed_opt->count() > 0) d.seed = a.seed;
  const int workers = resolve_workers(a.workers);
  const ExperimentResult r = run_experiment(d, workers);

  RunManifest man;
  man.subcommand = "mc";
  man.config = config::to_json(d);
  man.seed = d.seed;
  man.workers = workers;
  const std::string text = man.header() + emit_table(r.table, TableFormat::AlignedText);
  out << text;
  if (!a.out.empty()) {
    std::vector<std::string> comments;
    std::istringstream hs(man.header());
    for (std::string line; std::getline(hs, line);) comments.push_back(line.substr(2));
    write_text(a.out + ".csv", emit_table(r.table, TableFormat::Csv, comments));
    write_text(a.out + ".txt", text);
    if (a.p_values) write_text(a.out + ".pvalues.csv", p_value_csv(r, man.header()));
    man.wall_clock_seconds = seconds_since(t0);
    write_sidecar(a.out, man);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string data, recipe_path, candidates_path, out;
  bool gof = false;
  int B = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  int workers = 0;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto t0 = Clock::now();
  const RecipeFile rf = read_recipe_file(a.recipe_path);
  const json cand = config::load_file(a.candidates_path);
  if (!cand.is_object() || !cand.contains("models"))
    throw ConfigError(a.candidates_path + ": expected an object with 'models'");
  for (const auto& [key, value] : cand.items()) {
    (void)value;
    if (key != "models" && key != "gof" && key != "fit")
      throw ConfigError("candidates: unknown key '" + key + "'");
  }
  const json& ms = cand.at("models");
  if (!ms.is_array() || ms.empty()) throw ConfigError("candidates.models: expected a non-empty list");
  std::vector<ModelSpec> models;
  for (std::size_t i = 0; i < ms.size(); ++i)
    models.push_back(config::read_model(ms[i], "models[" + std::to_string(i) + "]"));
  FitOptions fit_opts;
  if (cand.contains("fit")) fit_opts = config::read_fit_options(cand.at("fit"), "fit");

  const PreparedData data = load_prepared(a.data, rf);
  const std::vector<ComparisonRow> rows = compare_models(data, models, fit_opts);

  RunManifest man;
  man.subcommand = "analyze";
  man.config = {{"data", a.data}, {"recipe", config::load_file(a.recipe_path)}, {"candidates", cand}};
  man.seed = 1;

  std::optional<GofTable> gof;
  std::string gof_model;
  if (a.gof) {
    const json g = cand.contains("gof") ? cand.at("gof") : json::object();
    if (!g.is_object()) throw ConfigError("candidates.gof: expected an object");
    for (const auto& [key, value] : g.items()) {
      (void)value;
      if (key != "model" && key != "tunings" && key != "block_lengths" && key != "bootstrap")
        throw ConfigError("candidates.gof: unknown key '" + key + "'");
    }
    gof_model = g.contains("model") ? g.at("model").get<std::string>() : rows.front().name;
    const auto it = std::find_if(models.begin(), models.end(),
                                 [&](const ModelSpec& m) { return m.name == gof_model; });
    if (it == models.end()) throw ConfigError("candidates.gof.model: unknown model '" + gof_model + "'");
    std::vector<TestTuning> tunings = config::standard_tuning_grid();
    if (g.contains("tunings") && g.at("tunings").is_array()) {
      tunings.clear();
      for (std::size_t i = 0; i < g.at("tunings").size(); ++i)
        tunings.push_back(config::read_tuning(g.at("tunings")[i], "gof.tunings[" + std::to_string(i) + "]"));
    }
    std::vector<std::size_t> ls;
    if (g.contains("block_lengths")) {
      for (const auto& v : g.at("block_lengths")) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
          throw ConfigError("candidates.gof.block_lengths: expected positive integers");
        ls.push_back(v.get<std::size_t>());
      }
    } else {
      ls.push_back(BootstrapPlan{}.resolved_block_length(data.series.size()));
    }
    BootstrapPlan plan = g.contains("bootstrap") ? config::read_bootstrap(g.at("bootstrap"), "gof.bootstrap")
                                                 : BootstrapPlan{};
    if (a.B > 0) plan.B = a.B;
    if (a.seed_opt->count() > 0) plan.seed = a.seed;
    plan.workers = resolve_workers(a.workers);
    man.seed = plan.seed;
    man.workers = plan.workers;
    man.config["resolved_gof"] = {{"model", gof_model}, {"B", plan.B}, {"seed", plan.seed}};
    gof = applied_gof(data, *it, tunings, ls, plan, fit_opts);
  }

  std::string text = man.header() + emit_comparison(rows, false);
  if (gof) {
    text += "\ngoodness of fit for " + gof_model + " (bootstrap p-values by block length)\n";
    text += emit_gof_table(*gof, false);
  }
  out << text;
  if (!a.out.empty()) {
    write_text(a.out + ".txt", text);
    write_text(a.out + ".models.csv", man.header() + emit_comparison(rows, true));
    if (gof) write_text(a.out + ".gof.csv", man.header() + emit_gof_table(*gof, true));
    man.wall_clock_seconds = seconds_since(t0);
    write_sidecar(a.out, man);
  }
  return kSuccess;
}

}  // namespace

std::string RunManifest::header() const {
  std::string h = "# countgof " + (version.empty() ? std::string(kVersion) : version) + "\n";
  h += "# subcommand: " + subcommand + "\n";
  h += "# seed: " + std::to_string(seed) + "\n";
  h += "# config: " + config.dump() + "\n";
  return h;
}

json RunManifest::sidecar() const {
  return {{"tool", "countgof"},
          {"version", version.empty() ? std::string(kVersion) : version},
          {"subcommand", subcommand},
          {"seed", seed},
          {"config", config},
          {"wall_clock_seconds", wall_clock_seconds},
          {"workers", workers}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goodness-of-fit testing for count time series with covariates", "countgof"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "simulate a count series from a data-generating process");
  auto* sc = s->add_option("--config", sim.config_path, "JSON with 'dgp' and optional 'T'");
  auto* sp = s->add_option("--preset", sim.preset, "built-in process, e.g. arx1-cos");
  sc->excludes(sp);
  s->add_option("--T", sim.T, "series length (overrides the config)");
  sim.seed_opt = s->add_option("--seed", sim.seed, "seed (overrides the config)");
  s->add_option("--out", sim.out, "output CSV (default: stdout)");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit a model by (quasi-)maximum likelihood");
  fit.input.add_to(f);
  f->add_option("--seed", fit.seed, "seed for random starting points");
  f->add_option("--out", fit.out, "JSON report");

  TestArgs test;
  auto* t = app.add_subcommand("test", "bootstrap goodness-of-fit test of a fitted model");
  test.input.add_to(t);
  t->add_option("--variant", test.variant, "DeltaTW, Delta0 or Delta1")->capture_default_str();
  t->add_option("--rho", test.rho, "u-weight exponent")->capture_default_str();
  t->add_option("--gamma", test.gamma, "kernel scale")->capture_default_str();
  t->add_option("--eta", test.eta, "kernel exponent in (0, 2]")->capture_default_str();
  t->add_option("--B", test.B, "bootstrap replicates")->capture_default_str();
  t->add_option("--block-length", test.block_length, "covariate block length or 'auto'")
      ->capture_default_str();
  t->add_option("--alpha", test.alpha, "test level")->capture_default_str();
  t->add_option("--seed", test.seed, "bootstrap seed")->capture_default_str();
  t->add_option("--workers", test.workers, "worker threads (0 = all cores)");
  t->add_option("--out", test.out, "result CSV");

  McArgs mc;
  auto* m = app.add_subcommand("mc", "run a Monte-Carlo size/power experiment");
  m->add_option("--config", mc.config_path, "experiment JSON")->required();
  m->add_option("--workers", mc.workers, "worker threads (0 = all cores)");
  mc.seed_opt = m->add_option("--seed", mc.seed, "master seed (overrides the config)");
  m->add_option("--out", mc.out, "output prefix for .csv, .txt and .manifest.json");
  m->add_flag("--p-values", mc.p_values, "also write per-replicate p-values");

  AnalyzeArgs an;
  auto* z = app.add_subcommand("analyze", "compare candidate models on a dataset and test the chosen one");
  z->add_option("--data", an.data, "CSV dataset")->required();
  z->add_option("--recipe", an.recipe_path, "covariate recipe JSON")->required();
  z->add_option("--candidates", an.candidates_path, "candidate models JSON")->required();
  z->add_flag("--gof", an.gof, "add the bootstrap p-value table");
  z->add_option("--B", an.B, "bootstrap replicates (overrides the config)");
  an.seed_opt = z->add_option("--seed", an.seed, "bootstrap seed (overrides the config)");
  z->add_option("--workers", an.workers, "worker threads (0 = all cores)");
  z->add_option("--out", an.out, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim, out);
    if (f->parsed()) return cmd_fit(fit, out);
    if (t->parsed()) return cmd_test(test, out);
    if (m->parsed()) return cmd_mc(mc, out);
    if (z->parsed()) return cmd_analyze(an, out);
  } catch (const ConstraintError& e) {
    err << "error: constraint violated: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const StatisticalFailure& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsageError;
}

}  // namespace countgof::cli
