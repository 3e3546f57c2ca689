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

#include "countgof/datapipe.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "countgof/error.hpp"

namespace countgof {
namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
  bool comment = false;
};

// Reads one RFC-4180 record; returns false at end of input.
bool read_record(std::istream& in, std::size_t& line_no, Record& rec, const std::string& source) {
  rec.fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  ++line_no;
  rec.line = line_no;
  rec.comment = c == '#';
  if (rec.comment) {
    std::string rest;
    std::getline(in, rest);
    rec.fields.push_back("#" + rest);
    return true;
  }
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (;; c = in.get()) {
    if (quoted) {
      if (c == EOF)
        throw ConfigError(source + ":" + std::to_string(rec.line) + ": unterminated quoted field");
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field += static_cast<char>(c);
      }
      continue;
    }
    if (c == EOF || c == '\n') {
      if (!field.empty() && field.back() == '\r' && !was_quoted) field.pop_back();
      rec.fields.push_back(std::move(field));
      return true;
    }
    if (c == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == '\r' && in.peek() == '\n') {
      // CRLF line ending
    } else {
      if (was_quoted)
        throw ConfigError(source + ":" + std::to_string(line_no) +
                          ": characters after closing quote");
      field += static_cast<char>(c);
    }
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

bool parse_integer(const std::string& s, double& out) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) return false;
  out = static_cast<double>(v);
  return true;
}

std::optional<std::chrono::sys_days> parse_date(const std::string& s) {
  const std::string t = trim(s);
  int y = 0;
  unsigned mo = 0, d = 0;
  char tail = 0;
  if (t.size() != 10 || std::sscanf(t.c_str(), "%4d-%2u-%2u%c", &y, &mo, &d, &tail) != 3)
    return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

std::string type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Integer: return "integer";
    case ColumnType::Real: return "real";
    case ColumnType::Text: return "text";
    case ColumnType::Date: return "date";
  }
  return "?";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

bool RawTable::has(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t RawTable::index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ConfigError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

ColumnType RawTable::type(const std::string& name) const { return types_[index(name)]; }

const std::vector<double>& RawTable::numeric(const std::string& name) const {
  const std::size_t i = index(name);
  if (types_[i] != ColumnType::Integer && types_[i] != ColumnType::Real)
    throw ConfigError("column '" + name + "' is not numeric");
  return numeric_[i];
}

const std::vector<std::string>& RawTable::text(const std::string& name) const {
  return text_[index(name)];
}

void RawTable::add_column(std::string name, ColumnType type, std::vector<std::string> text,
                          std::vector<double> numeric) {
  if (!names_.empty() && text.size() != rows_)
    throw ConstraintError("equal column lengths", "column '" + name + "' has " +
                                                      std::to_string(text.size()) + " rows");
  rows_ = text.size();
  names_.push_back(std::move(name));
  types_.push_back(type);
  text_.push_back(std::move(text));
  numeric_.push_back(std::move(numeric));
}

RawTable parse_csv(std::istream& in, std::span<const ColumnSchema> schema,
                   const std::string& source) {
  std::size_t line_no = 0;
  Record rec;
  bool got_header = false;
  while (read_record(in, line_no, rec, source)) {
    if (rec.comment || (rec.fields.size() == 1 && rec.fields[0].empty())) continue;
    got_header = true;
    break;
  }
  if (!got_header) throw ConfigError(source + ": empty file, header row required");
  std::vector<std::string> header;
  for (auto& f : rec.fields) header.push_back(trim(f));

  std::vector<ColumnSchema> cols(schema.begin(), schema.end());
  if (cols.empty())
    for (const auto& h : header) cols.push_back({h, ColumnType::Text});
  std::vector<std::size_t> pos;
  for (const auto& c : cols) {
    const auto it = std::find(header.begin(), header.end(), c.name);
    if (it == header.end())
      throw ConfigError(source + ":" + std::to_string(rec.line) + ": missing column '" + c.name + "'");
    pos.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  std::vector<std::vector<std::string>> text(cols.size());
  std::vector<std::vector<double>> numeric(cols.size());
  while (read_record(in, line_no, rec, source)) {
    if (rec.comment || (rec.fields.size() == 1 && rec.fields[0].empty())) continue;
    if (rec.fields.size() != header.size())
      throw ConfigError(source + ":" + std::to_string(rec.line) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(rec.fields.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const std::string& cell = rec.fields[pos[j]];
      double v = 0.0;
      bool ok = true;
      switch (cols[j].type) {
        case ColumnType::Integer: ok = parse_integer(cell, v); break;
        case ColumnType::Real: ok = parse_real(cell, v); break;
        case ColumnType::Date: {
          const auto d = parse_date(cell);
          ok = d.has_value();
          if (ok) v = static_cast<double>(d->time_since_epoch().count());
          break;
        }
        case ColumnType::Text: break;
      }
      if (!ok)
        throw ConfigError(source + ":" + std::to_string(rec.line) + ": column '" + cols[j].name +
                          "': cannot parse '" + cell + "' as " + type_name(cols[j].type));
      text[j].push_back(cols[j].type == ColumnType::Text ? cell : trim(cell));
      numeric[j].push_back(v);
    }
  }
  RawTable table;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    table.add_column(cols[j].name, cols[j].type, std::move(text[j]), std::move(numeric[j]));
  }
  return table;
}

RawTable ingest_csv(const std::string& path, std::span<const ColumnSchema> schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_csv(in, schema, path);
}

int weekday_of(const std::string& iso_date) {
  const auto d = parse_date(iso_date);
  if (!d) throw ConfigError("invalid date '" + iso_date + "'");
  return static_cast<int>(std::chrono::weekday{*d}.iso_encoding()) - 1;
}

PreparedData apply_recipe(const RawTable& raw, const CovariateRecipe& recipe) {
  const std::size_t T = raw.rows();
  PreparedData out;
  CountSeries& s = out.series;
  const auto& yc = raw.numeric(recipe.count_column);
  s.counts.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    if (yc[t] < 0.0 || yc[t] != std::floor(yc[t]))
      throw ConstraintError("counts are nonnegative integers",
                            "row " + std::to_string(t + 1) + " has " + fmt(yc[t]));
    s.counts[t] = static_cast<std::int64_t>(yc[t]);
  }
  if (recipe.date_column) s.timestamps = raw.text(*recipe.date_column);

  std::vector<std::vector<double>> columns;
  auto emit = [&](std::string name, std::vector<double> v, const CovariateTransform& tr) {
    s.covariate_names.push_back(std::move(name));
    columns.push_back(std::move(v));
    out.policy.push_back(tr.policy);
    out.lags.push_back(tr.lag);
  };
  for (const CovariateTransform& tr : recipe.transforms) {
    if (tr.lag != 0 && tr.lag != 1)
      throw ConstraintError("covariate lag in {0,1}", "got " + std::to_string(tr.lag));
    const std::string base = tr.name.empty() ? tr.column : tr.name;
    switch (tr.kind) {
      case TransformKind::Identity:
      case TransformKind::Affine:
      case TransformKind::IndicatorGreater:
      case TransformKind::IndicatorWindow: {
        const auto& x = raw.numeric(tr.column);
        std::vector<double> v(T);
        for (std::size_t t = 0; t < T; ++t) {
          switch (tr.kind) {
            case TransformKind::Identity: v[t] = x[t]; break;
            case TransformKind::Affine: v[t] = tr.a + tr.b * x[t]; break;
            case TransformKind::IndicatorGreater: v[t] = x[t] > tr.threshold ? 1.0 : 0.0; break;
            default:
              v[t] = std::fabs(x[t] - tr.center) < tr.halfwidth ? tr.scale : 0.0;
              break;
          }
        }
        emit(base, std::move(v), tr);
        break;
      }
      case TransformKind::SplitLinear: {
        const auto& x = raw.numeric(tr.column);
        std::vector<double> lo(T), hi(T);
        for (std::size_t t = 0; t < T; ++t) {
          lo[t] = x[t] < tr.threshold ? tr.a + tr.b * x[t] : 0.0;
          hi[t] = x[t] >= tr.threshold ? tr.a2 + tr.b2 * x[t] : 0.0;
        }
        emit(base + "_lo", std::move(lo), tr);
        emit(base + "_hi", std::move(hi), tr);
        break;
      }
      case TransformKind::Bins: {
        if (tr.bins.empty()) throw ConfigError("bins transform on '" + tr.column + "' has no bins");
        const auto& x = raw.numeric(tr.column);
        for (const auto& [lo, hi] : tr.bins) {
          if (!(lo < hi)) throw ConfigError("bin (" + fmt(lo) + ", " + fmt(hi) + "] is empty");
          std::vector<double> v(T);
          for (std::size_t t = 0; t < T; ++t) v[t] = (x[t] > lo && x[t] <= hi) ? 1.0 : 0.0;
          emit(base + "_(" + fmt(lo) + "," + fmt(hi) + "]", std::move(v), tr);
        }
        break;
      }
      case TransformKind::Dummies: {
        if (tr.levels.empty()) throw ConfigError("dummies transform on '" + tr.column + "' has no levels");
        const auto& x = raw.text(tr.column);
        for (const auto& level : tr.levels) {
          std::vector<double> v(T);
          for (std::size_t t = 0; t < T; ++t) v[t] = x[t] == level ? 1.0 : 0.0;
          emit(base + "_" + level, std::move(v), tr);
        }
        break;
      }
      case TransformKind::WeekdayDummy: {
        if (tr.weekdays.empty()) throw ConfigError("weekday transform has no weekdays");
        const auto& x = raw.text(tr.column);
        std::vector<int> wd(T);
        for (std::size_t t = 0; t < T; ++t) wd[t] = weekday_of(x[t]);
        for (int d : tr.weekdays)
          if (d < 0 || d > 6) throw ConfigError("weekday must be in 0..6, got " + std::to_string(d));
        if (tr.combine) {
          std::vector<double> v(T);
          for (std::size_t t = 0; t < T; ++t)
            v[t] = std::find(tr.weekdays.begin(), tr.weekdays.end(), wd[t]) != tr.weekdays.end();
          emit(base, std::move(v), tr);
        } else {
          for (int d : tr.weekdays) {
            std::vector<double> v(T);
            for (std::size_t t = 0; t < T; ++t) v[t] = wd[t] == d ? 1.0 : 0.0;
            emit(base + "_" + std::to_string(d), std::move(v), tr);
          }
        }
        break;
      }
    }
  }
  s.covariates = Matrix(T, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) s.covariates.set_column(k, columns[k]);
  return out;
}

ModelData select_model_data(const PreparedData& data, const ModelSpec& model) {
  ModelData md;
  md.link.p = model.p;
  md.link.q = model.q;
  const auto& names = data.series.covariate_names;
  const std::size_t T = data.series.size();
  md.series.counts = data.series.counts;
  md.series.timestamps = data.series.timestamps;
  md.series.covariates = Matrix(T, model.covariates.size());
  for (std::size_t k = 0; k < model.covariates.size(); ++k) {
    const auto& [col, form] = model.covariates[k];
    const auto it = std::find(names.begin(), names.end(), col);
    if (it == names.end())
      throw ConfigError("model '" + model.name + "': unknown covariate '" + col + "'");
    const auto j = static_cast<std::size_t>(it - names.begin());
    md.series.covariates.set_column(k, data.series.covariates.column(j));
    md.series.covariate_names.push_back(col);
    md.link.exog.push_back(ExogTransform::from_name(form));
    md.link.exog_lag.push_back(data.lags.empty() ? 1 : data.lags[j]);
    md.policy.push_back(data.policy.empty() ? CovariatePolicy::Block : data.policy[j]);
  }
  md.link.validate();
  return md;
}

std::vector<ComparisonRow> compare_models(const PreparedData& data,
                                          std::span<const ModelSpec> candidates,
                                          const FitOptions& options) {
  if (candidates.empty()) throw ConfigError("compare_models: no candidate models");
  std::vector<ComparisonRow> rows;
  for (const ModelSpec& m : candidates) {
    const ModelData md = select_model_data(data, m);
    rows.push_back({m.name, fit_model(md.series, md.link, m.family, options)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& x, const ComparisonRow& y) {
    if (x.fit.converged != y.fit.converged) return x.fit.converged;
    if (x.fit.aic != y.fit.aic) return x.fit.aic < y.fit.aic;
    if (x.fit.bic != y.fit.bic) return x.fit.bic < y.fit.bic;
    return x.fit.n_params < y.fit.n_params;
  });
  return rows;
}

std::string emit_comparison(std::span<const ComparisonRow> rows, bool csv) {
  std::ostringstream os;
  char buf[256];
  if (csv) {
    os << "model,K,loglik,aic,bic,converged,flags\n";
    for (const auto& r : rows) {
      std::string flags;
      for (const auto& f : r.fit.flags) flags += (flags.empty() ? "" : ";") + f;
      std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%d,", r.fit.n_params, r.fit.loglik,
                    r.fit.aic, r.fit.bic, r.fit.converged ? 1 : 0);
      os << r.name << ',' << buf << flags << '\n';
    }
    return os.str();
  }
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  std::snprintf(buf, sizeof buf, "%-*s %3s %12s %12s %12s  %s\n", static_cast<int>(w), "model", "K",
                "loglik", "AIC", "BIC", "note");
  os << buf;
  for (const auto& r : rows) {
    std::string note = r.fit.converged ? "" : "not converged";
    for (const auto& f : r.fit.flags)
      if (f != "not_converged") note += (note.empty() ? "" : ", ") + f;
    std::snprintf(buf, sizeof buf, "%-*s %3zu %12.3f %12.3f %12.3f", static_cast<int>(w),
                  r.name.c_str(), r.fit.n_params, r.fit.loglik, r.fit.aic, r.fit.bic);
    os << buf << (note.empty() ? "" : "  " + note) << '\n';
  }
  return os.str();
}

GofTable applied_gof(const PreparedData& data, const ModelSpec& model,
                     std::span<const TestTuning> tunings,
                     std::span<const std::size_t> block_lengths, const BootstrapPlan& plan,
                     const FitOptions& options) {
  if (tunings.empty()) throw ConfigError("applied_gof: empty tuning grid");
  if (block_lengths.empty()) throw ConfigError("applied_gof: no block lengths");
  const ModelData md = select_model_data(data, model);
  const FitResult fit = fit_model(md.series, md.link, model.family, options);
  std::vector<StatisticSpec> specs;
  for (const TestTuning& t : tunings) {
    StatisticSpec s;
    s.tuning = t;
    specs.push_back(s);
  }
  GofTable table;
  for (const auto& s : specs) table.tunings.push_back(s.tuning.label());
  table.block_lengths.assign(block_lengths.begin(), block_lengths.end());
  table.p_values.assign(specs.size(), std::vector<double>(block_lengths.size()));
  for (std::size_t j = 0; j < block_lengths.size(); ++j) {
    BootstrapPlan bp = plan;
    bp.block_length = block_lengths[j];
    bp.covariate_policy = md.policy;
    bp.seed = derive_seed(plan.seed, {block_lengths[j]});
    const BootstrapReport rep = bootstrap_test(md.series, md.link, fit, specs, bp, options);
    table.dropped += rep.dropped;
    if (j == 0)
      for (const auto& g : rep.results) table.statistics.push_back(g.statistic);
    for (std::size_t i = 0; i < specs.size(); ++i)
      table.p_values[i][j] = rep.results[i].p_value.value_or(1.0);
  }
  return table;
}

std::string emit_gof_table(const GofTable& table, bool csv) {
  std::ostringstream os;
  char buf[128];
  if (csv) {
    os << "tuning,statistic";
    for (auto l : table.block_lengths) os << ",p_l" << l;
    os << '\n';
    for (std::size_t i = 0; i < table.tunings.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.10g", table.statistics[i]);
      os << table.tunings[i] << ',' << buf;
      for (double p : table.p_values[i]) {
        std::snprintf(buf, sizeof buf, ",%.6g", p);
        os << buf;
      }
      os << '\n';
    }
    return os.str();
  }
  std::size_t w = 6;
  for (const auto& t : table.tunings) w = std::max(w, t.size());
  std::snprintf(buf, sizeof buf, "%-*s %12s", static_cast<int>(w), "tuning", "statistic");
  os << buf;
  for (auto l : table.block_lengths) {
    std::snprintf(buf, sizeof buf, " %8s", ("l=" + std::to_string(l)).c_str());
    os << buf;
  }
  os << '\n';
  for (std::size_t i = 0; i < table.tunings.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-*s %12.5g", static_cast<int>(w), table.tunings[i].c_str(),
                  table.statistics[i]);
    os << buf;
    for (double p : table.p_values[i]) {
      std::snprintf(buf, sizeof buf, " %8.3f", p);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace countgof
