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
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "countgof/datapipe.hpp"
#include "countgof/error.hpp"

namespace countgof {
namespace {

const std::string kDaily = std::string(COUNTGOF_FIXTURE_DIR) + "/daily_counts.csv";
const std::string kTiny = std::string(COUNTGOF_FIXTURE_DIR) + "/tiny.csv";

std::vector<ColumnSchema> daily_schema() {
  return {{"date", ColumnType::Date},
          {"count", ColumnType::Integer},
          {"AT", ColumnType::Real},
          {"P", ColumnType::Real}};
}

std::string error_of(const std::string& csv, std::span<const ColumnSchema> schema) {
  std::istringstream in(csv);
  try {
    parse_csv(in, schema, "mem.csv");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Csv, ReadsFixture) {
  const auto raw = ingest_csv(kDaily, daily_schema());
  EXPECT_EQ(raw.rows(), 730u);
  EXPECT_EQ(raw.text("date").front(), "2019-01-01");
  EXPECT_EQ(raw.text("date").back(), "2020-12-30");
  EXPECT_EQ(raw.numeric("count").front(), 4.0);
  EXPECT_EQ(raw.numeric("AT")[1], -1.5);
  EXPECT_EQ(raw.type("P"), ColumnType::Real);
  EXPECT_FALSE(raw.has("Q"));
}

TEST(Csv, QuotedFieldsAndCrlf) {
  const auto tiny = ingest_csv(kTiny, daily_schema());
  EXPECT_EQ(tiny.rows(), 3u);
  EXPECT_EQ(tiny.numeric("AT")[1], 2.0);
  std::istringstream in("name,v\r\n\"a, \"\"b\"\"\",1\r\nc,2\r\n");
  const std::vector<ColumnSchema> s{{"name", ColumnType::Text}, {"v", ColumnType::Integer}};
  const auto t = parse_csv(in, s);
  EXPECT_EQ(t.text("name")[0], "a, \"b\"");
  EXPECT_EQ(t.numeric("v")[1], 2.0);
}

TEST(Csv, ErrorsNameFileAndLine) {
  const std::vector<ColumnSchema> s{{"count", ColumnType::Integer}, {"AT", ColumnType::Real}};
  EXPECT_EQ(error_of("count,X\n1,2\n", s), "mem.csv:1: missing column 'AT'");
  EXPECT_EQ(error_of("count,AT\n1,2\n1.5,3\n", s),
            "mem.csv:3: column 'count': cannot parse '1.5' as integer");
  EXPECT_EQ(error_of("count,AT\n1,2,3\n", s), "mem.csv:2: expected 2 fields, found 3");
  EXPECT_EQ(error_of("", s), "mem.csv: empty file, header row required");
  const std::vector<ColumnSchema> d{{"date", ColumnType::Date}};
  EXPECT_NE(error_of("date\n2019-02-30\n", d).find("mem.csv:2:"), std::string::npos);
  EXPECT_THROW(ingest_csv("/nonexistent/file.csv", s), ConfigError);
}

TEST(Dates, Weekdays) {
  EXPECT_EQ(weekday_of("2019-01-01"), 1);
  EXPECT_EQ(weekday_of("2024-02-29"), 3);
  EXPECT_EQ(weekday_of("2026-10-19"), 0);
  EXPECT_THROW(weekday_of("2019-13-01"), ConfigError);
}

RawTable toy() {
  std::istringstream in(
      "date,count,x,s\n"
      "2019-01-05,1,-2,a\n"
      "2019-01-06,0,0.5,b\n"
      "2019-01-07,3,3,a\n"
      "2019-01-08,2,7,c\n");
  const std::vector<ColumnSchema> schema{{"date", ColumnType::Date},
                                         {"count", ColumnType::Integer},
                                         {"x", ColumnType::Real},
                                         {"s", ColumnType::Text}};
  return parse_csv(in, schema);
}

TEST(Recipe, Transforms) {
  const RawTable raw = toy();
  CovariateRecipe r;
  r.date_column = "date";
  CovariateTransform t;
  t.column = "x";
  t.kind = TransformKind::Affine;
  t.name = "aff";
  t.a = 1.0;
  t.b = 2.0;
  r.transforms.push_back(t);
  t = {};
  t.column = "x";
  t.kind = TransformKind::IndicatorGreater;
  t.name = "pos";
  r.transforms.push_back(t);
  t = {};
  t.column = "x";
  t.kind = TransformKind::IndicatorWindow;
  t.name = "win";
  t.center = 0.0;
  t.halfwidth = 2.0;
  t.scale = 3.0;
  r.transforms.push_back(t);
  t = {};
  t.column = "x";
  t.kind = TransformKind::SplitLinear;
  t.threshold = 1.0;
  t.a = 0.0;
  t.b = -1.0;
  t.a2 = 1.0;
  t.b2 = 0.5;
  r.transforms.push_back(t);
  t = {};
  t.column = "x";
  t.kind = TransformKind::Bins;
  t.bins = {{-5, 0}, {0, 5}};
  r.transforms.push_back(t);
  t = {};
  t.column = "s";
  t.kind = TransformKind::Dummies;
  t.levels = {"a", "c"};
  t.policy = CovariatePolicy::Fixed;
  r.transforms.push_back(t);
  t = {};
  t.column = "date";
  t.kind = TransformKind::WeekdayDummy;
  t.name = "weekend";
  t.weekdays = {5, 6};
  t.combine = true;
  t.lag = 0;
  r.transforms.push_back(t);

  const PreparedData p = apply_recipe(raw, r);
  const std::vector<std::string> names{"aff",    "pos",   "win",   "x_lo", "x_hi",
                                       "x_(-5,0]", "x_(0,5]", "s_a", "s_c",  "weekend"};
  EXPECT_EQ(p.series.covariate_names, names);
  EXPECT_EQ(p.series.counts, (std::vector<std::int64_t>{1, 0, 3, 2}));
  const Matrix& X = p.series.covariates;
  const std::vector<std::vector<double>> expect{
      {-3, 0, 0, 2, 0, 1, 0, 1, 0, 1},
      {2, 1, 3, -0.5, 0, 0, 1, 0, 0, 1},
      {7, 1, 0, 0, 2.5, 0, 1, 1, 0, 0},
      {15, 1, 0, 0, 4.5, 0, 0, 0, 1, 0}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < names.size(); ++k) EXPECT_EQ(X(i, k), expect[i][k]) << i << k;
  EXPECT_EQ(p.policy[7], CovariatePolicy::Fixed);
  EXPECT_EQ(p.policy[0], CovariatePolicy::Block);
  EXPECT_EQ(p.lags.back(), 0);
  EXPECT_EQ(p.series.timestamps.front(), "2019-01-05");
}

TEST(Recipe, Errors) {
  const RawTable raw = toy();
  CovariateRecipe r;
  CovariateTransform t;
  t.column = "x";
  t.kind = TransformKind::Bins;
  r.transforms = {t};
  EXPECT_THROW(apply_recipe(raw, r), ConfigError);
  t.kind = TransformKind::Identity;
  t.lag = 2;
  r.transforms = {t};
  EXPECT_THROW(apply_recipe(raw, r), ConstraintError);
  r.transforms.clear();
  r.count_column = "missing";
  EXPECT_THROW(apply_recipe(raw, r), ConfigError);
}

PreparedData daily() {
  CovariateRecipe r;
  r.date_column = "date";
  CovariateTransform t;
  t.column = "AT";
  t.kind = TransformKind::SplitLinear;
  t.threshold = 0.0;
  t.b = -1.0;
  r.transforms.push_back(t);
  t = {};
  t.column = "P";
  t.kind = TransformKind::IndicatorGreater;
  t.name = "rain";
  r.transforms.push_back(t);
  t = {};
  t.column = "date";
  t.kind = TransformKind::WeekdayDummy;
  t.name = "weekend";
  t.weekdays = {5, 6};
  t.combine = true;
  t.policy = CovariatePolicy::Fixed;
  r.transforms.push_back(t);
  return apply_recipe(ingest_csv(kDaily, daily_schema()), r);
}

TEST(Models, SelectAndCompare) {
  const PreparedData data = daily();
  ModelSpec small{"small", CountDistribution::poisson(), 1, 0, {{"AT_hi", "linear"}}};
  ModelSpec full{"full", CountDistribution::poisson(), 1, 1,
                 {{"AT_hi", "linear"}, {"weekend", "linear"}}};
  const ModelData md = select_model_data(data, full);
  EXPECT_EQ(md.series.m(), 2u);
  EXPECT_EQ(md.policy[1], CovariatePolicy::Fixed);
  EXPECT_EQ(md.link.q, 1);
  ModelSpec bad{"bad", CountDistribution::poisson(), 1, 0, {{"nope", "linear"}}};
  EXPECT_THROW(select_model_data(data, bad), ConfigError);

  const std::vector<ModelSpec> cands{small, full};
  const auto rows = compare_models(data, cands);
  ASSERT_EQ(rows.size(), 2u);
  // The fixture has a weekend effect and feedback, so the larger model wins.
  EXPECT_EQ(rows[0].name, "full");
  EXPECT_LT(rows[0].fit.aic, rows[1].fit.aic);
  EXPECT_EQ(rows[0].fit.n_params, 5u);
  const std::string csv = emit_comparison(rows, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,K,loglik,aic,bic,converged,flags");
}

TEST(Models, AppliedGofShape) {
  const PreparedData data = daily();
  ModelSpec full{"full", CountDistribution::poisson(), 1, 1,
                 {{"AT_hi", "linear"}, {"weekend", "linear"}}};
  const std::vector<TestTuning> tunings{TestTuning{}, TestTuning{0.0, 1.0, 1.0}};
  const std::vector<std::size_t> ls{5, 9};
  BootstrapPlan plan;
  plan.B = 19;
  const GofTable g = applied_gof(data, full, tunings, ls, plan);
  ASSERT_EQ(g.p_values.size(), 2u);
  ASSERT_EQ(g.p_values[0].size(), 2u);
  EXPECT_EQ(g.statistics.size(), 2u);
  for (const auto& row : g.p_values)
    for (double p : row) {
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  const std::string csv = emit_gof_table(g, true);
  EXPECT_NE(csv.find("rho=0;gamma=1;eta=1,"), std::string::npos);
}

}  // namespace
}  // namespace countgof
