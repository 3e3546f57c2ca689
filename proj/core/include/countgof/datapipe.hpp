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
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "countgof/bootstrap.hpp"
#include "countgof/distribution.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/model.hpp"

namespace countgof {

enum class ColumnType { Integer, Real, Text, Date };

struct ColumnSchema {
  std::string name;
  ColumnType type = ColumnType::Real;
};

/// Typed columns of a CSV file. Numeric columns keep both the parsed value and
/// the original text.
class RawTable {
 public:
  std::size_t rows() const noexcept { return rows_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool has(const std::string& name) const;
  ColumnType type(const std::string& name) const;
  const std::vector<double>& numeric(const std::string& name) const;
  const std::vector<std::string>& text(const std::string& name) const;

  void add_column(std::string name, ColumnType type, std::vector<std::string> text,
                  std::vector<double> numeric);

 private:
  std::size_t index(const std::string& name) const;
  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::vector<ColumnType> types_;
  std::vector<std::vector<std::string>> text_;
  std::vector<std::vector<double>> numeric_;
};

/// RFC-4180 CSV with a header row. Every schema column must be present (extra
/// columns are ignored); parse errors name the 1-based file line. An empty
/// schema keeps every column as text. Lines starting with '#' before the
/// header are skipped.
RawTable parse_csv(std::istream& in, std::span<const ColumnSchema> schema,
                   const std::string& source = "<input>");
RawTable ingest_csv(const std::string& path, std::span<const ColumnSchema> schema);

enum class TransformKind {
  Identity,
  Affine,           // a + b x
  IndicatorGreater, // 1[x > threshold]
  IndicatorWindow,  // scale * 1[|x - center| < halfwidth]
  SplitLinear,      // (1[x < c](a1 + b1 x), 1[x >= c](a2 + b2 x)), two columns
  Bins,             // one dummy per (lo, hi] interval; uncovered values are the baseline
  Dummies,          // one dummy per listed text level
  WeekdayDummy,     // one dummy per listed weekday (0 = Monday) of a date column
};

struct CovariateTransform {
  TransformKind kind = TransformKind::Identity;
  std::string column;
  /// Output column name (prefix for multi-column transforms).
  std::string name;
  double a = 0.0, b = 1.0;
  double a2 = 0.0, b2 = 1.0;
  double threshold = 0.0;
  double center = 0.0, halfwidth = 1.0, scale = 1.0;
  std::vector<std::pair<double, double>> bins;
  std::vector<std::string> levels;
  std::vector<int> weekdays;
  /// Merge the weekday dummies into one indicator.
  bool combine = false;
  CovariatePolicy policy = CovariatePolicy::Block;
  /// 1: lambda_t uses X_{t-1}; 0: the current X_t.
  int lag = 1;
};

struct CovariateRecipe {
  std::string count_column = "count";
  std::optional<std::string> date_column;
  std::vector<CovariateTransform> transforms;
};

/// A series with per-column bootstrap policy and lag.
struct PreparedData {
  CountSeries series;
  std::vector<CovariatePolicy> policy;
  std::vector<int> lags;
};

PreparedData apply_recipe(const RawTable& raw, const CovariateRecipe& recipe);

/// Days since 1970-01-01 to weekday with Monday = 0; parses YYYY-MM-DD.
int weekday_of(const std::string& iso_date);

/// A candidate model over named covariate columns of PreparedData.
struct ModelSpec {
  std::string name;
  CountDistribution family = CountDistribution::poisson();
  int p = 1;
  int q = 0;
  /// Covariate column names; each paired with a link transform name.
  std::vector<std::pair<std::string, std::string>> covariates;
};

/// Series, link and policies for one model, lags taken from the data.
struct ModelData {
  CountSeries series;
  LinkSpec link;
  std::vector<CovariatePolicy> policy;
};
ModelData select_model_data(const PreparedData& data, const ModelSpec& model);

struct ComparisonRow {
  std::string name;
  FitResult fit;
};

/// Fits every candidate; sorted by AIC, then BIC, then fewer parameters, with
/// non-converged fits last.
std::vector<ComparisonRow> compare_models(const PreparedData& data,
                                          std::span<const ModelSpec> candidates,
                                          const FitOptions& options = {});

std::string emit_comparison(std::span<const ComparisonRow> rows, bool csv);

struct GofTable {
  std::vector<std::string> tunings;
  std::vector<std::size_t> block_lengths;
  std::vector<double> statistics;            // per tuning
  std::vector<std::vector<double>> p_values; // [tuning][block length]
  std::size_t dropped = 0;
};

/// Bootstrap p-values for every (tuning, block length) cell. Fixed columns are
/// held; Block columns are resampled with each length.
GofTable applied_gof(const PreparedData& data, const ModelSpec& model,
                     std::span<const TestTuning> tunings,
                     std::span<const std::size_t> block_lengths, const BootstrapPlan& plan,
                     const FitOptions& options = {});

std::string emit_gof_table(const GofTable& table, bool csv);

}  // namespace countgof
