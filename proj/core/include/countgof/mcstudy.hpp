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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countgof/distribution.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/model.hpp"
#include "countgof/simulate.hpp"

namespace countgof {

/// A size or power experiment: data from `dgp`, tests against the null
/// (null_dist, null_link). One simulated dataset serves every statistic
/// within a replicate, so columns are positively correlated.
struct ExperimentDesign {
  std::string name = "experiment";
  CountDistribution null_dist = CountDistribution::poisson();
  LinkSpec null_link;
  /// dgp.seed is ignored; replicate seeds derive from `seed`.
  DgpSpec dgp;
  std::vector<std::size_t> T = {200};
  int M = 500;
  int B = 199;
  double alpha = 0.05;
  std::vector<TestTuning> tunings;
  std::vector<Variant> variants = {Variant::DeltaTW};
  Delta0Form delta0_form = Delta0Form::Plain;
  int delta1_grid = 1001;
  std::optional<std::size_t> block_length;
  FitOptions fit;
  std::uint64_t seed = 1;

  /// DeltaTW once per tuning, then Delta0 and Delta1 if requested.
  std::vector<StatisticSpec> statistics() const;
  void validate() const;
};

struct RejectionCell {
  std::size_t rejections = 0;
  /// Replicates that produced a decision (M minus drops).
  std::size_t n = 0;
  std::size_t dropped = 0;

  double rate() const;
  /// sqrt(rate (1 - rate) / n).
  double se() const;
  bool operator==(const RejectionCell&) const = default;
};

/// Rows are sample sizes, columns are statistics.
struct RejectionTable {
  std::vector<std::string> columns;
  std::vector<std::size_t> T;
  std::vector<std::vector<RejectionCell>> cells;  // [row][column]

  bool operator==(const RejectionTable&) const = default;
};

struct ExperimentResult {
  RejectionTable table;
  /// p_values[row][column][replicate]; NaN for dropped replicates.
  std::vector<std::vector<std::vector<double>>> p_values;
};

/// Outer replicates run on `workers` threads; each replicate derives its
/// data and bootstrap seeds from (seed, T, replicate), so the result is
/// identical for any worker count.
ExperimentResult run_experiment(const ExperimentDesign& design, int workers = 1);

enum class TableFormat { AlignedText, Csv };

/// Emits the table; `comments` become leading "# " lines.
std::string emit_table(const RejectionTable& table, TableFormat format,
                       std::span<const std::string> comments = {});

/// Inverse of emit_table(..., Csv). Lines starting with '#' are skipped.
RejectionTable parse_table_csv(const std::string& text);

/// Kolmogorov-Smirnov distance between the sample and Uniform(0,1).
double ks_uniform_distance(std::span<const double> sample);

}  // namespace countgof
