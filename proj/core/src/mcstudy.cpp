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

#include "countgof/mcstudy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "countgof/bootstrap.hpp"
#include "countgof/error.hpp"
#include "countgof/parallel.hpp"
#include "countgof/rng.hpp"

namespace countgof {
namespace {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct ReplicateOutcome {
  bool ok = false;
  std::vector<double> p_values;
  std::vector<bool> reject;
};

}  // namespace

std::vector<StatisticSpec> ExperimentDesign::statistics() const {
  std::vector<StatisticSpec> out;
  const auto wants = [&](Variant v) {
    return std::find(variants.begin(), variants.end(), v) != variants.end();
  };
  if (wants(Variant::DeltaTW)) {
    for (const TestTuning& t : tunings) {
      StatisticSpec s;
      s.variant = Variant::DeltaTW;
      s.tuning = t;
      out.push_back(s);
    }
  }
  if (wants(Variant::Delta0)) {
    StatisticSpec s;
    s.variant = Variant::Delta0;
    s.delta0_form = delta0_form;
    out.push_back(s);
  }
  if (wants(Variant::Delta1)) {
    StatisticSpec s;
    s.variant = Variant::Delta1;
    s.grid_size = delta1_grid;
    out.push_back(s);
  }
  return out;
}

void ExperimentDesign::validate() const {
  if (M < 1) throw ConstraintError("M >= 1", "got " + std::to_string(M));
  if (B < 1) throw ConstraintError("B >= 1", "got " + std::to_string(B));
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConstraintError("alpha in (0,1)", std::to_string(alpha));
  if (T.empty()) throw ConstraintError("at least one sample size", "T list is empty");
  for (std::size_t t : T)
    if (t < 10) throw ConstraintError("T >= 10", "got " + std::to_string(t));
  null_link.validate();
  dgp.validate();
  if (dgp.link.m() != null_link.m())
    throw ConstraintError("null and data covariate counts agree",
                          std::to_string(null_link.m()) + " vs " + std::to_string(dgp.link.m()));
  for (const StatisticSpec& s : statistics()) s.validate();
}

double RejectionCell::rate() const {
  return n == 0 ? 0.0 : static_cast<double>(rejections) / static_cast<double>(n);
}

double RejectionCell::se() const {
  if (n == 0) return 0.0;
  const double r = rate();
  return std::sqrt(r * (1.0 - r) / static_cast<double>(n));
}

ExperimentResult run_experiment(const ExperimentDesign& design, int workers) {
  design.validate();
  const std::vector<StatisticSpec> specs = design.statistics();
  const std::size_t n_cols = specs.size();
  const auto M = static_cast<std::size_t>(design.M);
  const std::size_t n_rows = design.T.size();

  std::vector<ReplicateOutcome> outcomes(n_rows * M);
  parallel_for(outcomes.size(), workers, [&](std::size_t job) {
    const std::size_t row = job / M;
    const std::size_t rep = job % M;
    const std::size_t T = design.T[row];
    DgpSpec dgp = design.dgp;
    dgp.seed = derive_seed(design.seed, {T, rep, 0});
    const SimulatedSeries sim = simulate_counts(dgp, T);

    BootstrapPlan plan;
    plan.B = design.B;
    plan.alpha = design.alpha;
    plan.block_length = design.block_length;
    plan.seed = derive_seed(design.seed, {T, rep, 1});
    plan.workers = 1;
    plan.fail_on_excess_drops = false;

    FitOptions fo = design.fit;
    fo.seed = derive_seed(design.seed, {T, rep, 2});
    ReplicateOutcome& out = outcomes[job];
    try {
      const FitResult fit = fit_model(sim.series, design.null_link, design.null_dist, fo);
      const BootstrapReport rep_report =
          bootstrap_test(sim.series, design.null_link, fit, specs, plan, fo);
      if (rep_report.excess_drops) return;
      for (const GofResult& g : rep_report.results) {
        out.p_values.push_back(g.p_value.value_or(std::numeric_limits<double>::quiet_NaN()));
        out.reject.push_back(g.reject.value_or(false));
      }
      out.ok = true;
    } catch (const StatisticalFailure&) {
    } catch (const DomainError&) {
    }
  });

  ExperimentResult result;
  RejectionTable& table = result.table;
  for (const StatisticSpec& s : specs) table.columns.push_back(s.label());
  table.T = design.T;
  table.cells.assign(n_rows, std::vector<RejectionCell>(n_cols));
  result.p_values.assign(n_rows, std::vector<std::vector<double>>(n_cols));
  for (std::size_t row = 0; row < n_rows; ++row) {
    for (std::size_t rep = 0; rep < M; ++rep) {
      const ReplicateOutcome& o = outcomes[row * M + rep];
      for (std::size_t c = 0; c < n_cols; ++c) {
        RejectionCell& cell = table.cells[row][c];
        if (!o.ok) {
          ++cell.dropped;
          result.p_values[row][c].push_back(std::numeric_limits<double>::quiet_NaN());
          continue;
        }
        ++cell.n;
        if (o.reject[c]) ++cell.rejections;
        result.p_values[row][c].push_back(o.p_values[c]);
      }
    }
  }
  return result;
}

std::string emit_table(const RejectionTable& table, TableFormat format,
                       std::span<const std::string> comments) {
  std::ostringstream os;
  for (const std::string& c : comments) os << "# " << c << '\n';
  if (format == TableFormat::Csv) {
    os << "T";
    for (const auto& c : table.columns) os << ',' << c << ',' << c << ".se," << c << ".n," << c << ".drops";
    os << '\n';
    if (table.columns.empty()) return os.str();
    for (std::size_t r = 0; r < table.T.size(); ++r) {
      os << table.T[r];
      for (const RejectionCell& cell : table.cells[r])
        os << ',' << fmt_g17(cell.rate()) << ',' << fmt_g17(cell.se()) << ',' << cell.n << ','
           << cell.dropped;
      os << '\n';
    }
    return os.str();
  }
  std::vector<std::size_t> width;
  for (const auto& c : table.columns) width.push_back(std::max<std::size_t>(c.size(), 6));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%6s", "T");
  os << buf;
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << "  " << std::string(width[c] - table.columns[c].size(), ' ') << table.columns[c];
  os << '\n';
  if (table.columns.empty()) return os.str();
  for (std::size_t r = 0; r < table.T.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%6zu", table.T[r]);
    os << buf;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%*.3f", static_cast<int>(width[c]), table.cells[r][c].rate());
      os << "  " << buf;
    }
    os << '\n';
  }
  return os.str();
}

RejectionTable parse_table_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  RejectionTable table;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (!have_header) {
      if (fields.empty() || fields[0] != "T" || (fields.size() - 1) % 4 != 0)
        throw ConfigError("table line " + std::to_string(line_no) + ": malformed header");
      for (std::size_t i = 1; i < fields.size(); i += 4) table.columns.push_back(fields[i]);
      have_header = true;
      continue;
    }
    if (fields.size() != 1 + 4 * table.columns.size())
      throw ConfigError("table line " + std::to_string(line_no) + ": expected " +
                        std::to_string(1 + 4 * table.columns.size()) + " fields");
    try {
      table.T.push_back(std::stoull(fields[0]));
      std::vector<RejectionCell> row;
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        RejectionCell cell;
        const double rate = std::stod(fields[1 + 4 * c]);
        cell.n = std::stoull(fields[3 + 4 * c]);
        cell.dropped = std::stoull(fields[4 + 4 * c]);
        cell.rejections = static_cast<std::size_t>(std::llround(rate * static_cast<double>(cell.n)));
        row.push_back(cell);
      }
      table.cells.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ConfigError("table line " + std::to_string(line_no) + ": unparseable number");
    }
  }
  if (!have_header) throw ConfigError("table: missing header");
  return table;
}

double ks_uniform_distance(std::span<const double> sample) {
  std::vector<double> x;
  for (double v : sample)
    if (std::isfinite(v)) x.push_back(v);
  if (x.empty()) return 1.0;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = std::clamp(x[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace countgof
