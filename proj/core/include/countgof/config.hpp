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

#include <string>

#include <nlohmann/json.hpp>

#include "countgof/bootstrap.hpp"
#include "countgof/datapipe.hpp"
#include "countgof/estimate.hpp"
#include "countgof/goftest.hpp"
#include "countgof/mcstudy.hpp"
#include "countgof/model.hpp"
#include "countgof/simulate.hpp"

namespace countgof {

/// JSON configuration. Every reader throws ConfigError naming the offending
/// key path; unknown keys are rejected. docs/config.md has the schema.
namespace config {

using json = nlohmann::json;

json load_file(const std::string& path);

CountDistribution read_distribution(const json& j, const std::string& where);
LinkSpec read_link(const json& j, const std::string& where);
ParamVector read_params(const json& j, const std::string& where);
ExogSpec read_exog(const json& j, const std::string& where);
DgpSpec read_dgp(const json& j, const std::string& where = "dgp");
TestTuning read_tuning(const json& j, const std::string& where);
FitOptions read_fit_options(const json& j, const std::string& where = "fit");
BootstrapPlan read_bootstrap(const json& j, const std::string& where = "bootstrap");
ExperimentDesign read_experiment(const json& j);
CovariateRecipe read_recipe(const json& j, const std::string& where = "recipe");
ModelSpec read_model(const json& j, const std::string& where);
std::vector<ColumnSchema> read_schema(const json& j, const std::string& where = "schema");

json to_json(const CountDistribution& d);
json to_json(const LinkSpec& link);
json to_json(const ParamVector& theta);
json to_json(const ExogSpec& e);
json to_json(const DgpSpec& dgp);
json to_json(const TestTuning& t);
json to_json(const FitOptions& f);
json to_json(const ExperimentDesign& d);
json to_json(const FitResult& fit);
json to_json(const GofResult& g, bool with_replicates = false);

/// Named data-generating processes: "arx1-cos", "garchx11-cos", "arx2-cos",
/// "garchx11-cos-persistent". Exogenous input is one AR(1) column with
/// rho = 0.5.
DgpSpec dgp_preset(const std::string& name);

/// The seven (gamma, eta) pairs of the standard study grid with rho = 0.
std::vector<TestTuning> standard_tuning_grid();

}  // namespace config
}  // namespace countgof
