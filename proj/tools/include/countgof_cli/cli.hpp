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
#include <ostream>
#include <string>

#include "countgof/config.hpp"

namespace countgof::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Reproducibility record. The header carries only the fields that are fixed
/// by (config, seed); timing and worker count go to the sidecar.
struct RunManifest {
  std::string subcommand;
  config::json config;
  std::uint64_t seed = 1;
  std::string version;
  double wall_clock_seconds = 0.0;
  int workers = 1;

  std::string header() const;
  config::json sidecar() const;
};

/// Runs the command line in-process. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace countgof::cli
