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

#include <stdexcept>
#include <string>

namespace countgof {

/// Input outside the mathematical domain of a function (e.g. lambda <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A named model or configuration constraint was violated.
class ConstraintError : public std::invalid_argument {
 public:
  ConstraintError(std::string constraint, const std::string& detail)
      : std::invalid_argument(constraint + ": " + detail),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// Malformed configuration, CSV, or command input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistical procedure could not complete, e.g. too many bootstrap
/// replicates were dropped.
class StatisticalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace countgof
