// Copyright 2026 The msmsq Authors
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
#include <vector>

#include "msmsq/runner.hpp"

namespace msmsq {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every acceptance criterion on the configuration (defaults
/// unless overridden). Each entry is independent: a failure in one check
/// does not stop the rest, and exceptions are reported as failures.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg);

}  // namespace msmsq
