// Copyright 2026 The coldstart-dsmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Paired runs and override-grid sweeps.

#include <optional>
#include <string>
#include <vector>

#include "coldstart/config.hpp"
#include "coldstart/looplab.hpp"
#include "coldstart/metrics.hpp"

namespace coldstart {

struct Simulation {
  RunRecord record;
  // Same scenario with adaptation off; present only when the main run adapts.
  std::optional<RunRecord> baseline;
  MetricsSummary metrics;
};

Simulation simulate(const ScenarioConfig& config, const Trajectory& trajectory);
Simulation simulate(const ScenarioConfig& config);

// Grid file forms:
//   {"axes": {"phi_true": [0.5, 1.0], "controller.beta": [0.3, 0.5]}}  cartesian product,
//                                                                       first axis slowest
//   {"cells": [{"phi_true": 0.5}, {"phi_true": 1.0, "T": 0.01}]}        explicit list
// An empty axes object or cell list yields no cells.
std::vector<std::vector<std::string>> expand_grid(const Json& grid);

struct CellResult {
  std::vector<std::string> overrides;
  std::optional<MetricsSummary> metrics;
  std::string error;  // empty on success
};

std::vector<CellResult> run_sweep(const Json& config_template,
                                  const std::vector<std::vector<std::string>>& cells);
// Cells in parallel (OpenMP); output order matches the serial runner.
std::vector<CellResult> run_sweep_parallel(const Json& config_template,
                                           const std::vector<std::vector<std::string>>& cells);

std::string sweep_to_csv(const std::vector<CellResult>& results);

}  // namespace coldstart
