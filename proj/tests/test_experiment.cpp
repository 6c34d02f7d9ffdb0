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

#include <gtest/gtest.h>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"
#include "coldstart/experiment.hpp"

namespace coldstart {
namespace {

Json short_template() { return Json{{"duration", 6.0}}; }

TEST(Grid, AxesCartesianFirstAxisSlowest) {
  const auto cells = expand_grid(Json::parse(R"({"axes": {"a": [1, 2], "b": ["x", "y", "z"]}})"));
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0], (std::vector<std::string>{"a=1", "b=\"x\""}));
  EXPECT_EQ(cells[1], (std::vector<std::string>{"a=1", "b=\"y\""}));
  EXPECT_EQ(cells[5], (std::vector<std::string>{"a=2", "b=\"z\""}));
}

TEST(Grid, CellsAndEmpty) {
  const auto cells = expand_grid(Json::parse(R"({"cells": [{"T": 0.01, "phi_true": 0.5}]})"));
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], (std::vector<std::string>{"T=0.01", "phi_true=0.5"}));
  EXPECT_TRUE(expand_grid(Json::parse(R"({"axes": {}})")).empty());
  EXPECT_TRUE(expand_grid(Json::parse(R"({"cells": []})")).empty());
  EXPECT_TRUE(expand_grid(Json::parse(R"({"axes": {"a": []}})")).empty());
  EXPECT_THROW(expand_grid(Json::parse(R"({"rows": []})")), ValidationError);
}

TEST(Sweep, EmptyGridGivesHeaderOnly) {
  const std::string text = sweep_to_csv(run_sweep(short_template(), {}));
  const csv::Table t = csv::parse(text, "sweep");
  EXPECT_TRUE(t.rows.empty());
  EXPECT_EQ(t.header.front(), "cell");
  EXPECT_EQ(t.header.back(), "error");
}

TEST(Sweep, SingleCellMatchesSimulate) {
  const auto results = run_sweep(short_template(), {{"phi_true=0.5"}});
  ASSERT_EQ(results.size(), 1u);
  ASSERT_TRUE(results[0].metrics);
  Json j = short_template();
  j["phi_true"] = 0.5;
  const Simulation sim = simulate(config_from_json(j));
  EXPECT_EQ(metrics_csv_fields(*results[0].metrics), metrics_csv_fields(sim.metrics));
}

TEST(Sweep, PhiGridNominalRowHasNoConvergenceTime) {
  const auto results = run_sweep(short_template(), expand_grid(Json::parse(
                                                       R"({"axes": {"phi_true": [0.5, 1.0, 1.5]}})")));
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) ASSERT_TRUE(r.metrics) << r.error;
  for (Loop l : kAllLoops) {
    EXPECT_FALSE(results[1].metrics->convergence_time[l]);
    EXPECT_EQ(results[1].metrics->convergence_note[l], ConvergenceNote::kNominal);
  }
}

TEST(Sweep, CellFailuresAreRecordedAndBatchContinues) {
  const auto results =
      run_sweep(short_template(), {{"controller.beta=2.0"}, {"phi_true=0.8"}, {"bogus.key=1"}});
  ASSERT_EQ(results.size(), 3u);
  EXPECT_FALSE(results[0].error.empty());
  EXPECT_TRUE(results[1].metrics);
  EXPECT_FALSE(results[2].error.empty());
  const csv::Table t = csv::parse(sweep_to_csv(results), "sweep");
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_FALSE(t.rows[0].back().empty());
  EXPECT_TRUE(t.rows[1].back().empty());
}

TEST(Sweep, ParallelMatchesSerial) {
  const auto cells = expand_grid(
      Json::parse(R"({"axes": {"phi_true": [0.5, 0.8], "controller.beta": [0.3, 0.6]}})"));
  EXPECT_EQ(sweep_to_csv(run_sweep(short_template(), cells)),
            sweep_to_csv(run_sweep_parallel(short_template(), cells)));
}

TEST(Simulate, BaselineOnlyWhenAdapting) {
  ScenarioConfig c;
  c.duration = 1.0;
  EXPECT_TRUE(simulate(c).baseline);
  c.controller.adaptation_enabled = false;
  const Simulation s = simulate(c);
  EXPECT_FALSE(s.baseline);
  EXPECT_FALSE(s.metrics.removal_ratio_min);
}

}  // namespace
}  // namespace coldstart
