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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "coldstart/errors.hpp"
#include "coldstart/metrics.hpp"

namespace coldstart {
namespace {

RunRecord synthetic(std::size_t n, double T) {
  RunRecord r;
  r.T = T;
  r.adaptation_enabled = true;
  for (std::size_t k = 0; k < n; ++k) {
    RunRow row;
    row.t = static_cast<double>(k) * T;
    row.desired = {14.7, 120.0, 650.0};
    row.x.omega_e = 120.0;
    row.x.T_exh = 650.0;
    row.emission.afr = 14.7;
    row.phi_true = PerLoop<double>::filled(1.0);
    row.ctrl.phi_hat = PerLoop<double>::filled(1.0);
    r.rows.push_back(row);
  }
  return r;
}

TEST(Metrics, PerfectTrackingHasZeroStats) {
  const MetricsSummary m = compute_metrics(synthetic(500, 0.02));
  EXPECT_EQ(m.samples, 250u);
  for (const auto& s : m.tracking) {
    EXPECT_EQ(s.mean, 0.0);
    EXPECT_EQ(s.stddev, 0.0);
    EXPECT_EQ(s.mean_abs, 0.0);
  }
}

TEST(Metrics, MeanAndStddevOfKnownErrors) {
  RunRecord r = synthetic(400, 0.02);
  MetricsOptions o;
  o.window_start = 0.0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) r.rows[k].x.omega_e += (k % 2 ? 2.0 : -1.0);
  const auto s = compute_metrics(r, nullptr, o).tracking[static_cast<std::size_t>(Output::kSpeed)];
  EXPECT_NEAR(s.mean, 0.5, 1e-12);
  EXPECT_NEAR(s.stddev, 1.5, 1e-12);
  EXPECT_NEAR(s.mean_abs, 1.5, 1e-12);
}

TEST(Metrics, LightOffAtFirstGridPointAtOrAboveThreshold) {
  RunRecord r = synthetic(100, 0.1);
  // Linear eta crossing 0.5 at t = 4.25, between grid points 4.2 and 4.3.
  for (auto& row : r.rows) row.emission.eta_cat = std::min(0.98, row.t / 8.5);
  const MetricsSummary m = compute_metrics(r);
  ASSERT_TRUE(m.light_off_time);
  EXPECT_NEAR(*m.light_off_time, 4.3, 1e-12);
  EXPECT_NEAR(m.final_eta, 0.98, 0.0);
}

TEST(Metrics, NoLightOffIsAbsent) {
  const MetricsSummary m = compute_metrics(synthetic(100, 0.1));
  EXPECT_FALSE(m.light_off_time);
  EXPECT_NE(metrics_to_text(m).find("light_off_time=absent"), std::string::npos);
}

TEST(Metrics, ConvergenceTimeIsLastEntryIntoBand) {
  RunRecord r = synthetic(300, 0.1);
  for (auto& row : r.rows) {
    row.phi_true[Loop::kSpeed] = 0.5;
    // Enters at 5.0, leaves at 12.0, re-enters for good at 15.0.
    const bool in = (row.t >= 5.0 - 1e-9 && row.t < 12.0 - 1e-9) || row.t >= 15.0 - 1e-9;
    row.ctrl.phi_hat[Loop::kSpeed] = in ? 0.51 : 0.8;
  }
  const MetricsSummary m = compute_metrics(r);
  ASSERT_TRUE(m.convergence_time[Loop::kSpeed]);
  EXPECT_NEAR(*m.convergence_time[Loop::kSpeed], 15.0, 1e-9);
  EXPECT_EQ(m.convergence_note[Loop::kFuel], ConvergenceNote::kNominal);
  EXPECT_FALSE(m.convergence_time[Loop::kFuel]);
}

TEST(Metrics, NeverConvergedAndAdaptationOffAreAbsent) {
  RunRecord r = synthetic(50, 0.1);
  for (auto& row : r.rows) {
    row.phi_true[Loop::kExhaust] = 0.5;
    row.ctrl.phi_hat[Loop::kExhaust] = 1.0;
  }
  EXPECT_EQ(compute_metrics(r).convergence_note[Loop::kExhaust], ConvergenceNote::kNotConverged);
  r.adaptation_enabled = false;
  const MetricsSummary off = compute_metrics(r);
  for (Loop l : kAllLoops) {
    EXPECT_FALSE(off.convergence_time[l]);
    EXPECT_EQ(off.convergence_note[l], ConvergenceNote::kAdaptationOff);
  }
}

TEST(Metrics, RemovalRatioAgainstBaseline) {
  RunRecord a = synthetic(500, 0.02), b = synthetic(500, 0.02);
  b.adaptation_enabled = false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    for (Loop l : kAllLoops) {
      b.rows[k].residual[l] = 1.0;
      a.rows[k].residual[l] = l == Loop::kSpeed ? 0.2 : 0.05;
      b.rows[k].ctrl.surfaces.s2 = 4.0;
      a.rows[k].ctrl.surfaces.s2 = 1.0;
    }
  }
  const MetricsSummary m = compute_metrics(a, &b);
  EXPECT_NEAR(*m.removal_ratio[Loop::kFuel], 0.95, 1e-12);
  EXPECT_NEAR(*m.removal_ratio[Loop::kSpeed], 0.8, 1e-12);
  EXPECT_NEAR(*m.removal_ratio_min, 0.8, 1e-12);
  EXPECT_NEAR(*m.tracking_improvement[Loop::kSpeed], 0.75, 1e-12);
  // A worse adaptive run clamps to zero rather than going negative.
  const MetricsSummary w = compute_metrics(b, &a);
  EXPECT_FALSE(w.removal_ratio_min);  // b is non-adaptive, no ratios
  a.adaptation_enabled = true;
  RunRecord worse = b;
  worse.adaptation_enabled = true;
  EXPECT_EQ(*compute_metrics(worse, &a).removal_ratio_min, 0.0);
}

TEST(Metrics, WithoutBaselineRatiosAreAbsent) {
  const MetricsSummary m = compute_metrics(synthetic(500, 0.02));
  EXPECT_FALSE(m.removal_ratio_min);
  for (Loop l : kAllLoops) EXPECT_FALSE(m.tracking_improvement[l]);
}

TEST(Metrics, MismatchedGridsRejected) {
  const RunRecord a = synthetic(100, 0.02), b = synthetic(101, 0.02), c = synthetic(100, 0.01);
  EXPECT_THROW(compute_metrics(a, &b), ValidationError);
  EXPECT_THROW(compute_metrics(a, &c), ValidationError);
}

TEST(Metrics, TextAndCsvAgree) {
  const MetricsSummary m = compute_metrics(synthetic(10, 0.1));
  EXPECT_EQ(metrics_csv_fields(m).size(), metrics_csv_header().size());
  const std::string text = metrics_to_text(m);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            metrics_csv_header().size());
}

}  // namespace
}  // namespace coldstart
