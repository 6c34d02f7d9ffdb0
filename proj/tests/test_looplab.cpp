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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "coldstart/errors.hpp"
#include "coldstart/looplab.hpp"
#include "coldstart/run_io.hpp"
#include "oracle.hpp"

namespace coldstart {
namespace {

TEST(Quantizer, EndCodesAndClamp) {
  EXPECT_EQ(quantize(0.0, 16, 0.0, 1.0), 0.0);
  EXPECT_EQ(quantize(1.0, 16, 0.0, 1.0), 1.0);
  EXPECT_EQ(quantize(-5.0, 16, 0.0, 1.0), 0.0);
  EXPECT_EQ(quantize(7.0, 16, 0.0, 1.0), 1.0);
  EXPECT_EQ(quantize(-10.0, 12, -10.0, 45.0), -10.0);
  EXPECT_EQ(quantize(45.0, 12, -10.0, 45.0), 45.0);
}

TEST(Quantizer, HalfLsbAtMidScale) {
  const double lsb = 1.0 / 65535.0;
  EXPECT_LE(std::abs(quantize(0.5, 16, 0.0, 1.0) - 0.5), 0.5 * lsb * (1 + 1e-12));
}

TEST(Quantizer, IdempotentMonotoneBounded) {
  for (int bits : {8, 12, 16, 24, 32}) {
    const double lo = -3.0, hi = 17.0;
    const double lsb = (hi - lo) / (std::ldexp(1.0, bits) - 1.0);
    double prev = -INFINITY;
    for (int i = 0; i <= 20000; ++i) {
      const double v = lo + (hi - lo) * i / 20000.0;
      const double q = quantize(v, bits, lo, hi);
      EXPECT_EQ(quantize(q, bits, lo, hi), q);
      EXPECT_GE(q, prev);
      EXPECT_LE(std::abs(q - v), 0.5 * lsb * (1 + 1e-9));
      prev = q;
    }
  }
}

TEST(SampleHold, ConstantRampAndMidpoint) {
  const double T = 0.1;
  std::vector<double> t, c, r;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.025 * i);
    c.push_back(3.0);
    r.push_back(2.0 * 0.025 * i);
  }
  for (double v : sample_and_hold(t, c, T)) EXPECT_EQ(v, 3.0);
  const auto held = sample_and_hold(t, r, T);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double k = std::floor(t[i] / T + 1e-9);
    EXPECT_NEAR(held[i], 2.0 * k * T, 1e-12);
  }
  const ZeroOrderHold zoh([](double x) { return x * x; }, 0.02);
  EXPECT_DOUBLE_EQ(zoh(0.06 + 0.01), 0.06 * 0.06);
  EXPECT_DOUBLE_EQ(zoh(0.06), 0.06 * 0.06);
}

TEST(EulerStep, NominalMatchesDirectTranscription) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ma(0.001, 0.02), w(50, 400), mf(1e-4, 2e-3),
      tc(0, 900), te(0, 900), ai(0, 0.1), fc(0, 0.01), dl(-10, 45);
  const auto ones = PerLoop<double>::filled(1.0);
  for (int i = 0; i < 1000; ++i) {
    const EngineState x{ma(rng), w(rng), mf(rng), tc(rng), te(rng)};
    const ControlInput u{ai(rng), fc(rng), dl(rng)};
    const EngineState a = euler_step(x, u, ones, 0.02);
    const EngineState b = oracle::euler_direct(x, u, 0.02);
    EXPECT_TRUE(oracle::rel_close(a.m_a, b.m_a, 1e-15));
    EXPECT_TRUE(oracle::rel_close(a.omega_e, b.omega_e, 1e-15));
    EXPECT_TRUE(oracle::rel_close(a.mdot_f, b.mdot_f, 1e-15));
    EXPECT_TRUE(oracle::rel_close(a.T_cat, b.T_cat, 1e-15));
    EXPECT_TRUE(oracle::rel_close(a.T_exh, b.T_exh, 1e-15));
  }
}

TEST(EulerStep, ZeroStepIsIdentity) {
  const EngineState x{0.005, 150.0, 5e-4, 100.0, 400.0};
  EXPECT_EQ(euler_step(x, {0.01, 5e-4, 10.0}, PerLoop<double>::filled(0.5), 0.0), x);
}

TEST(EulerStep, FuelDriftScalesWithPhi) {
  const EngineState x{0.005, 150.0, 5e-4, 100.0, 400.0};
  const ControlInput u{0.01, 0.0, 10.0};
  PerLoop<double> phi = PerLoop<double>::filled(1.0);
  phi[Loop::kFuel] = 0.5;
  const double T = 0.02;
  const EngineState n = euler_step(x, u, phi, T);
  EXPECT_DOUBLE_EQ(n.mdot_f, x.mdot_f + T * (-0.5 * x.mdot_f / 0.06));
  const EngineState n1 = euler_step(x, u, PerLoop<double>::filled(1.0), T);
  EXPECT_NEAR((n.mdot_f - x.mdot_f) / (n1.mdot_f - x.mdot_f), 0.5, 1e-12);
}

ScenarioConfig short_config(double duration) {
  ScenarioConfig c;
  c.duration = duration;
  return c;
}

TEST(Scenario, DurationZeroGivesOneRow) {
  const RunRecord r = run_scenario(short_config(0.0));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].t, 0.0);
  EXPECT_EQ(r.rows[0].hc_cum, 0.0);
}

TEST(Scenario, DeterministicAndSerializedIdentically) {
  ScenarioConfig c = short_config(4.0);
  c.phi_true = PerLoop<double>::filled(0.6);
  const RunRecord a = run_scenario(c), b = run_scenario(c);
  EXPECT_EQ(run_to_csv(a), run_to_csv(b));
}

TEST(Scenario, AdaptationOffMatchesOnAtNominal) {
  // Starts on the trajectory with exact feedback, so every surface stays at
  // rounding level and the estimates have nothing to learn.
  ScenarioConfig on = short_config(10.0);
  on.quantization_enabled = false;
  on.initial_state = on_trajectory_state(Trajectory::default_profile(), on.T, 25.0);
  ScenarioConfig off = on;
  off.controller.adaptation_enabled = false;
  const RunRecord a = run_scenario(on), b = run_scenario(off);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k].x;
    const auto& y = b.rows[k].x;
    worst = std::max({worst, std::abs(x.m_a - y.m_a) / std::max(1e-3, std::abs(y.m_a)),
                      std::abs(x.omega_e - y.omega_e) / std::max(1.0, std::abs(y.omega_e)),
                      std::abs(x.mdot_f - y.mdot_f) / std::max(1e-4, std::abs(y.mdot_f)),
                      std::abs(x.T_exh - y.T_exh) / std::max(1.0, std::abs(y.T_exh)),
                      std::abs(x.T_cat - y.T_cat) / std::max(1.0, std::abs(y.T_cat))});
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Scenario, CumulativeHcNondecreasingAndFinite) {
  ScenarioConfig c = short_config(40.0);
  c.phi_true = PerLoop<double>::filled(0.5);
  const RunRecord r = run_scenario(c);
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    EXPECT_GE(r.rows[k].hc_cum, r.rows[k - 1].hc_cum);
    EXPECT_LE(r.rows[k].emission.hc_tp, r.rows[k].emission.hc_eng);
  }
  EXPECT_TRUE(std::isfinite(r.rows.back().hc_cum));
}

TEST(Scenario, TransportDelayShiftsCommands) {
  ScenarioConfig c = short_config(1.0);
  c.transport_delay = 2;
  c.quantization_enabled = false;
  const RunRecord r = run_scenario(c);
  for (std::size_t k = 2; k < r.rows.size(); ++k) {
    EXPECT_EQ(r.rows[k].u, r.rows[k - 2].ctrl.command);
  }
}

TEST(Scenario, SubstepsChangeTheIntegrationOnly) {
  ScenarioConfig a = short_config(2.0);
  ScenarioConfig b = a;
  b.substeps = 4;
  const RunRecord ra = run_scenario(a), rb = run_scenario(b);
  EXPECT_EQ(ra.rows.size(), rb.rows.size());
  EXPECT_EQ(ra.rows[0].u, rb.rows[0].u);
  EXPECT_NE(ra.rows[1].x, rb.rows[1].x);
}

TEST(Scenario, ValidationNamesTheField) {
  auto expect_path = [](ScenarioConfig c, const std::string& path) {
    try {
      c.validate();
      FAIL() << "expected rejection of " << path;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(path), std::string::npos) << e.what();
    }
  };
  ScenarioConfig c;
  c.T = 0.0;
  expect_path(c, "T");
  c = {};
  c.quant_bits = 4;
  expect_path(c, "quant_bits");
  c = {};
  c.signal_ranges.omega_e = {5.0, 5.0};
  expect_path(c, "signal_ranges.omega_e");
  c = {};
  c.phi_true[Loop::kSpeed] = 0.0;
  expect_path(c, "phi_true");
  c = {};
  c.duration = -1.0;
  expect_path(c, "duration");
}

TEST(Scenario, TrajectoryMustCoverTheRun) {
  ScenarioConfig c = short_config(2.0);
  const Trajectory t({0.0, 1.0}, {14.7, 14.7}, {120.0, 120.0}, {650.0, 650.0});
  EXPECT_THROW(run_scenario(c, t), ValidationError);
}

TEST(Scenario, StallAbortsWithStep) {
  ScenarioConfig c = short_config(5.0);
  c.controller.bounds.mdot_ai = {0.0, 1e-6};  // starve the engine
  c.quantization_enabled = false;
  try {
    run_scenario(c);
    FAIL() << "expected a runtime abort";
  } catch (const RuntimeAbort& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_FALSE(e.loop().empty());
  }
}

}  // namespace
}  // namespace coldstart
