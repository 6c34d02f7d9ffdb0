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

#include <gtest/gtest.h>

#include "coldstart/dsmc.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {
namespace {

TEST(Dsmc, LoopKeysRoundTrip) {
  for (Loop l : kAllLoops) EXPECT_EQ(loop_from_key(loop_key(l)), l);
  EXPECT_THROW(loop_from_key("spark"), ValidationError);
}

TEST(Dsmc, BetaAndRhoRangeEnforced) {
  EXPECT_THROW(AdaptiveLoop(0.0, 1.0), ValidationError);
  EXPECT_THROW(AdaptiveLoop(1.0, 1.0), ValidationError);
  EXPECT_THROW(AdaptiveLoop(-0.2, 1.0), ValidationError);
  EXPECT_THROW(AdaptiveLoop(0.5, 0.0), ValidationError);
  EXPECT_NO_THROW(AdaptiveLoop(0.5, 1.0));
}

TEST(Dsmc, SlidingSurfaces) {
  EngineState fb{0.005, 110.0, 0.0, 500.0, 640.0};
  const double mao = air_outflow(fb.m_a, fb.omega_e);
  fb.mdot_f = mao / 14.7;
  const Surfaces z = sliding_surfaces(fb, {14.7, 110.0, 640.0}, fb.m_a);
  EXPECT_NEAR(z.s1, 0.0, 1e-18);
  EXPECT_EQ(z.s2, 0.0);
  EXPECT_EQ(z.s3, 0.0);
  EXPECT_EQ(z.s4, 0.0);
  EXPECT_NEAR(z.afr_error, 0.0, 1e-12);
  EXPECT_EQ(sliding_surfaces(fb, {14.7, 100.0, 640.0}, fb.m_a).s2, 10.0);
  EXPECT_THROW(sliding_surfaces(fb, {0.0, 100.0, 640.0}, fb.m_a), DegenerateInputError);
}

TEST(Dsmc, DesiredFuelFlowChain) {
  EXPECT_NEAR(0.0012 - desired_fuel_flow(0.0147, 14.7), 2e-4, 1e-18);
}

TEST(Dsmc, FuelLaw) {
  EXPECT_DOUBLE_EQ(control_fuel(0.001, 0.001, 0.001, 0.5, 1.0, 0.02, 0.06), 0.001);
  EXPECT_EQ(control_fuel(0.001, 0.001, 0.001, 0.5, 0.0, 0.02, 0.06), 0.0);
  EXPECT_NEAR(control_fuel(0.001, 0.0008, 0.0008, 0.5, 1.0, 0.02, 0.06), 1e-4, 1e-15);
}

TEST(Dsmc, SyntheticAirMass) {
  const double J = 0.1454;
  EXPECT_NEAR(synthetic_air_mass(150.0, 150.0, 150.0, 0.5, 1.0, 0.02, J), 160.0 / 30000.0,
              1e-15);
  EXPECT_NEAR(synthetic_air_mass(0.0, 0.0, 0.0, 0.5, 1.0, 0.02, J), 100.0 / 30000.0, 1e-15);
  EXPECT_EQ(synthetic_air_mass(150.0, 150.0, 150.0, 0.5, 0.0, 0.02, J), 0.0);
}

TEST(Dsmc, AirflowLaw) {
  EXPECT_NEAR(control_airflow(0.005, 0.01, 0.005, 0.005, 0.5, 1.0, 0.02), 0.01, 1e-16);
  EXPECT_EQ(control_airflow(0.005, 0.01, 0.005, 0.005, 0.5, 0.0, 0.02), 0.0);
  EXPECT_NEAR(control_airflow(0.005 - 1e-4, 0.01, 0.005, 0.005, 0.5, 1.0, 0.02), 0.0175, 1e-14);
}

TEST(Dsmc, SparkLaw) {
  const double afr = 14.0, w = 120.0;
  const double g = afi(afr);
  EXPECT_NEAR(control_spark(600.0 * g, w, afr, 600.0 * g, 600.0 * g, 0.5, 1.0, 0.02), 0.0,
              1e-12);
  const double te = 650.0;
  EXPECT_NEAR(control_spark(te, w, afr, te, te, 0.5, 1.0, 0.02), (te - 600.0 * g) / (7.5 * g),
              1e-10);
  const double a0 = control_spark(660.0, w, afr, 650.0, 650.0, 0.1, 1.0, 0.02);
  const double a1 = control_spark(660.0, w, afr, 650.0, 650.0, 0.9, 1.0, 0.02);
  const double alpha_e = exhaust_time_constant(w);
  EXPECT_NEAR(a0 - a1, 0.8 * 10.0 * alpha_e / (7.5 * g * 0.02), 1e-9);
  const double dead = 13.5 + 3.14159265358979 / (2 * 0.13);
  EXPECT_THROW(control_spark(650.0, w, dead, 650.0, 650.0, 0.5, 1.0, 0.02),
               SingularInputGainError);
}

TEST(Dsmc, AdaptLaw) {
  const AdaptiveLoop loop(0.5, 10.0);
  EXPECT_EQ(adapt(loop, 0.0, 0.7, 0.02), 1.0);
  EXPECT_EQ(adapt(loop, 3.0, 0.0, 0.02), 1.0);
  EXPECT_DOUBLE_EQ(adapt(loop, 2.0, 0.5, 0.02), 1.002);
  AdaptiveLoop flipped(0.5, 10.0);
  flipped.set_adaptation_sign(-1.0);
  EXPECT_DOUBLE_EQ(adapt(flipped, 2.0, 0.5, 0.02), 0.998);
  const AdaptiveLoop off(0.5, 10.0, 0.8, false);
  EXPECT_EQ(adapt(off, 2.0, 0.5, 0.02), 0.8);
  AdaptiveLoop bounded(0.5, 1e-6);
  EXPECT_EQ(adapt(bounded, 1.0, 1.0, 0.02), bounded.phi_hat_bounds().hi);
}

// Engine at rest on its own operating point, trajectory constant there.
struct Equilibrium {
  EngineState x;
  DesiredWindow w;
};

Equilibrium equilibrium_point() {
  Equilibrium e;
  const double omega = 125.0;
  e.x.omega_e = omega;
  e.x.m_a = load_torque(omega) / 30000.0;
  const double mao = air_outflow(e.x.m_a, omega);
  e.x.mdot_f = mao / 14.2;
  e.x.T_exh = spark_term(5.0) * afi(14.2);
  e.x.T_cat = 100.0;
  const DesiredSample d{14.2, omega, e.x.T_exh};
  e.w = {d, d, d};
  return e;
}

TEST(Dsmc, ControllerStepEquilibriumFeedforward) {
  const Equilibrium e = equilibrium_point();
  Controller ctrl(default_controller_config(), {});
  const ControllerOutput out = ctrl.step(e.x, e.w, 0.02);
  EXPECT_NEAR(out.command.mdot_ai, air_outflow(e.x.m_a, e.x.omega_e), 1e-12);
  EXPECT_NEAR(out.command.mdot_fc, e.x.mdot_f, 1e-12);
  EXPECT_NEAR(out.command.delta, 5.0, 1e-9);
  EXPECT_NEAR(out.m_a_d_next, e.x.m_a, 1e-15);
  for (Loop l : kAllLoops) EXPECT_EQ(out.phi_hat[l], 1.0);
}

TEST(Dsmc, AdaptationFixedPointAtZeroSurface) {
  const Equilibrium e = equilibrium_point();
  Controller ctrl(default_controller_config(), {});
  ctrl.step(e.x, e.w, 0.02);
  for (Loop l : kAllLoops) EXPECT_NEAR(ctrl.loops()[l].phi_hat(), 1.0, 1e-9);
}

TEST(Dsmc, SaturationIsFlagged) {
  Equilibrium e = equilibrium_point();
  e.x.T_exh = 100.0;  // very cold exhaust asks for more spark than allowed
  Controller ctrl(default_controller_config(), {});
  const ControllerOutput out = ctrl.step(e.x, e.w, 0.02);
  EXPECT_TRUE(out.saturated.delta);
  EXPECT_EQ(out.command.delta, 45.0);
  EXPECT_GT(out.raw.delta, 45.0);
}

TEST(Dsmc, AfiHoldKeepsPreviousSpark) {
  Equilibrium e = equilibrium_point();
  ControllerConfig cfg = default_controller_config();
  cfg.afi_floor = 0.999;  // any AFR away from 13.5 counts as singular
  Controller ctrl(cfg, {});
  const ControllerOutput out = ctrl.step(e.x, e.w, 0.02);
  EXPECT_TRUE(out.afi_hold);
  EXPECT_EQ(out.command.delta, 0.0);
  EXPECT_TRUE(std::isfinite(out.raw.delta));
}

TEST(Dsmc, SpeedLoopOnlyDrivesAirTarget) {
  // Changing the speed target moves m_a_d but not the fuel flow target.
  Equilibrium e = equilibrium_point();
  Controller a(default_controller_config(), {}), b(default_controller_config(), {});
  DesiredWindow w2 = e.w;
  w2.next.omega_d += 5.0;
  w2.next2.omega_d += 5.0;
  const auto oa = a.step(e.x, e.w, 0.02);
  const auto ob = b.step(e.x, w2, 0.02);
  EXPECT_NE(oa.m_a_d_next, ob.m_a_d_next);
  EXPECT_NE(oa.command.mdot_ai, ob.command.mdot_ai);
  EXPECT_EQ(oa.command.delta, ob.command.delta);
}

TEST(Dsmc, ControllerRejectsBadConfig) {
  ControllerConfig cfg = default_controller_config();
  cfg.beta[Loop::kSpeed] = 1.5;
  EXPECT_THROW(Controller(cfg, {}), ValidationError);
  cfg = default_controller_config();
  cfg.adaptation_sign = 0.5;
  EXPECT_THROW(Controller(cfg, {}), ValidationError);
}

}  // namespace
}  // namespace coldstart
