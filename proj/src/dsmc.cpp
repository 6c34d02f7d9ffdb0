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

#include "coldstart/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coldstart/errors.hpp"

namespace coldstart {

std::string_view loop_key(Loop loop) {
  switch (loop) {
    case Loop::kFuel:
      return "mdot_f";
    case Loop::kSpeed:
      return "omega_e";
    case Loop::kExhaust:
      return "T_exh";
    case Loop::kAirMass:
      return "m_a";
  }
  return "?";
}

Loop loop_from_key(std::string_view key) {
  for (Loop l : kAllLoops) {
    if (loop_key(l) == key) return l;
  }
  throw ValidationError("unknown loop key '" + std::string(key) +
                        "' (expected m_a, omega_e, mdot_f or T_exh)");
}

AdaptiveLoop::AdaptiveLoop(double beta, double rho, double phi_hat0, bool adaptation_enabled)
    : beta_(beta),
      rho_(rho),
      phi_hat0_(phi_hat0),
      phi_hat_(phi_hat0),
      adaptation_enabled_(adaptation_enabled) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ValidationError("beta must lie in (0, 1), got " + std::to_string(beta));
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw ValidationError("rho must be > 0, got " + std::to_string(rho));
  }
  if (!std::isfinite(phi_hat0)) throw ValidationError("phi_hat0 must be finite");
}

void AdaptiveLoop::set_adaptation_sign(double sign) {
  if (sign != 1.0 && sign != -1.0) throw ValidationError("adaptation_sign must be +1 or -1");
  sign_ = sign;
}

void AdaptiveLoop::set_phi_hat_bounds(Bounds b) {
  if (!(b.lo < b.hi)) throw ValidationError("phi_hat bounds need lo < hi");
  phi_bounds_ = b;
}

double adapt(const AdaptiveLoop& loop, double s, double f, double T) {
  if (!loop.adaptation_enabled()) return loop.phi_hat_initial();
  const double next = loop.phi_hat() + loop.adaptation_sign() * T * s * f / loop.rho();
  return loop.phi_hat_bounds().clamp(next);
}

double desired_fuel_flow(double mdot_ao, double afr_d) {
  if (!(afr_d > 0.0)) {
    throw DegenerateInputError("desired AFR must be > 0, got " + std::to_string(afr_d));
  }
  return mdot_ao / afr_d;
}

Surfaces sliding_surfaces(const EngineState& feedback, const DesiredSample& desired,
                          double m_a_d, double mdot_f_floor) {
  const double mdot_ao = air_outflow(feedback.m_a, feedback.omega_e);
  Surfaces s;
  s.s1 = feedback.mdot_f - desired_fuel_flow(mdot_ao, desired.afr_d);
  s.s2 = feedback.omega_e - desired.omega_d;
  s.s3 = feedback.T_exh - desired.T_exh_d;
  s.s4 = feedback.m_a - m_a_d;
  s.afr_error = afr_from_flows(mdot_ao, feedback.mdot_f, mdot_f_floor) - desired.afr_d;
  return s;
}

PerLoop<double> drift_terms(const EngineState& x, const PlantConstants& c) {
  const double mdot_ao = air_outflow(x.m_a, x.omega_e);
  const double alpha_e = exhaust_time_constant(x.omega_e);
  const double ratio = afr_from_flows(mdot_ao, x.mdot_f, c.mdot_f_floor);
  PerLoop<double> f;
  f[Loop::kAirMass] = -mdot_ao;
  f[Loop::kSpeed] = -load_torque(x.omega_e) / c.J;
  f[Loop::kFuel] = -x.mdot_f / c.alpha_f;
  f[Loop::kExhaust] = (600.0 * afi(ratio) - x.T_exh) / alpha_e;
  return f;
}

double control_fuel(double mdot_f, double mdot_f_d, double mdot_f_d_next, double beta,
                    double phi_hat, double T, double alpha_f) {
  const double s1 = mdot_f - mdot_f_d;
  return alpha_f / T *
         (phi_hat * (T / alpha_f) * mdot_f - (beta + 1.0) * s1 + mdot_f_d_next - mdot_f_d);
}

double synthetic_air_mass(double omega_e, double omega_d, double omega_d_next, double beta,
                          double phi_hat, double T, double J) {
  const double s2 = omega_e - omega_d;
  return J / (30000.0 * T) *
         (phi_hat * (T / J) * load_torque(omega_e) - (beta + 1.0) * s2 + omega_d_next - omega_d);
}

double control_airflow(double m_a, double mdot_ao, double m_a_d, double m_a_d_next, double beta,
                       double phi_hat, double T) {
  const double s4 = m_a - m_a_d;
  return (phi_hat * mdot_ao * T - (beta + 1.0) * s4 + m_a_d_next - m_a_d) / T;
}

double control_spark(double T_exh, double omega_e, double afr, double T_exh_d,
                     double T_exh_d_next, double beta, double phi_hat, double T,
                     double afi_floor) {
  const double gain = afi(afr);
  if (!(std::abs(gain) >= afi_floor)) {
    throw SingularInputGainError("|AFI| = " + std::to_string(std::abs(gain)) +
                                 " below floor at AFR " + std::to_string(afr));
  }
  const double alpha_e = exhaust_time_constant(omega_e);
  const double s3 = T_exh - T_exh_d;
  return alpha_e / (7.5 * gain * T) *
         (-phi_hat * (T / alpha_e) * (600.0 * gain - T_exh) - (beta + 1.0) * s3 + T_exh_d_next -
          T_exh_d);
}

ControllerConfig default_controller_config() {
  ControllerConfig c;
  c.rho[Loop::kFuel] = 8e-7;
  c.rho[Loop::kSpeed] = 1300.0;
  c.rho[Loop::kExhaust] = 2000.0;
  c.rho[Loop::kAirMass] = 3e-7;
  return c;
}

PerLoop<AdaptiveLoop> Controller::make_loops(const ControllerConfig& config) {
  auto make = [&](Loop l) {
    AdaptiveLoop loop(config.beta[l], config.rho[l], config.phi_hat0[l], config.adaptation_enabled);
    loop.set_adaptation_sign(config.adaptation_sign);
    loop.set_phi_hat_bounds(config.phi_hat_bounds);
    return loop;
  };
  return PerLoop<AdaptiveLoop>{
      {make(Loop::kFuel), make(Loop::kSpeed), make(Loop::kExhaust), make(Loop::kAirMass)}};
}

Controller::Controller(const ControllerConfig& config, const PlantConstants& plant)
    : config_(config), plant_(plant), loops_(make_loops(config)) {
  plant_.validate();
  if (!(config.afi_floor >= 0.0)) throw ValidationError("controller.afi_floor must be >= 0");
}

ControllerOutput Controller::step(const EngineState& fb, const DesiredWindow& desired, double T) {
  ControllerOutput out;
  const PlantConstants& c = plant_;
  const double mdot_ao = air_outflow(fb.m_a, fb.omega_e);

  if (first_) {
    // No target exists yet, so the air-mass surface starts at zero.
    m_a_d_ = fb.m_a;
    delta_prev_ = config_.bounds.delta.clamp(0.0);
  }

  out.surfaces = sliding_surfaces(fb, desired.now, m_a_d_, c.mdot_f_floor);
  const std::array<double, kNumLoops> s = {out.surfaces.s1, out.surfaces.s2, out.surfaces.s3,
                                           out.surfaces.s4};
  out.f = drift_terms(fb, c);
  for (Loop l : kAllLoops) {
    const auto i = static_cast<std::size_t>(l);
    out.phi_hat[l] = loops_[l].phi_hat();
    out.xi[l] = first_ ? 0.0 : s[i] + loops_[l].beta() * loops_[l].s_prev();
  }
  const PerLoop<double>& phi = out.phi_hat;

  // Speed loop, evaluated at the one-step-ahead speed: omega(k+1) is already
  // fixed by m_a(k), so the air-mass target it produces is the value m_a must
  // take at k+1.
  const double omega_next =
      fb.omega_e +
      T * ((indicated_torque(fb.m_a) - phi[Loop::kSpeed] * load_torque(fb.omega_e)) / c.J);
  out.m_a_d = m_a_d_;
  out.m_a_d_next =
      synthetic_air_mass(omega_next, desired.next.omega_d, desired.next2.omega_d,
                         loops_[Loop::kSpeed].beta(), phi[Loop::kSpeed], T, c.J);

  out.raw.mdot_ai = control_airflow(fb.m_a, mdot_ao, m_a_d_, out.m_a_d_next,
                                    loops_[Loop::kAirMass].beta(), phi[Loop::kAirMass], T);
  out.command.mdot_ai = config_.bounds.mdot_ai.clamp(out.raw.mdot_ai);
  out.saturated.mdot_ai = out.command.mdot_ai != out.raw.mdot_ai;

  // Desired fuel flow one step ahead, from the predicted air outflow.
  const double m_a_next = fb.m_a + T * (out.command.mdot_ai - phi[Loop::kAirMass] * mdot_ao);
  const double mdot_f_d = desired_fuel_flow(mdot_ao, desired.now.afr_d);
  const double mdot_f_d_next =
      desired_fuel_flow(air_outflow(m_a_next, omega_next), desired.next.afr_d);
  out.raw.mdot_fc = control_fuel(fb.mdot_f, mdot_f_d, mdot_f_d_next, loops_[Loop::kFuel].beta(),
                                 phi[Loop::kFuel], T, c.alpha_f);
  out.command.mdot_fc = config_.bounds.mdot_fc.clamp(out.raw.mdot_fc);
  out.saturated.mdot_fc = out.command.mdot_fc != out.raw.mdot_fc;

  try {
    const double ratio = afr_from_flows(mdot_ao, fb.mdot_f, c.mdot_f_floor);
    out.raw.delta = control_spark(fb.T_exh, fb.omega_e, ratio, desired.now.T_exh_d,
                                  desired.next.T_exh_d, loops_[Loop::kExhaust].beta(),
                                  phi[Loop::kExhaust], T, config_.afi_floor);
    out.command.delta = config_.bounds.delta.clamp(out.raw.delta);
    out.saturated.delta = out.command.delta != out.raw.delta;
  } catch (const SingularInputGainError&) {
    out.afi_hold = true;
    out.raw.delta = delta_prev_;
    out.command.delta = delta_prev_;
  }

  // Sensitivity of each loop's command to its estimate, and the clamp side
  // that was active when the current surface was formed.
  const double ratio = afr_from_flows(mdot_ao, fb.mdot_f, c.mdot_f_floor);
  const double gain = afi(ratio);
  const PerLoop<double> du_dphi{{fb.mdot_f, load_torque(fb.omega_e),
                                 gain != 0.0 ? -(600.0 * gain - fb.T_exh) / (7.5 * gain) : 0.0,
                                 mdot_ao}};
  PerLoop<int> side{{sat1_.mdot_fc, sat1_.mdot_ai != 0 ? sat1_.mdot_ai : sat2_.mdot_ai,
                     sat1_.delta, sat1_.mdot_ai}};
  for (Loop l : kAllLoops) {
    const auto i = static_cast<std::size_t>(l);
    const double next = adapt(loops_[l], s[i], out.f[l], T);
    if (config_.freeze_on_saturation && loops_[l].adaptation_enabled()) {
      const double push = (next - loops_[l].phi_hat()) * du_dphi[l] * side[l];
      out.frozen[l] = push > 0.0 || (l == Loop::kExhaust && hold1_);
    }
    if (!out.frozen[l]) loops_[l].set_phi_hat(next);
    loops_[l].set_s_prev(s[i]);
  }
  auto side_of = [](double raw, double cmd) { return raw > cmd ? 1 : (raw < cmd ? -1 : 0); };
  sat2_ = sat1_;
  sat1_ = {side_of(out.raw.mdot_ai, out.command.mdot_ai),
           side_of(out.raw.mdot_fc, out.command.mdot_fc), side_of(out.raw.delta, out.command.delta)};
  hold1_ = out.afi_hold;

  m_a_d_ = out.m_a_d_next;
  delta_prev_ = out.command.delta;
  first_ = false;
  return out;
}

}  // namespace coldstart
