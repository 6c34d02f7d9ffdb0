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

#include "coldstart/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coldstart/errors.hpp"

namespace coldstart {

namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ValidationError(std::string("plant.") + field + ": " + rule);
}

}  // namespace

void PlantConstants::validate() const {
  require(std::isfinite(J) && J > 0.0, "J", "must be > 0");
  require(std::isfinite(alpha_f) && alpha_f > 0.0, "alpha_f", "must be > 0");
  require(std::isfinite(mCp) && mCp > 0.0, "mCp", "must be > 0");
  require(std::isfinite(r_c) && r_c > 1.0, "r_c", "must be > 1");
  require(std::isfinite(AFR_st) && AFR_st > 0.0, "AFR_st", "must be > 0");
  require(std::isfinite(a) && std::isfinite(n), "a/n", "must be finite");
  require(std::isfinite(theta_evo), "theta_evo", "must be finite");
  require(std::isfinite(T_atm), "T_atm", "must be finite");
  require(std::isfinite(mdot_f_floor) && mdot_f_floor >= 0.0, "mdot_f_floor", "must be >= 0");
}

double volumetric_efficiency(double m_a, double omega_e) {
  const double w2 = omega_e * omega_e;
  return m_a * m_a * (-0.1636 * w2 - 7.093 * omega_e - 1750.0) +
         m_a * (0.0029 * w2 - 0.4033 * omega_e + 85.38) -
         (1.06e-6 * w2 - 0.0021 * omega_e - 0.2719);
}

double air_outflow(double m_a, double omega_e) {
  return 0.0254 * volumetric_efficiency(m_a, omega_e) * m_a * omega_e;
}

double net_torque(double m_a, double omega_e) { return 30000.0 * m_a - 0.4 * omega_e - 100.0; }

double indicated_torque(double m_a) { return 30000.0 * m_a; }

double load_torque(double omega_e) { return 100.0 + 0.4 * omega_e; }

double spark_term(double delta) { return 7.5 * delta + 600.0; }

double afi(double afr) { return std::cos(0.13 * (afr - 13.5)); }

double afr_from_flows(double mdot_ao, double mdot_f, double mdot_f_floor) {
  if (!(mdot_f > mdot_f_floor)) {
    throw DegenerateInputError("AFR undefined: mdot_f = " + std::to_string(mdot_f) +
                               " kg/s is at or below the floor");
  }
  return mdot_ao / mdot_f;
}

double afr(double m_a, double omega_e, double mdot_f, double mdot_f_floor) {
  return afr_from_flows(air_outflow(m_a, omega_e), mdot_f, mdot_f_floor);
}

double exhaust_time_constant(double omega_e) {
  if (!(omega_e > 0.0)) {
    throw DegenerateInputError("exhaust time constant needs omega_e > 0, got " +
                               std::to_string(omega_e));
  }
  return 2.0 * std::numbers::pi / omega_e;
}

double burn_duration(double afr, double AFR_st) {
  const double k1 = afr >= AFR_st ? 0.1 : 0.4;
  const double k2 = 80.0;
  const double d = afr - 16.2;
  return k1 * d * d + k2;
}

double engine_out_hc(double mdot_f, double delta, double afr, const PlantConstants& c) {
  const double theta_0 = delta + 10.0;
  double ratio = (c.theta_evo - theta_0) / burn_duration(afr, c.AFR_st);
  double exponent = 0.0;
  if (c.hc_sign == HcSignConvention::kUnburnedFraction) {
    // Past EVO nothing has burned yet: fraction saturates at 1.
    ratio = std::max(ratio, 0.0);
    exponent = -std::abs(c.a) * std::pow(ratio, c.n);
  } else {
    exponent = -c.a * std::pow(ratio, c.n);
  }
  return mdot_f * (c.r_c - 1.0) / c.r_c * std::exp(exponent);
}

double catalyst_efficiency(double afr, double T_cat, double AFR_st) {
  // Odd powers make each factor negative below its threshold; clamp per factor
  // so a cold, rich catalyst cannot report a positive product.
  const double x = afr / AFR_st - 0.7;
  const double afr_factor = std::clamp(1.0 - std::exp(-5.0 * std::pow(x, 15)), 0.0, 1.0);
  const double y = (T_cat - 30.0) / 150.0;
  const double thermal_factor = std::clamp(1.0 - std::exp(-0.2 * std::pow(y, 5)), 0.0, 1.0);
  return std::clamp(0.98 * afr_factor * thermal_factor, 0.0, 0.98);
}

double tailpipe_hc(double hc_eng, double eta_cat) { return hc_eng * (1.0 - eta_cat); }

EmissionOutputs emissions(const EngineState& x, double delta, const PlantConstants& c) {
  EmissionOutputs out;
  out.afr = afr(x.m_a, x.omega_e, x.mdot_f, c.mdot_f_floor);
  out.hc_eng = engine_out_hc(x.mdot_f, delta, out.afr, c);
  out.eta_cat = catalyst_efficiency(out.afr, x.T_cat, c.AFR_st);
  out.hc_tp = tailpipe_hc(out.hc_eng, out.eta_cat);
  return out;
}

HeatTerms catalyst_heat_terms(const EngineState& x, double delta, const PlantConstants& c) {
  const double mdot_ao = air_outflow(x.m_a, x.omega_e);
  const EmissionOutputs e = emissions(x, delta, c);
  HeatTerms h;
  h.Q_in = 16.0 * (x.T_exh - x.T_cat);
  h.Q_out = 0.642 * (x.T_cat - c.T_atm);
  const double flow_term = c.qgen_grouping == QgenGrouping::kFuelTimesExhaust
                               ? mdot_ao + x.mdot_f * x.T_exh
                               : (mdot_ao + x.mdot_f) * x.T_exh;
  h.Q_gen = 22.53 * flow_term * e.eta_cat * e.hc_eng;
  return h;
}

EngineStateDot derivatives(const EngineState& x, const ControlInput& u, const PlantConstants& c) {
  const double mdot_ao = air_outflow(x.m_a, x.omega_e);
  const double alpha_e = exhaust_time_constant(x.omega_e);
  const double ratio = afr_from_flows(mdot_ao, x.mdot_f, c.mdot_f_floor);
  const HeatTerms h = catalyst_heat_terms(x, u.delta, c);
  const double q_in = c.qin_direction == QinDirection::kIntoCatalyst ? -h.Q_in : h.Q_in;

  EngineStateDot d;
  d.m_a = u.mdot_ai - mdot_ao;
  d.omega_e = (indicated_torque(x.m_a) - load_torque(x.omega_e)) / c.J;
  d.mdot_f = (u.mdot_fc - x.mdot_f) / c.alpha_f;
  d.T_cat = (h.Q_gen - q_in - h.Q_out) / c.mCp;
  d.T_exh = (spark_term(u.delta) * afi(ratio) - x.T_exh) / alpha_e;
  return d;
}

}  // namespace coldstart
