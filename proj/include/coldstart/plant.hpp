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

// Mean-value SI engine cold-start plant: five-state dynamics, the closed-form
// model functions, and the engine-out / catalyst / tailpipe HC chain.
//
// Units: masses in kg, flows in kg/s, speed in rad/s, temperatures in degC,
// crank angles in degrees ATDC. Every function here is pure.

namespace coldstart {

struct EngineState {
  double m_a = 0.0;      // intake-manifold air mass [kg]
  double omega_e = 0.0;  // engine speed [rad/s]
  double mdot_f = 0.0;   // in-cylinder fuel flow [kg/s]
  double T_cat = 0.0;    // catalyst temperature [degC]
  double T_exh = 0.0;    // exhaust gas temperature [degC]

  bool operator==(const EngineState&) const = default;
};

// Time derivative of EngineState, same field layout.
struct EngineStateDot {
  double m_a = 0.0;
  double omega_e = 0.0;
  double mdot_f = 0.0;
  double T_cat = 0.0;
  double T_exh = 0.0;
};

struct ControlInput {
  double mdot_ai = 0.0;  // intake air mass flow [kg/s]
  double mdot_fc = 0.0;  // injected fuel flow command [kg/s]
  double delta = 0.0;    // spark timing [deg ATDC]

  bool operator==(const ControlInput&) const = default;
};

// Sign of the burn-fraction exponent in the engine-out HC expression.
enum class HcSignConvention {
  kUnburnedFraction,  // exp(-|a| r^n), bounded by 1
  kGrowingExponent,   // exp(-a r^n) with a = -2, i.e. exp(+2 r^n)
};

// Grouping of the catalyst heat-generation term.
enum class QgenGrouping {
  kFuelTimesExhaust,  // 22.53 (mdot_ao + mdot_f * T_exh) eta HC
  kGrouped,           // 22.53 (mdot_ao + mdot_f) * T_exh * eta HC
};

// How the exhaust-to-catalyst convection term enters dT_cat/dt.
enum class QinDirection {
  kIntoCatalyst,   // dT_cat = (Q_gen + Q_in - Q_out) / mCp
  kOutOfCatalyst,  // dT_cat = (Q_gen - Q_in - Q_out) / mCp
};

inline constexpr double kDefaultFuelFloor = 1e-9;

struct PlantConstants {
  double J = 0.1454;         // rotational inertia [m^2 kg]
  double alpha_f = 0.06;     // fuel evaporation time constant [s]
  double mCp = 1250.0;       // catalyst thermal capacity [J/K]
  double a = -2.0;           // burn-rate shape constant [-]
  double n = 5.0;            // burn-rate exponent [-]
  double theta_evo = 110.0;  // exhaust valve opening [deg ATDC]
  double r_c = 9.0;          // compression ratio [-]
  double AFR_st = 14.7;      // stoichiometric AFR [-]
  double T_atm = 25.0;       // ambient temperature [degC]
  double mdot_f_floor = kDefaultFuelFloor;
  HcSignConvention hc_sign = HcSignConvention::kUnburnedFraction;
  QgenGrouping qgen_grouping = QgenGrouping::kFuelTimesExhaust;
  QinDirection qin_direction = QinDirection::kIntoCatalyst;

  // Throws ValidationError naming the first offending field.
  void validate() const;
  bool operator==(const PlantConstants&) const = default;
};

struct EmissionOutputs {
  double hc_eng = 0.0;   // engine-out HC rate [kg/s]
  double eta_cat = 0.0;  // catalyst conversion efficiency [-]
  double hc_tp = 0.0;    // tailpipe HC rate [kg/s]
  double afr = 0.0;      // air-fuel ratio [-]
};

struct HeatTerms {
  double Q_in = 0.0;   // exhaust -> catalyst convection [W]
  double Q_out = 0.0;  // catalyst -> ambient loss [W]
  double Q_gen = 0.0;  // exothermic conversion [W]
};

double volumetric_efficiency(double m_a, double omega_e);

// Cylinder air outflow 0.0254 * eta_vol * m_a * omega_e [kg/s].
double air_outflow(double m_a, double omega_e);

// 30000 m_a - 0.4 omega_e - 100 [N m]. Splits as indicated_torque - load_torque.
double net_torque(double m_a, double omega_e);
double indicated_torque(double m_a);
double load_torque(double omega_e);

double spark_term(double delta);
double afi(double afr);

// mdot_ao / mdot_f. Throws DegenerateInputError when mdot_f <= floor.
double afr_from_flows(double mdot_ao, double mdot_f, double mdot_f_floor = kDefaultFuelFloor);
double afr(double m_a, double omega_e, double mdot_f, double mdot_f_floor = kDefaultFuelFloor);

// 2 pi / omega_e. Throws DegenerateInputError for omega_e <= 0.
double exhaust_time_constant(double omega_e);

// Combustion duration [deg]. AFR == AFR_st takes the lean branch.
double burn_duration(double afr, double AFR_st = 14.7);

double engine_out_hc(double mdot_f, double delta, double afr, const PlantConstants& c = {});

// Clamped to [0, 0.98].
double catalyst_efficiency(double afr, double T_cat, double AFR_st = 14.7);

double tailpipe_hc(double hc_eng, double eta_cat);

EmissionOutputs emissions(const EngineState& x, double delta, const PlantConstants& c = {});

HeatTerms catalyst_heat_terms(const EngineState& x, double delta, const PlantConstants& c = {});

// Right-hand side of the five-state cold-start model.
EngineStateDot derivatives(const EngineState& x, const ControlInput& u,
                           const PlantConstants& c = {});

}  // namespace coldstart
