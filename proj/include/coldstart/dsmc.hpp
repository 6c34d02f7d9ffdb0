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

// Cascaded SISO adaptive second-order discrete sliding-mode controllers.
//
// Four loops share one controller instance:
//   fuel     s1 = mdot_f - mdot_f,d      actuator mdot_fc
//   speed    s2 = omega_e - omega_d      synthetic input m_a,d (outer loop)
//   exhaust  s3 = T_exh - T_exh,d        actuator delta
//   air mass s4 = m_a - m_a,d            actuator mdot_ai (inner loop)
// Each loop enforces s(k+1) = -beta s(k) on the nominal model and adapts a
// multiplicative drift estimate phi_hat online.

#include <array>
#include <cstddef>
#include <string_view>

#include "coldstart/plant.hpp"

namespace coldstart {

enum class Loop : std::size_t { kFuel = 0, kSpeed = 1, kExhaust = 2, kAirMass = 3 };

inline constexpr std::size_t kNumLoops = 4;
inline constexpr std::array<Loop, kNumLoops> kAllLoops = {Loop::kFuel, Loop::kSpeed,
                                                          Loop::kExhaust, Loop::kAirMass};

// Short key used in config files and CSV columns ("mdot_f", "omega_e", ...).
std::string_view loop_key(Loop loop);
// Parses a loop_key; throws ValidationError.
Loop loop_from_key(std::string_view key);

template <class T>
struct PerLoop {
  std::array<T, kNumLoops> values{};

  T& operator[](Loop l) { return values[static_cast<std::size_t>(l)]; }
  const T& operator[](Loop l) const { return values[static_cast<std::size_t>(l)]; }

  static PerLoop filled(const T& v) {
    PerLoop p;
    p.values.fill(v);
    return p;
  }
  bool operator==(const PerLoop&) const = default;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Bounds&) const = default;
};

struct ActuatorBounds {
  Bounds mdot_ai{0.0, 0.1};
  Bounds mdot_fc{0.0, 0.01};
  Bounds delta{-10.0, 45.0};
  bool operator==(const ActuatorBounds&) const = default;
};

// Per-loop controller record. beta must lie in (0, 1) and rho must be positive;
// the constructor rejects anything else.
class AdaptiveLoop {
 public:
  AdaptiveLoop(double beta, double rho, double phi_hat0 = 1.0, bool adaptation_enabled = true);

  double beta() const { return beta_; }
  double rho() const { return rho_; }
  double phi_hat() const { return phi_hat_; }
  double phi_hat_initial() const { return phi_hat0_; }
  double s_prev() const { return s_prev_; }
  bool adaptation_enabled() const { return adaptation_enabled_; }

  // +1 applies the adaptation law as written; -1 flips the increment.
  double adaptation_sign() const { return sign_; }
  void set_adaptation_sign(double sign);

  // Projection interval for phi_hat.
  const Bounds& phi_hat_bounds() const { return phi_bounds_; }
  void set_phi_hat_bounds(Bounds b);

  void set_phi_hat(double v) { phi_hat_ = v; }
  void set_s_prev(double s) { s_prev_ = s; }

 private:
  double beta_;
  double rho_;
  double phi_hat0_;
  double phi_hat_;
  double s_prev_ = 0.0;
  bool adaptation_enabled_;
  double sign_ = 1.0;
  Bounds phi_bounds_{0.05, 20.0};
};

// phi_hat(k+1) = phi_hat(k) + sign * T * s * f / rho, projected onto the loop's
// phi_hat bounds. Frozen at the initial value when adaptation is disabled.
double adapt(const AdaptiveLoop& loop, double s, double f, double T);

struct DesiredSample {
  double afr_d = 0.0;
  double omega_d = 0.0;
  double T_exh_d = 0.0;
};

// Desired values at k, k+1 and k+2. The speed loop is evaluated one step
// ahead and so needs the k+2 sample.
struct DesiredWindow {
  DesiredSample now;
  DesiredSample next;
  DesiredSample next2;
};

struct Surfaces {
  double s1 = 0.0;  // fuel flow [kg/s]
  double s2 = 0.0;  // speed [rad/s]
  double s3 = 0.0;  // exhaust temperature [degC]
  double s4 = 0.0;  // air mass [kg]
  double afr_error = 0.0;
};

// Desired in-cylinder fuel flow for a given air outflow and AFR target.
// Throws DegenerateInputError for afr_d <= 0.
double desired_fuel_flow(double mdot_ao, double afr_d);

Surfaces sliding_surfaces(const EngineState& feedback, const DesiredSample& desired,
                          double m_a_d, double mdot_f_floor = kDefaultFuelFloor);

// Drift terms f_i(x) of the per-loop discrete models.
PerLoop<double> drift_terms(const EngineState& x, const PlantConstants& c);

// Fuel law. mdot_f_d / mdot_f_d_next are the desired fuel flows at k and k+1.
double control_fuel(double mdot_f, double mdot_f_d, double mdot_f_d_next, double beta,
                    double phi_hat, double T, double alpha_f);

// Speed law: desired manifold air mass that drives s2 to -beta s2 one step later.
double synthetic_air_mass(double omega_e, double omega_d, double omega_d_next, double beta,
                          double phi_hat, double T, double J);

// Air-mass law tracking m_a,d.
double control_airflow(double m_a, double mdot_ao, double m_a_d, double m_a_d_next, double beta,
                       double phi_hat, double T);

// Spark law. Throws SingularInputGainError when |AFI| < afi_floor.
double control_spark(double T_exh, double omega_e, double afr, double T_exh_d,
                     double T_exh_d_next, double beta, double phi_hat, double T,
                     double afi_floor = 0.05);

struct ControllerConfig {
  PerLoop<double> beta = PerLoop<double>::filled(0.5);
  PerLoop<double> rho;  // defaults in default_controller_config()
  PerLoop<double> phi_hat0 = PerLoop<double>::filled(1.0);
  bool adaptation_enabled = true;
  double adaptation_sign = 1.0;
  Bounds phi_hat_bounds{0.05, 20.0};
  // Skip updates that would push a command further into a saturation that
  // shaped the current surface. Updates pointing back inside are kept.
  bool freeze_on_saturation = true;
  ActuatorBounds bounds;
  double afi_floor = 0.05;

  bool operator==(const ControllerConfig&) const = default;
};

ControllerConfig default_controller_config();

struct SaturationFlags {
  bool mdot_ai = false;
  bool mdot_fc = false;
  bool delta = false;
};

struct ControllerOutput {
  ControlInput command;  // saturated
  ControlInput raw;      // before saturation
  double m_a_d = 0.0;       // air-mass target at k
  double m_a_d_next = 0.0;  // air-mass target at k+1 (speed loop output)
  Surfaces surfaces;
  PerLoop<double> xi;       // s(k) + beta s(k-1); zero on the first step
  PerLoop<double> phi_hat;  // estimates used at step k
  PerLoop<double> f;        // drift terms at step k
  SaturationFlags saturated;
  bool afi_hold = false;  // spark held at previous value (|AFI| below floor)
  PerLoop<bool> frozen{};  // adaptation skipped this step
};

class Controller {
 public:
  Controller(const ControllerConfig& config, const PlantConstants& plant);

  // One sampling instant. Feedback is whatever the ADC delivered.
  ControllerOutput step(const EngineState& feedback, const DesiredWindow& desired, double T);

  const PerLoop<AdaptiveLoop>& loops() const { return loops_; }
  const ControllerConfig& config() const { return config_; }

 private:
  static PerLoop<AdaptiveLoop> make_loops(const ControllerConfig& config);

  ControllerConfig config_;
  PlantConstants plant_;
  PerLoop<AdaptiveLoop> loops_;
  bool first_ = true;
  double m_a_d_ = 0.0;  // delay line: target for the current step
  double delta_prev_ = 0.0;
  // Saturation seen at k-1 and k-2; the speed surface lags the air command by two steps.
  // +1 / -1 for upper / lower clamp, 0 when free.
  struct SatSide {
    int mdot_ai = 0;
    int mdot_fc = 0;
    int delta = 0;
  };
  SatSide sat1_, sat2_;
  bool hold1_ = false;
};

}  // namespace coldstart
