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

// Discrete closed-loop execution: Euler plant stepping with multiplicative
// drift uncertainty, ADC emulation (quantization + zero-order hold), scenario
// orchestration and the per-step run record.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coldstart/dsmc.hpp"
#include "coldstart/plant.hpp"
#include "coldstart/trajectory.hpp"

namespace coldstart {

// Uniform mid-tread quantizer with 2^bits levels spanning [lo, hi];
// out-of-range values clamp to the end codes.
double quantize(double value, int bits, double lo, double hi);

// Zero-order hold of a signal given on (time, value) knots: the held value at
// t is the linearly interpolated signal at floor(t / T) * T.
std::vector<double> sample_and_hold(std::span<const double> time, std::span<const double> value,
                                    double T);

// Holds a continuous-time signal at the sampling grid.
class ZeroOrderHold {
 public:
  ZeroOrderHold(std::function<double(double)> signal, double T);
  double operator()(double t) const;

 private:
  std::function<double(double)> signal_;
  double T_;
};

// x(k+1) = x(k) + T (phi_i f_i(x) + g_i(x) u_i) for the four controlled states
// and a plain Euler step for T_cat. phi == 1 reproduces the nominal step.
EngineState euler_step(const EngineState& x, const ControlInput& u, const PerLoop<double>& phi,
                       double T, const PlantConstants& c = {});

struct SignalRanges {
  Bounds m_a{0.0, 0.05};
  Bounds omega_e{0.0, 600.0};
  Bounds mdot_f{0.0, 0.01};
  Bounds T_exh{0.0, 1000.0};
  Bounds T_cat{0.0, 1000.0};
  bool operator==(const SignalRanges&) const = default;
};

struct ScenarioConfig {
  double T = 0.02;
  double duration = 40.0;
  bool quantization_enabled = true;
  int quant_bits = 16;
  SignalRanges signal_ranges;
  PerLoop<double> phi_true = PerLoop<double>::filled(1.0);
  EngineState initial_state{0.004, 125.0, 4e-4, 25.0, 25.0};
  // Empty means the built-in default profile.
  std::string trajectory_file;
  ControllerConfig controller = default_controller_config();
  PlantConstants plant;
  int substeps = 1;
  int transport_delay = 0;  // whole samples between ECU output and plant input
  double metrics_window_start = 5.0;

  // Throws ValidationError with the offending field path.
  void validate() const;
  std::size_t num_steps() const;
  bool operator==(const ScenarioConfig&) const = default;
};

struct RunRow {
  double t = 0.0;
  EngineState x;          // true plant state
  EngineState feedback;   // what the controller saw
  ControlInput u;         // applied to the plant
  ControllerOutput ctrl;  // controller telemetry
  DesiredSample desired;
  PerLoop<double> phi_true;
  PerLoop<double> residual;  // (phi_hat - phi_true) * f
  EmissionOutputs emission;
  double hc_cum = 0.0;  // trapezoidal integral of hc_tp [kg]
};

struct RunEvent {
  std::size_t step = 0;
  std::string kind;
  std::string detail;
};

struct RunRecord {
  double T = 0.0;
  bool adaptation_enabled = true;
  std::vector<RunRow> rows;
  std::vector<RunEvent> events;
};

RunRecord run_scenario(const ScenarioConfig& config, const Trajectory& trajectory);
// Loads trajectory_file, or uses the default profile when it is empty.
RunRecord run_scenario(const ScenarioConfig& config);

// Cold-start state sitting exactly on the trajectory at t = 0 under the
// nominal model (used for equivalence and decay checks).
EngineState on_trajectory_state(const Trajectory& trajectory, double T, double T_cat,
                                const PlantConstants& c = {});

}  // namespace coldstart
