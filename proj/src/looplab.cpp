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

#include "coldstart/looplab.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "coldstart/errors.hpp"

namespace coldstart {

double quantize(double value, int bits, double lo, double hi) {
  const double levels = std::ldexp(1.0, bits) - 1.0;
  const double v = value < lo ? lo : (value > hi ? hi : value);
  const double code = std::round((v - lo) / (hi - lo) * levels);
  if (code <= 0.0) return lo;
  if (code >= levels) return hi;
  return lo + code * (hi - lo) / levels;
}

std::vector<double> sample_and_hold(std::span<const double> time, std::span<const double> value,
                                    double T) {
  if (time.size() != value.size()) throw ValidationError("sample_and_hold: length mismatch");
  if (!(T > 0.0)) throw ValidationError("sample_and_hold: T must be > 0");
  auto interp = [&](double t) {
    if (t <= time.front()) return value.front();
    if (t >= time.back()) return value.back();
    std::size_t hi = 1;
    while (time[hi] < t) ++hi;
    const double w = (t - time[hi - 1]) / (time[hi] - time[hi - 1]);
    return value[hi - 1] + w * (value[hi] - value[hi - 1]);
  };
  std::vector<double> out;
  out.reserve(time.size());
  for (double t : time) {
    // Guard against t = kT landing a hair below the grid point.
    const double k = std::floor(t / T + 1e-9);
    out.push_back(interp(k * T));
  }
  return out;
}

ZeroOrderHold::ZeroOrderHold(std::function<double(double)> signal, double T)
    : signal_(std::move(signal)), T_(T) {
  if (!(T > 0.0)) throw ValidationError("ZeroOrderHold: T must be > 0");
}

double ZeroOrderHold::operator()(double t) const {
  return signal_(std::floor(t / T_ + 1e-9) * T_);
}

EngineState euler_step(const EngineState& x, const ControlInput& u, const PerLoop<double>& phi,
                       double T, const PlantConstants& c) {
  // phi f + g u = (f + g u) + (phi - 1) f, so phi == 1 adds an exact zero and
  // the step is bit-identical to the nominal one.
  const EngineStateDot d = derivatives(x, u, c);
  const PerLoop<double> f = drift_terms(x, c);
  auto extra = [&](Loop l) { return (phi[l] - 1.0) * f[l]; };

  EngineState next;
  next.m_a = x.m_a + T * (d.m_a + extra(Loop::kAirMass));
  next.omega_e = x.omega_e + T * (d.omega_e + extra(Loop::kSpeed));
  next.mdot_f = x.mdot_f + T * (d.mdot_f + extra(Loop::kFuel));
  next.T_exh = x.T_exh + T * (d.T_exh + extra(Loop::kExhaust));
  next.T_cat = x.T_cat + T * d.T_cat;
  return next;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& path, const std::string& rule) {
    throw ValidationError(path + ": " + rule);
  };
  if (!(T > 0.0) || !std::isfinite(T)) fail("T", "must be > 0");
  if (!(duration >= 0.0) || !std::isfinite(duration)) fail("duration", "must be >= 0");
  if (quant_bits < 8 || quant_bits > 32) fail("quant_bits", "must lie in [8, 32]");
  auto check_range = [&](const Bounds& b, const char* name) {
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      fail(std::string("signal_ranges.") + name, "need finite lo < hi");
    }
  };
  check_range(signal_ranges.m_a, "m_a");
  check_range(signal_ranges.omega_e, "omega_e");
  check_range(signal_ranges.mdot_f, "mdot_f");
  check_range(signal_ranges.T_exh, "T_exh");
  check_range(signal_ranges.T_cat, "T_cat");
  for (Loop l : kAllLoops) {
    if (!(phi_true[l] > 0.0) || !std::isfinite(phi_true[l])) {
      fail("phi_true." + std::string(loop_key(l)), "must be > 0");
    }
  }
  if (!(initial_state.omega_e > 0.0)) fail("initial_state.omega_e", "must be > 0");
  if (!(initial_state.m_a >= 0.0)) fail("initial_state.m_a", "must be >= 0");
  if (!(initial_state.mdot_f >= 0.0)) fail("initial_state.mdot_f", "must be >= 0");
  if (!std::isfinite(initial_state.T_cat) || !std::isfinite(initial_state.T_exh)) {
    fail("initial_state", "temperatures must be finite");
  }
  if (substeps < 1) fail("substeps", "must be >= 1");
  if (transport_delay < 0) fail("transport_delay", "must be >= 0");
  if (!(metrics_window_start >= 0.0)) fail("metrics_window_start", "must be >= 0");
  const ActuatorBounds& b = controller.bounds;
  for (auto [bound, name] : {std::pair{b.mdot_ai, "mdot_ai"}, std::pair{b.mdot_fc, "mdot_fc"},
                             std::pair{b.delta, "delta"}}) {
    if (!(bound.lo < bound.hi)) fail(std::string("controller.bounds.") + name, "need lo < hi");
    if (quantization_enabled && (!std::isfinite(bound.lo) || !std::isfinite(bound.hi))) {
      fail(std::string("controller.bounds.") + name, "must be finite when quantizing commands");
    }
  }
  plant.validate();
  Controller probe(controller, plant);  // runs the per-loop checks
  (void)probe;
}

std::size_t ScenarioConfig::num_steps() const {
  return static_cast<std::size_t>(std::llround(duration / T));
}

namespace {

EngineState quantize_state(const EngineState& x, int bits, const SignalRanges& r) {
  return {quantize(x.m_a, bits, r.m_a.lo, r.m_a.hi),
          quantize(x.omega_e, bits, r.omega_e.lo, r.omega_e.hi),
          quantize(x.mdot_f, bits, r.mdot_f.lo, r.mdot_f.hi),
          quantize(x.T_cat, bits, r.T_cat.lo, r.T_cat.hi),
          quantize(x.T_exh, bits, r.T_exh.lo, r.T_exh.hi)};
}

ControlInput quantize_command(const ControlInput& u, int bits, const ActuatorBounds& b) {
  return {quantize(u.mdot_ai, bits, b.mdot_ai.lo, b.mdot_ai.hi),
          quantize(u.mdot_fc, bits, b.mdot_fc.lo, b.mdot_fc.hi),
          quantize(u.delta, bits, b.delta.lo, b.delta.hi)};
}

bool finite_state(const EngineState& x) {
  return std::isfinite(x.m_a) && std::isfinite(x.omega_e) && std::isfinite(x.mdot_f) &&
         std::isfinite(x.T_cat) && std::isfinite(x.T_exh);
}

void log_transition(RunRecord& rec, std::size_t k, bool was, bool is, const char* what) {
  if (was == is) return;
  rec.events.push_back({k, is ? "saturation_on" : "saturation_off", what});
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& config, const Trajectory& trajectory) {
  config.validate();
  const std::size_t n = config.num_steps();
  const double T = config.T;
  if (!trajectory.covers(0.0, static_cast<double>(n) * T + T)) {
    throw ValidationError("trajectory: must cover [0, duration + T]");
  }

  RunRecord rec;
  rec.T = T;
  rec.adaptation_enabled = config.controller.adaptation_enabled;
  rec.rows.reserve(n + 1);

  Controller controller(config.controller, config.plant);
  std::deque<ControlInput> pipeline;
  EngineState x = config.initial_state;
  SaturationFlags prev_sat;
  bool prev_hold = false;

  for (std::size_t k = 0; k <= n; ++k) {
    RunRow row;
    row.t = static_cast<double>(k) * T;
    row.x = x;
    row.feedback = config.quantization_enabled
                       ? quantize_state(x, config.quant_bits, config.signal_ranges)
                       : x;
    const DesiredWindow window = trajectory.window(row.t, T);
    row.desired = window.now;

    try {
      row.ctrl = controller.step(row.feedback, window, T);
    } catch (const Error& e) {
      throw RuntimeAbort(std::string("controller: ") + e.what(), k, "controller");
    }

    ControlInput cmd = row.ctrl.command;
    if (config.quantization_enabled) {
      cmd = quantize_command(cmd, config.quant_bits, config.controller.bounds);
    }
    if (pipeline.empty()) {
      for (int i = 0; i < config.transport_delay; ++i) pipeline.push_back(cmd);
    }
    pipeline.push_back(cmd);
    row.u = pipeline.front();
    pipeline.pop_front();

    row.phi_true = config.phi_true;
    for (Loop l : kAllLoops) row.residual[l] = (row.ctrl.phi_hat[l] - config.phi_true[l]) * row.ctrl.f[l];

    try {
      row.emission = emissions(x, row.u.delta, config.plant);
    } catch (const Error& e) {
      throw RuntimeAbort(std::string("emission chain: ") + e.what(), k, "plant");
    }
    if (!rec.rows.empty()) {
      const RunRow& prev = rec.rows.back();
      row.hc_cum = prev.hc_cum + 0.5 * T * (prev.emission.hc_tp + row.emission.hc_tp);
    }

    log_transition(rec, k, prev_sat.mdot_ai, row.ctrl.saturated.mdot_ai, "mdot_ai");
    log_transition(rec, k, prev_sat.mdot_fc, row.ctrl.saturated.mdot_fc, "mdot_fc");
    log_transition(rec, k, prev_sat.delta, row.ctrl.saturated.delta, "delta");
    if (row.ctrl.afi_hold && !prev_hold) rec.events.push_back({k, "afi_hold", "spark held"});
    prev_sat = row.ctrl.saturated;
    prev_hold = row.ctrl.afi_hold;

    const ControlInput u = row.u;
    rec.rows.push_back(std::move(row));

    if (k == n) break;
    const double dt = T / config.substeps;
    try {
      for (int i = 0; i < config.substeps; ++i) x = euler_step(x, u, config.phi_true, dt, config.plant);
    } catch (const Error& e) {
      throw RuntimeAbort(std::string("plant: ") + e.what(), k, "plant");
    }
    if (!finite_state(x)) throw RuntimeAbort("plant state became non-finite", k, "plant");
  }
  return rec;
}

RunRecord run_scenario(const ScenarioConfig& config) {
  const Trajectory traj = config.trajectory_file.empty()
                              ? Trajectory::default_profile()
                              : Trajectory::from_csv(config.trajectory_file);
  return run_scenario(config, traj);
}

EngineState on_trajectory_state(const Trajectory& trajectory, double T, double T_cat,
                                const PlantConstants& c) {
  const DesiredWindow w = trajectory.window(0.0, T);
  EngineState x;
  x.omega_e = w.now.omega_d;
  x.m_a = c.J / (30000.0 * T) *
          ((T / c.J) * load_torque(x.omega_e) + w.next.omega_d - w.now.omega_d);
  x.mdot_f = air_outflow(x.m_a, x.omega_e) / w.now.afr_d;
  x.T_exh = w.now.T_exh_d;
  x.T_cat = T_cat;
  return x;
}

}  // namespace coldstart
