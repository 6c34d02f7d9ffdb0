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

#include "coldstart/config.hpp"

#include <fstream>
#include <set>

#include "coldstart/errors.hpp"

namespace coldstart {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& rule) {
  throw ValidationError(path + ": " + rule);
}

std::string join(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

void reject_unknown(const Json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string_view> allowed(known);
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(join(path, key), "unknown key");
  }
}

void read_number(const Json& obj, std::string_view key, const std::string& path, double& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  if (!it->is_number()) fail(join(path, key), "expected a number");
  out = it->get<double>();
}

void read_int(const Json& obj, std::string_view key, const std::string& path, int& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  if (!it->is_number_integer()) fail(join(path, key), "expected an integer");
  out = it->get<int>();
}

void read_bool(const Json& obj, std::string_view key, const std::string& path, bool& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  if (!it->is_boolean()) fail(join(path, key), "expected true or false");
  out = it->get<bool>();
}

void read_string(const Json& obj, std::string_view key, const std::string& path, std::string& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  if (!it->is_string()) fail(join(path, key), "expected a string");
  out = it->get<std::string>();
}

void read_bounds(const Json& obj, std::string_view key, const std::string& path, Bounds& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  const std::string p = join(path, key);
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    fail(p, "expected [lo, hi]");
  }
  out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

// A bare number fills every loop; an object sets loops by key.
void read_per_loop(const Json& obj, std::string_view key, const std::string& path,
                   PerLoop<double>& out) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  const std::string p = join(path, key);
  if (it->is_number()) {
    out = PerLoop<double>::filled(it->get<double>());
    return;
  }
  if (!it->is_object()) fail(p, "expected a number or an object keyed by loop");
  for (const auto& [k, v] : it->items()) {
    Loop l;
    try {
      l = loop_from_key(k);
    } catch (const ValidationError&) {
      fail(join(p, k), "unknown loop (expected m_a, omega_e, mdot_f or T_exh)");
    }
    if (!v.is_number()) fail(join(p, k), "expected a number");
    out[l] = v.get<double>();
  }
}

template <typename E>
void read_enum(const Json& obj, std::string_view key, const std::string& path, E& out,
               std::initializer_list<std::pair<std::string_view, E>> names) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) return;
  if (!it->is_string()) fail(join(path, key), "expected a string");
  const std::string v = it->get<std::string>();
  std::string options;
  for (const auto& [name, value] : names) {
    if (name == v) {
      out = value;
      return;
    }
    options += (options.empty() ? "" : ", ") + std::string(name);
  }
  fail(join(path, key), "unknown value '" + v + "' (expected " + options + ")");
}

constexpr std::pair<std::string_view, HcSignConvention> kHcNames[] = {
    {"unburned_fraction", HcSignConvention::kUnburnedFraction},
    {"growing_exponent", HcSignConvention::kGrowingExponent}};
constexpr std::pair<std::string_view, QgenGrouping> kQgenNames[] = {
    {"fuel_times_exhaust", QgenGrouping::kFuelTimesExhaust}, {"grouped", QgenGrouping::kGrouped}};
constexpr std::pair<std::string_view, QinDirection> kQinNames[] = {
    {"into_catalyst", QinDirection::kIntoCatalyst}, {"out_of_catalyst", QinDirection::kOutOfCatalyst}};

template <typename E, std::size_t N>
std::string enum_name(E value, const std::pair<std::string_view, E> (&names)[N]) {
  for (const auto& [name, v] : names) {
    if (v == value) return std::string(name);
  }
  return "?";
}

void read_plant(const Json& j, const std::string& path, PlantConstants& c) {
  reject_unknown(j, path,
                 {"J", "alpha_f", "mCp", "a", "n", "theta_evo", "r_c", "AFR_st", "T_atm",
                  "mdot_f_floor", "hc_sign", "qgen_grouping", "qin_direction"});
  read_number(j, "J", path, c.J);
  read_number(j, "alpha_f", path, c.alpha_f);
  read_number(j, "mCp", path, c.mCp);
  read_number(j, "a", path, c.a);
  read_number(j, "n", path, c.n);
  read_number(j, "theta_evo", path, c.theta_evo);
  read_number(j, "r_c", path, c.r_c);
  read_number(j, "AFR_st", path, c.AFR_st);
  read_number(j, "T_atm", path, c.T_atm);
  read_number(j, "mdot_f_floor", path, c.mdot_f_floor);
  read_enum(j, "hc_sign", path, c.hc_sign, {kHcNames[0], kHcNames[1]});
  read_enum(j, "qgen_grouping", path, c.qgen_grouping, {kQgenNames[0], kQgenNames[1]});
  read_enum(j, "qin_direction", path, c.qin_direction, {kQinNames[0], kQinNames[1]});
}

void read_controller(const Json& j, const std::string& path, ControllerConfig& c) {
  reject_unknown(j, path,
                 {"beta", "rho", "phi_hat0", "adaptation_sign", "phi_hat_bounds",
                  "freeze_on_saturation", "bounds", "afi_floor"});
  read_per_loop(j, "beta", path, c.beta);
  read_per_loop(j, "rho", path, c.rho);
  read_per_loop(j, "phi_hat0", path, c.phi_hat0);
  read_number(j, "adaptation_sign", path, c.adaptation_sign);
  read_bounds(j, "phi_hat_bounds", path, c.phi_hat_bounds);
  read_bool(j, "freeze_on_saturation", path, c.freeze_on_saturation);
  read_number(j, "afi_floor", path, c.afi_floor);
  if (const auto it = j.find("bounds"); it != j.end()) {
    const std::string p = join(path, "bounds");
    reject_unknown(*it, p, {"mdot_ai", "mdot_fc", "delta"});
    read_bounds(*it, "mdot_ai", p, c.bounds.mdot_ai);
    read_bounds(*it, "mdot_fc", p, c.bounds.mdot_fc);
    read_bounds(*it, "delta", p, c.bounds.delta);
  }
}

Json per_loop_json(const PerLoop<double>& v) {
  Json out = Json::object();
  for (Loop l : kAllLoops) out[std::string(loop_key(l))] = v[l];
  return out;
}

Json bounds_json(const Bounds& b) { return Json::array({b.lo, b.hi}); }

Json state_json(const EngineState& x) {
  return Json{{"m_a", x.m_a},
              {"omega_e", x.omega_e},
              {"mdot_f", x.mdot_f},
              {"T_cat", x.T_cat},
              {"T_exh", x.T_exh}};
}

}  // namespace

ScenarioConfig config_from_json(const Json& j) {
  ScenarioConfig cfg;
  reject_unknown(j, "",
                 {"T", "duration", "quantization_enabled", "quant_bits", "signal_ranges",
                  "phi_true", "adaptation_enabled", "initial_state", "trajectory_file",
                  "controller", "plant", "substeps", "transport_delay", "metrics_window_start"});
  read_number(j, "T", "", cfg.T);
  read_number(j, "duration", "", cfg.duration);
  read_bool(j, "quantization_enabled", "", cfg.quantization_enabled);
  read_int(j, "quant_bits", "", cfg.quant_bits);
  if (const auto it = j.find("signal_ranges"); it != j.end()) {
    reject_unknown(*it, "signal_ranges", {"m_a", "omega_e", "mdot_f", "T_exh", "T_cat"});
    read_bounds(*it, "m_a", "signal_ranges", cfg.signal_ranges.m_a);
    read_bounds(*it, "omega_e", "signal_ranges", cfg.signal_ranges.omega_e);
    read_bounds(*it, "mdot_f", "signal_ranges", cfg.signal_ranges.mdot_f);
    read_bounds(*it, "T_exh", "signal_ranges", cfg.signal_ranges.T_exh);
    read_bounds(*it, "T_cat", "signal_ranges", cfg.signal_ranges.T_cat);
  }
  read_per_loop(j, "phi_true", "", cfg.phi_true);
  read_bool(j, "adaptation_enabled", "", cfg.controller.adaptation_enabled);
  if (const auto it = j.find("initial_state"); it != j.end()) {
    reject_unknown(*it, "initial_state", {"m_a", "omega_e", "mdot_f", "T_cat", "T_exh"});
    read_number(*it, "m_a", "initial_state", cfg.initial_state.m_a);
    read_number(*it, "omega_e", "initial_state", cfg.initial_state.omega_e);
    read_number(*it, "mdot_f", "initial_state", cfg.initial_state.mdot_f);
    read_number(*it, "T_cat", "initial_state", cfg.initial_state.T_cat);
    read_number(*it, "T_exh", "initial_state", cfg.initial_state.T_exh);
  }
  read_string(j, "trajectory_file", "", cfg.trajectory_file);
  if (const auto it = j.find("controller"); it != j.end()) {
    read_controller(*it, "controller", cfg.controller);
  }
  if (const auto it = j.find("plant"); it != j.end()) read_plant(*it, "plant", cfg.plant);
  read_int(j, "substeps", "", cfg.substeps);
  read_int(j, "transport_delay", "", cfg.transport_delay);
  read_number(j, "metrics_window_start", "", cfg.metrics_window_start);
  cfg.validate();
  return cfg;
}

Json config_to_json(const ScenarioConfig& cfg) {
  const ControllerConfig& c = cfg.controller;
  const PlantConstants& p = cfg.plant;
  Json j;
  j["T"] = cfg.T;
  j["duration"] = cfg.duration;
  j["quantization_enabled"] = cfg.quantization_enabled;
  j["quant_bits"] = cfg.quant_bits;
  j["signal_ranges"] = {{"m_a", bounds_json(cfg.signal_ranges.m_a)},
                        {"omega_e", bounds_json(cfg.signal_ranges.omega_e)},
                        {"mdot_f", bounds_json(cfg.signal_ranges.mdot_f)},
                        {"T_exh", bounds_json(cfg.signal_ranges.T_exh)},
                        {"T_cat", bounds_json(cfg.signal_ranges.T_cat)}};
  j["phi_true"] = per_loop_json(cfg.phi_true);
  j["adaptation_enabled"] = c.adaptation_enabled;
  j["initial_state"] = state_json(cfg.initial_state);
  j["trajectory_file"] = cfg.trajectory_file;
  j["controller"] = {{"beta", per_loop_json(c.beta)},
                     {"rho", per_loop_json(c.rho)},
                     {"phi_hat0", per_loop_json(c.phi_hat0)},
                     {"adaptation_sign", c.adaptation_sign},
                     {"phi_hat_bounds", bounds_json(c.phi_hat_bounds)},
                     {"freeze_on_saturation", c.freeze_on_saturation},
                     {"bounds",
                      {{"mdot_ai", bounds_json(c.bounds.mdot_ai)},
                       {"mdot_fc", bounds_json(c.bounds.mdot_fc)},
                       {"delta", bounds_json(c.bounds.delta)}}},
                     {"afi_floor", c.afi_floor}};
  j["plant"] = {{"J", p.J},
                {"alpha_f", p.alpha_f},
                {"mCp", p.mCp},
                {"a", p.a},
                {"n", p.n},
                {"theta_evo", p.theta_evo},
                {"r_c", p.r_c},
                {"AFR_st", p.AFR_st},
                {"T_atm", p.T_atm},
                {"mdot_f_floor", p.mdot_f_floor},
                {"hc_sign", enum_name(p.hc_sign, kHcNames)},
                {"qgen_grouping", enum_name(p.qgen_grouping, kQgenNames)},
                {"qin_direction", enum_name(p.qin_direction, kQinNames)}};
  j["substeps"] = cfg.substeps;
  j["transport_delay"] = cfg.transport_delay;
  j["metrics_window_start"] = cfg.metrics_window_start;
  return j;
}

void apply_override(Json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ValidationError("override '" + key + "': empty path segment");
    if (node->is_null()) *node = Json::object();  // missing section
    if (!node->is_object()) {
      // A scalar per-loop shorthand becomes an object when one loop is overridden.
      if (node->is_number()) {
        const double fill = node->get<double>();
        *node = Json::object();
        for (Loop l : kAllLoops) (*node)[std::string(loop_key(l))] = fill;
      } else {
        throw ValidationError("override '" + key + "': '" + part + "' is not inside an object");
      }
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

void apply_overrides(Json& j, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) apply_override(j, a);
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError(path.string() + ": malformed JSON");
  return j;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  Json j = load_json(path);
  apply_overrides(j, overrides);
  return config_from_json(j);
}

}  // namespace coldstart
