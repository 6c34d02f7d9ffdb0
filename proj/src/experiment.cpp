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

#include "coldstart/experiment.hpp"

#include <algorithm>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {

Simulation simulate(const ScenarioConfig& config, const Trajectory& trajectory) {
  Simulation sim;
  sim.record = run_scenario(config, trajectory);
  if (config.controller.adaptation_enabled) {
    ScenarioConfig off = config;
    off.controller.adaptation_enabled = false;
    sim.baseline = run_scenario(off, trajectory);
  }
  MetricsOptions options;
  options.window_start = config.metrics_window_start;
  sim.metrics = compute_metrics(sim.record, sim.baseline ? &*sim.baseline : nullptr, options);
  return sim;
}

Simulation simulate(const ScenarioConfig& config) {
  const Trajectory traj = config.trajectory_file.empty()
                              ? Trajectory::default_profile()
                              : Trajectory::from_csv(config.trajectory_file);
  return simulate(config, traj);
}

std::vector<std::vector<std::string>> expand_grid(const Json& grid) {
  if (!grid.is_object()) throw ValidationError("grid: expected an object");
  for (const auto& [key, _] : grid.items()) {
    if (key != "axes" && key != "cells") throw ValidationError("grid." + key + ": unknown key");
  }
  std::vector<std::vector<std::string>> cells;
  if (const auto it = grid.find("cells"); it != grid.end()) {
    if (!it->is_array()) throw ValidationError("grid.cells: expected an array");
    for (std::size_t c = 0; c < it->size(); ++c) {
      const Json& cell = (*it)[c];
      if (!cell.is_object()) {
        throw ValidationError("grid.cells[" + std::to_string(c) + "]: expected an object");
      }
      std::vector<std::string> o;
      for (const auto& [key, value] : cell.items()) o.push_back(key + "=" + value.dump());
      cells.push_back(std::move(o));
    }
  }
  if (const auto it = grid.find("axes"); it != grid.end()) {
    if (!it->is_object()) throw ValidationError("grid.axes: expected an object");
    if (it->empty()) return cells;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& [key, values] : it->items()) {
      if (!values.is_array()) throw ValidationError("grid.axes." + key + ": expected an array");
      if (values.empty()) return cells;  // product with an empty axis is empty
      std::vector<std::string> v;
      for (const auto& x : values) v.push_back(key + "=" + x.dump());
      axes.emplace_back(key, std::move(v));
    }
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      std::vector<std::string> o;
      for (std::size_t a = 0; a < axes.size(); ++a) o.push_back(axes[a].second[idx[a]]);
      cells.push_back(std::move(o));
      std::size_t a = axes.size();
      while (a > 0) {
        --a;
        if (++idx[a] < axes[a].second.size()) break;
        idx[a] = 0;
        if (a == 0) return cells;
      }
    }
  }
  return cells;
}

namespace {

CellResult run_cell(const Json& config_template, const std::vector<std::string>& overrides) {
  CellResult out;
  out.overrides = overrides;
  try {
    Json j = config_template;
    apply_overrides(j, overrides);
    out.metrics = simulate(config_from_json(j)).metrics;
  } catch (const RuntimeAbort& e) {
    out.error = std::string("runtime abort at step ") + std::to_string(e.step()) + " (" +
                e.loop() + "): " + e.what();
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<CellResult> run_sweep(const Json& config_template,
                                  const std::vector<std::vector<std::string>>& cells) {
  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(run_cell(config_template, c));
  return out;
}

std::vector<CellResult> run_sweep_parallel(const Json& config_template,
                                           const std::vector<std::vector<std::string>>& cells) {
  std::vector<CellResult> out(cells.size());
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_cell(config_template, cells[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string sweep_to_csv(const std::vector<CellResult>& results) {
  std::vector<std::string> header = {"cell", "overrides"};
  const auto& mh = metrics_csv_header();
  header.insert(header.end(), mh.begin(), mh.end());
  header.emplace_back("error");
  csv::Writer w(header);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CellResult& r = results[i];
    std::string joined;
    for (const auto& o : r.overrides) joined += (joined.empty() ? "" : ";") + o;
    // Keep the CSV one field per column.
    std::replace(joined.begin(), joined.end(), ',', ' ');
    std::vector<std::string> f = {std::to_string(i), joined};
    if (r.metrics) {
      const auto m = metrics_csv_fields(*r.metrics);
      f.insert(f.end(), m.begin(), m.end());
    } else {
      f.resize(f.size() + mh.size());
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    f.push_back(err);
    w.add_row(std::move(f));
  }
  return w.str();
}

}  // namespace coldstart
