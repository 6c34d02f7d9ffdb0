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

#include "coldstart/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {

std::string_view output_key(Output o) {
  switch (o) {
    case Output::kAfr:
      return "afr";
    case Output::kSpeed:
      return "omega_e";
    case Output::kExhaust:
      return "T_exh";
  }
  return "?";
}

std::string_view convergence_note_key(ConvergenceNote n) {
  switch (n) {
    case ConvergenceNote::kConverged:
      return "converged";
    case ConvergenceNote::kNominal:
      return "nominal";
    case ConvergenceNote::kAdaptationOff:
      return "adaptation_off";
    case ConvergenceNote::kNotConverged:
      return "not_converged";
  }
  return "?";
}

namespace {

double surface(const RunRow& r, Loop l) {
  switch (l) {
    case Loop::kFuel:
      return r.ctrl.surfaces.s1;
    case Loop::kSpeed:
      return r.ctrl.surfaces.s2;
    case Loop::kExhaust:
      return r.ctrl.surfaces.s3;
    case Loop::kAirMass:
      return r.ctrl.surfaces.s4;
  }
  return 0.0;
}

double tracking_error(const RunRow& r, Output o) {
  switch (o) {
    case Output::kAfr:
      return r.emission.afr - r.desired.afr_d;
    case Output::kSpeed:
      return r.x.omega_e - r.desired.omega_d;
    case Output::kExhaust:
      return r.x.T_exh - r.desired.T_exh_d;
  }
  return 0.0;
}

bool in_window(const RunRow& r, double start) { return r.t >= start - 1e-9; }

void check_grid(const RunRecord& a, const RunRecord& b) {
  if (a.rows.size() != b.rows.size()) {
    throw ValidationError("paired runs: " + std::to_string(a.rows.size()) + " vs " +
                          std::to_string(b.rows.size()) + " samples");
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double ta = a.rows[i].t;
    const double tb = b.rows[i].t;
    if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(ta))) {
      throw ValidationError("paired runs: time grids differ at row " + std::to_string(i));
    }
  }
}

double mean_abs_surface(const RunRecord& rec, Loop l, double start) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RunRow& r : rec.rows) {
    if (!in_window(r, start)) continue;
    sum += std::abs(surface(r, l));
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double mean_abs_residual(const RunRecord& rec, Loop l, double start) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RunRow& r : rec.rows) {
    if (!in_window(r, start)) continue;
    sum += std::abs(r.residual[l]);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

std::optional<double> improvement(double adaptive, double baseline) {
  if (!(baseline > 0.0)) return std::nullopt;
  return std::clamp(1.0 - adaptive / baseline, 0.0, 1.0);
}

std::string opt(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string("absent");
}

}  // namespace

MetricsSummary compute_metrics(const RunRecord& record, const RunRecord* baseline,
                               const MetricsOptions& options) {
  MetricsSummary m;
  m.window_start = options.window_start;
  if (baseline) check_grid(record, *baseline);

  // Tracking statistics over the window.
  std::array<double, 3> sum{}, sum_abs{};
  for (const RunRow& r : record.rows) {
    if (!in_window(r, options.window_start)) continue;
    ++m.samples;
    for (Output o : kAllOutputs) {
      const double e = tracking_error(r, o);
      sum[static_cast<std::size_t>(o)] += e;
      sum_abs[static_cast<std::size_t>(o)] += std::abs(e);
    }
  }
  if (m.samples > 0) {
    const double n = static_cast<double>(m.samples);
    for (Output o : kAllOutputs) {
      const auto i = static_cast<std::size_t>(o);
      m.tracking[i].mean = sum[i] / n;
      m.tracking[i].mean_abs = sum_abs[i] / n;
    }
    std::array<double, 3> ss{};
    for (const RunRow& r : record.rows) {
      if (!in_window(r, options.window_start)) continue;
      for (Output o : kAllOutputs) {
        const auto i = static_cast<std::size_t>(o);
        const double d = tracking_error(r, o) - m.tracking[i].mean;
        ss[i] += d * d;
      }
    }
    for (Output o : kAllOutputs) {
      const auto i = static_cast<std::size_t>(o);
      m.tracking[i].stddev = std::sqrt(ss[i] / n);
    }
  }
  for (Loop l : kAllLoops) m.mean_abs_surface[l] = mean_abs_surface(record, l, options.window_start);

  // Convergence of the normalised estimate phi_hat / phi_true.
  for (Loop l : kAllLoops) {
    if (!record.adaptation_enabled) {
      m.convergence_note[l] = ConvergenceNote::kAdaptationOff;
      continue;
    }
    if (record.rows.empty() || record.rows.front().phi_true[l] == 1.0) {
      m.convergence_note[l] = ConvergenceNote::kNominal;
      continue;
    }
    std::optional<double> since;
    for (const RunRow& r : record.rows) {
      const bool inside = std::abs(r.ctrl.phi_hat[l] / r.phi_true[l] - 1.0) <= options.band;
      if (!inside) {
        since.reset();
      } else if (!since) {
        since = r.t;
      }
    }
    m.convergence_time[l] = since;
    m.convergence_note[l] = since ? ConvergenceNote::kConverged : ConvergenceNote::kNotConverged;
  }

  if (!record.rows.empty()) {
    m.hc_cumulative = record.rows.back().hc_cum;
    m.final_eta = record.rows.back().emission.eta_cat;
  }
  for (const RunRow& r : record.rows) {
    if (r.emission.eta_cat >= options.light_off_eta) {
      m.light_off_time = r.t;
      break;
    }
  }

  if (baseline && record.adaptation_enabled && m.samples > 0) {
    double worst = 1.0;
    bool any = false;
    for (Loop l : kAllLoops) {
      m.removal_ratio[l] = improvement(mean_abs_residual(record, l, options.window_start),
                                       mean_abs_residual(*baseline, l, options.window_start));
      m.tracking_improvement[l] =
          improvement(mean_abs_surface(record, l, options.window_start),
                      mean_abs_surface(*baseline, l, options.window_start));
      if (m.removal_ratio[l]) {
        worst = std::min(worst, *m.removal_ratio[l]);
        any = true;
      }
    }
    if (any) m.removal_ratio_min = worst;
  }
  return m;
}

const std::vector<std::string>& metrics_csv_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h = {"window_start", "samples"};
    for (Output o : kAllOutputs) {
      const std::string k(output_key(o));
      h.push_back("mean_err_" + k);
      h.push_back("std_err_" + k);
      h.push_back("mean_abs_err_" + k);
    }
    for (Loop l : kAllLoops) h.push_back("mean_abs_s_" + std::string(loop_key(l)));
    for (Loop l : kAllLoops) h.push_back("convergence_time_" + std::string(loop_key(l)));
    for (Loop l : kAllLoops) h.push_back("convergence_note_" + std::string(loop_key(l)));
    h.insert(h.end(), {"hc_cumulative_kg", "light_off_time", "final_eta_cat"});
    for (Loop l : kAllLoops) h.push_back("removal_ratio_" + std::string(loop_key(l)));
    h.push_back("removal_ratio_min");
    for (Loop l : kAllLoops) h.push_back("tracking_improvement_" + std::string(loop_key(l)));
    return h;
  }();
  return header;
}

std::vector<std::string> metrics_csv_fields(const MetricsSummary& m) {
  std::vector<std::string> f = {csv::format_double(m.window_start), std::to_string(m.samples)};
  for (Output o : kAllOutputs) {
    const ErrorStats& s = m.tracking[static_cast<std::size_t>(o)];
    f.push_back(csv::format_double(s.mean));
    f.push_back(csv::format_double(s.stddev));
    f.push_back(csv::format_double(s.mean_abs));
  }
  for (Loop l : kAllLoops) f.push_back(csv::format_double(m.mean_abs_surface[l]));
  for (Loop l : kAllLoops) f.push_back(opt(m.convergence_time[l]));
  for (Loop l : kAllLoops) f.emplace_back(convergence_note_key(m.convergence_note[l]));
  f.push_back(csv::format_double(m.hc_cumulative));
  f.push_back(opt(m.light_off_time));
  f.push_back(csv::format_double(m.final_eta));
  for (Loop l : kAllLoops) f.push_back(opt(m.removal_ratio[l]));
  f.push_back(opt(m.removal_ratio_min));
  for (Loop l : kAllLoops) f.push_back(opt(m.tracking_improvement[l]));
  return f;
}

std::string metrics_to_text(const MetricsSummary& m) {
  const auto& header = metrics_csv_header();
  const auto fields = metrics_csv_fields(m);
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += header[i] + "=" + fields[i] + "\n";
  return out;
}

void write_metrics_text(const MetricsSummary& m, const std::filesystem::path& path) {
  csv::write_text(path, metrics_to_text(m));
}

}  // namespace coldstart
