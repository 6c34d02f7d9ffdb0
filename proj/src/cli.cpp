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

#include "coldstart/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "coldstart/config.hpp"
#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"
#include "coldstart/experiment.hpp"
#include "coldstart/identify.hpp"
#include "coldstart/metrics.hpp"
#include "coldstart/rga.hpp"
#include "coldstart/run_io.hpp"
#include "coldstart/svg.hpp"

namespace coldstart::cli {
namespace {

namespace fs = std::filesystem;

enum class Level { kQuiet = 0, kInfo = 1, kDebug = 2 };

Level log_level() {
  const char* v = std::getenv("COLDSTART_LOG");
  if (!v) return Level::kInfo;
  const std::string s(v);
  if (s == "quiet") return Level::kQuiet;
  if (s == "debug") return Level::kDebug;
  return Level::kInfo;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
  void info(const std::string& msg) const {
    if (level_ >= Level::kInfo) err_ << "[info] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level_ >= Level::kDebug) err_ << "[debug] " << msg << "\n";
  }
  void warn(const std::string& msg) const {
    if (level_ >= Level::kInfo) err_ << "[warn] " << msg << "\n";
  }

 private:
  std::ostream& err_;
  Level level_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("cannot create output directory '" + dir.string() + "'");
  }
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) {
    throw ValidationError(std::string(what) + ": '" + p.string() + "' does not exist");
  }
}

std::vector<double> column_of(const RunRecord& r, double (*get)(const RunRow&)) {
  std::vector<double> v;
  v.reserve(r.rows.size());
  for (const auto& row : r.rows) v.push_back(get(row));
  return v;
}

void write_run_plots(const RunRecord& r, const fs::path& dir) {
  const auto t = column_of(r, [](const RunRow& w) { return w.t; });
  auto chart = [&](std::string title, std::string y_label, std::vector<svg::Series> s) {
    return svg::Chart{std::move(title), "t [s]", std::move(y_label), std::move(s), false};
  };
  svg::save(chart("AFR tracking", "AFR [-]",
                  {{"afr", t, column_of(r, [](const RunRow& w) { return w.emission.afr; })},
                   {"afr_d", t, column_of(r, [](const RunRow& w) { return w.desired.afr_d; })}}),
            dir / "afr.svg");
  svg::save(chart("Engine speed tracking", "omega_e [rad/s]",
                  {{"omega_e", t, column_of(r, [](const RunRow& w) { return w.x.omega_e; })},
                   {"omega_d", t, column_of(r, [](const RunRow& w) { return w.desired.omega_d; })}}),
            dir / "omega_e.svg");
  svg::save(chart("Exhaust temperature tracking", "T_exh [degC]",
                  {{"T_exh", t, column_of(r, [](const RunRow& w) { return w.x.T_exh; })},
                   {"T_exh_d", t, column_of(r, [](const RunRow& w) { return w.desired.T_exh_d; })},
                   {"T_cat", t, column_of(r, [](const RunRow& w) { return w.x.T_cat; })}}),
            dir / "T_exh.svg");
  std::vector<svg::Series> phi;
  for (Loop l : kAllLoops) {
    std::vector<double> v;
    for (const auto& w : r.rows) v.push_back(w.ctrl.phi_hat[l] / w.phi_true[l]);
    phi.push_back({"phi_hat/phi " + std::string(loop_key(l)), t, v});
  }
  svg::save(chart("Normalised uncertainty estimates", "phi_hat / phi_true [-]", phi),
            dir / "phi_hat.svg");
  svg::save(chart("HC rates", "[kg/s]",
                  {{"hc_eng", t, column_of(r, [](const RunRow& w) { return w.emission.hc_eng; })},
                   {"hc_tp", t, column_of(r, [](const RunRow& w) { return w.emission.hc_tp; })}}),
            dir / "hc_rates.svg");
  svg::save(chart("Cumulative tailpipe HC", "[g]",
                  {{"hc_cum", t, column_of(r, [](const RunRow& w) { return 1000.0 * w.hc_cum; })}}),
            dir / "hc_cum.svg");
  svg::save(chart("Catalyst efficiency", "eta_cat [-]",
                  {{"eta_cat", t, column_of(r, [](const RunRow& w) { return w.emission.eta_cat; })}}),
            dir / "eta_cat.svg");
}

int cmd_simulate(const std::string& config_path, const std::string& trajectory_path,
                 const std::string& out_dir, const std::vector<std::string>& overrides,
                 bool plots, std::ostream& out, const Log& log) {
  Json j = Json::object();
  if (!config_path.empty()) {
    require_file(config_path, "--config");
    j = load_json(config_path);
  }
  apply_overrides(j, overrides);
  if (!trajectory_path.empty()) {
    require_file(trajectory_path, "--trajectory");
    j["trajectory_file"] = trajectory_path;
  }
  const ScenarioConfig cfg = config_from_json(j);
  ensure_dir(out_dir);
  log.info("simulating " + csv::format_double(cfg.duration) + " s at T = " +
           csv::format_double(cfg.T) + " s");
  const Simulation sim = simulate(cfg);

  const fs::path dir(out_dir);
  write_run_csv(sim.record, dir / "run.csv");
  write_events_csv(sim.record, dir / "events.csv");
  if (sim.baseline) write_run_csv(*sim.baseline, dir / "baseline_run.csv");
  write_metrics_text(sim.metrics, dir / "metrics.txt");
  csv::write_text(dir / "scenario.json", config_to_json(cfg).dump(2) + "\n");
  Json meta{{"config_file", config_path},
            {"trajectory_file", cfg.trajectory_file},
            {"overrides", overrides}};
  csv::write_text(dir / "run_meta.json", meta.dump(2) + "\n");
  if (plots) write_run_plots(sim.record, dir);
  log.debug(std::to_string(sim.record.events.size()) + " events logged");
  out << metrics_to_text(sim.metrics);
  return kExitOk;
}

int cmd_metrics(const std::string& run_path, const std::string& baseline_path, double window,
                const std::string& out_file, std::ostream& out) {
  require_file(run_path, "--run");
  const RunRecord run = read_run_csv(run_path);
  std::optional<RunRecord> base;
  if (!baseline_path.empty()) {
    require_file(baseline_path, "--baseline");
    base = read_run_csv(baseline_path);
  }
  MetricsOptions options;
  options.window_start = window;
  const MetricsSummary m = compute_metrics(run, base ? &*base : nullptr, options);
  if (!out_file.empty()) write_metrics_text(m, out_file);
  out << metrics_to_text(m);
  return kExitOk;
}

int cmd_rga(const std::string& model_path, double wmin, double wmax, std::size_t points,
            double condition_limit, const std::string& out_dir, bool plots, std::ostream& out,
            const Log& log) {
  require_file(model_path, "--model");
  const TFMatrix model = load_tf_matrix(model_path);
  const RgaResult r = rga_sweep_parallel(model, log_grid(wmin, wmax, points), condition_limit);
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  csv::write_text(dir / "rga.csv", rga_to_csv(r));
  csv::write_text(dir / "rga_summary.csv", rga_summary_csv(r));
  if (plots) {
    svg::Chart c{"RGA magnitude", "omega [rad/s]", "|lambda_ij| [dB]", {}, true};
    const auto n = r.dominance.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < n; ++k) {
        std::vector<double> db;
        for (const auto& l : r.lambda) db.push_back(l ? magnitude_db((*l)(i, k)) : NAN);
        c.series.push_back({"lambda" + std::to_string(i + 1) + std::to_string(k + 1), r.omega, db});
      }
    }
    svg::save(c, dir / "rga.svg");
  }
  out << rga_summary_csv(r);
  if (r.gaps() > 0) {
    for (std::size_t k = 0; k < r.omega.size(); ++k) {
      if (!r.lambda[k]) log.warn("gap at omega = " + csv::format_double(r.omega[k]) + ": " + r.gap_reason[k]);
    }
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_identify(const std::string& data_path, const std::string& pairs, double T,
                 const std::string& out_dir, std::ostream& out, const Log& log) {
  require_file(data_path, "--data");
  const csv::Table data = csv::read(data_path);
  if (!(T > 0.0)) {
    const char* name = data.find("time") ? "time" : "t";
    if (!data.find(name) || data.rows.size() < 2) {
      throw ValidationError("--T not given and the data has no usable 'time' or 't' column");
    }
    const std::vector<double> t = data.column(name);
    T = t[1] - t[0];
    log.info("sample time from data: " + csv::format_double(T) + " s");
  }
  const MimoFit fit = identify_mimo(data, parse_pair_specs(pairs), T);
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  csv::write_text(dir / "model.csv", mimo_model_csv(fit));
  csv::write_text(dir / "fit_report.csv", mimo_report_csv(fit));
  if (fit.complete()) csv::write_text(dir / "model.json", tf_matrix_to_json(fit.model));
  out << mimo_report_csv(fit);
  for (const auto& r : fit.reports) {
    if (r.status == PairStatus::kError) log.warn(r.message);
    else if (!r.message.empty()) log.info(r.message);
  }
  return fit.complete() ? kExitOk : kExitPartial;
}

int cmd_sweep(const std::string& template_path, const std::string& grid_path,
              const std::string& out_dir, bool serial, std::ostream& out, const Log& log) {
  require_file(template_path, "--template");
  require_file(grid_path, "--grid");
  const Json tmpl = load_json(template_path);
  config_from_json(tmpl);  // fail fast on a bad template
  const auto cells = expand_grid(load_json(grid_path));
  log.info(std::to_string(cells.size()) + " cells");
  const auto results = serial ? run_sweep(tmpl, cells) : run_sweep_parallel(tmpl, cells);
  ensure_dir(out_dir);
  const std::string text = sweep_to_csv(results);
  csv::write_text(fs::path(out_dir) / "sweep.csv", text);
  out << text;
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const CellResult& r) { return !r.error.empty(); });
  if (failed > 0) {
    log.warn(std::to_string(failed) + " cell(s) failed; see the error column");
    return kExitPartial;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Log log(err);
  CLI::App app{"Cold-start engine DSMC laboratory"};
  app.name("coldstart");
  app.require_subcommand(1);

  std::string config, trajectory, out_dir, run_path, baseline, model, data, pairs, tmpl, grid,
      metrics_out;
  std::vector<std::string> overrides;
  bool no_plots = false, serial = false;
  double wmin = 1e-2, wmax = 1e2, window = 5.0, T = 0.0, cond = kDefaultConditionLimit;
  std::size_t points = 200;

  auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
  sim->add_option("--config", config, "Scenario JSON (defaults when omitted)");
  sim->add_option("--trajectory", trajectory, "Trajectory CSV (time,afr_d,omega_d,T_exh_d)");
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->add_option("--override", overrides, "Dotted key=value applied after parsing");
  sim->add_flag("--no-plots", no_plots, "Skip SVG output");

  auto* rga = app.add_subcommand("rga", "Frequency-swept relative gain array");
  rga->add_option("--model", model, "TF matrix (.csv or .json)")->required();
  rga->add_option("--wmin", wmin, "Lowest frequency [rad/s]");
  rga->add_option("--wmax", wmax, "Highest frequency [rad/s]");
  rga->add_option("--points", points, "Log-spaced points");
  rga->add_option("--cond-limit", cond, "1-norm condition number limit");
  rga->add_option("--out", out_dir, "Output directory")->required();
  rga->add_flag("--no-plots", no_plots, "Skip SVG output");

  auto* ident = app.add_subcommand("identify", "Fit first-order sub-models");
  ident->add_option("--data", data, "Time-series CSV with header")->required();
  ident->add_option("--pairs", pairs, "i.j=ycol/ucol[,...] (1-based)")->required();
  ident->add_option("--T", T, "Sample time [s]; inferred from a 'time' or 't' column when omitted");
  ident->add_option("--out", out_dir, "Output directory")->required();

  auto* met = app.add_subcommand("metrics", "Summarise a run CSV");
  met->add_option("--run", run_path, "run.csv")->required();
  met->add_option("--baseline", baseline, "Paired non-adaptive run.csv");
  met->add_option("--window", window, "Window start [s]");
  met->add_option("--out", metrics_out, "Also write key=value text here");

  auto* sweep = app.add_subcommand("sweep", "Batch runs over an override grid");
  sweep->add_option("--template", tmpl, "Scenario JSON template")->required();
  sweep->add_option("--grid", grid, "Grid JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_flag("--serial", serial, "Run cells one at a time");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*sim) return cmd_simulate(config, trajectory, out_dir, overrides, !no_plots, out, log);
    if (*rga) return cmd_rga(model, wmin, wmax, points, cond, out_dir, !no_plots, out, log);
    if (*ident) return cmd_identify(data, pairs, T, out_dir, out, log);
    if (*met) return cmd_metrics(run_path, baseline, window, metrics_out, out);
    if (*sweep) return cmd_sweep(tmpl, grid, out_dir, serial, out, log);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const RuntimeAbort& e) {
    err << "runtime abort at step " << e.step() << " (" << e.loop() << "): " << e.what() << "\n";
    return kExitRuntime;
  } catch (const IdentificationError& e) {
    err << "identification error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const SingularMatrixError& e) {
    err << "singular matrix: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "unexpected failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace coldstart::cli
