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

#include "coldstart/run_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {
namespace {

struct Column {
  std::string name;
  std::function<double(const RunRow&)> get;
  std::function<void(RunRow&, double)> set;
};

Column number(std::string name, double& (*ref)(RunRow&)) {
  return {std::move(name), [ref](const RunRow& r) { return ref(const_cast<RunRow&>(r)); },
          [ref](RunRow& r, double v) { ref(r) = v; }};
}

Column flag(std::string name, bool& (*ref)(RunRow&)) {
  return {std::move(name),
          [ref](const RunRow& r) { return ref(const_cast<RunRow&>(r)) ? 1.0 : 0.0; },
          [ref](RunRow& r, double v) { ref(r) = v != 0.0; }};
}

template <Loop L>
void add_loop_columns(std::vector<Column>& cols) {
  const std::string key(loop_key(L));
  cols.push_back(number("xi_" + key, [](RunRow& r) -> double& { return r.ctrl.xi[L]; }));
  cols.push_back(number("phi_hat_" + key, [](RunRow& r) -> double& { return r.ctrl.phi_hat[L]; }));
  cols.push_back(number("f_" + key, [](RunRow& r) -> double& { return r.ctrl.f[L]; }));
  cols.push_back(number("phi_true_" + key, [](RunRow& r) -> double& { return r.phi_true[L]; }));
  cols.push_back(number("resid_" + key, [](RunRow& r) -> double& { return r.residual[L]; }));
  cols.push_back(flag("frozen_" + key, [](RunRow& r) -> bool& { return r.ctrl.frozen[L]; }));
}

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = [] {
    std::vector<Column> c;
    c.push_back(number("t", [](RunRow& r) -> double& { return r.t; }));
    c.push_back(number("m_a", [](RunRow& r) -> double& { return r.x.m_a; }));
    c.push_back(number("omega_e", [](RunRow& r) -> double& { return r.x.omega_e; }));
    c.push_back(number("mdot_f", [](RunRow& r) -> double& { return r.x.mdot_f; }));
    c.push_back(number("T_cat", [](RunRow& r) -> double& { return r.x.T_cat; }));
    c.push_back(number("T_exh", [](RunRow& r) -> double& { return r.x.T_exh; }));
    c.push_back(number("fb_m_a", [](RunRow& r) -> double& { return r.feedback.m_a; }));
    c.push_back(number("fb_omega_e", [](RunRow& r) -> double& { return r.feedback.omega_e; }));
    c.push_back(number("fb_mdot_f", [](RunRow& r) -> double& { return r.feedback.mdot_f; }));
    c.push_back(number("fb_T_cat", [](RunRow& r) -> double& { return r.feedback.T_cat; }));
    c.push_back(number("fb_T_exh", [](RunRow& r) -> double& { return r.feedback.T_exh; }));
    c.push_back(number("mdot_ai", [](RunRow& r) -> double& { return r.u.mdot_ai; }));
    c.push_back(number("mdot_fc", [](RunRow& r) -> double& { return r.u.mdot_fc; }));
    c.push_back(number("delta", [](RunRow& r) -> double& { return r.u.delta; }));
    c.push_back(number("cmd_mdot_ai", [](RunRow& r) -> double& { return r.ctrl.command.mdot_ai; }));
    c.push_back(number("cmd_mdot_fc", [](RunRow& r) -> double& { return r.ctrl.command.mdot_fc; }));
    c.push_back(number("cmd_delta", [](RunRow& r) -> double& { return r.ctrl.command.delta; }));
    c.push_back(number("raw_mdot_ai", [](RunRow& r) -> double& { return r.ctrl.raw.mdot_ai; }));
    c.push_back(number("raw_mdot_fc", [](RunRow& r) -> double& { return r.ctrl.raw.mdot_fc; }));
    c.push_back(number("raw_delta", [](RunRow& r) -> double& { return r.ctrl.raw.delta; }));
    c.push_back(number("m_a_d", [](RunRow& r) -> double& { return r.ctrl.m_a_d; }));
    c.push_back(number("m_a_d_next", [](RunRow& r) -> double& { return r.ctrl.m_a_d_next; }));
    c.push_back(number("afr_d", [](RunRow& r) -> double& { return r.desired.afr_d; }));
    c.push_back(number("omega_d", [](RunRow& r) -> double& { return r.desired.omega_d; }));
    c.push_back(number("T_exh_d", [](RunRow& r) -> double& { return r.desired.T_exh_d; }));
    c.push_back(number("s1", [](RunRow& r) -> double& { return r.ctrl.surfaces.s1; }));
    c.push_back(number("s2", [](RunRow& r) -> double& { return r.ctrl.surfaces.s2; }));
    c.push_back(number("s3", [](RunRow& r) -> double& { return r.ctrl.surfaces.s3; }));
    c.push_back(number("s4", [](RunRow& r) -> double& { return r.ctrl.surfaces.s4; }));
    c.push_back(number("afr_error", [](RunRow& r) -> double& { return r.ctrl.surfaces.afr_error; }));
    add_loop_columns<Loop::kAirMass>(c);
    add_loop_columns<Loop::kSpeed>(c);
    add_loop_columns<Loop::kFuel>(c);
    add_loop_columns<Loop::kExhaust>(c);
    c.push_back(number("afr", [](RunRow& r) -> double& { return r.emission.afr; }));
    c.push_back(number("hc_eng", [](RunRow& r) -> double& { return r.emission.hc_eng; }));
    c.push_back(number("eta_cat", [](RunRow& r) -> double& { return r.emission.eta_cat; }));
    c.push_back(number("hc_tp", [](RunRow& r) -> double& { return r.emission.hc_tp; }));
    c.push_back(number("hc_cum", [](RunRow& r) -> double& { return r.hc_cum; }));
    c.push_back(flag("sat_mdot_ai", [](RunRow& r) -> bool& { return r.ctrl.saturated.mdot_ai; }));
    c.push_back(flag("sat_mdot_fc", [](RunRow& r) -> bool& { return r.ctrl.saturated.mdot_fc; }));
    c.push_back(flag("sat_delta", [](RunRow& r) -> bool& { return r.ctrl.saturated.delta; }));
    c.push_back(flag("afi_hold", [](RunRow& r) -> bool& { return r.ctrl.afi_hold; }));
    return c;
  }();
  return cols;
}

}  // namespace

const std::vector<std::string>& run_csv_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h;
    for (const auto& c : columns()) h.push_back(c.name);
    h.emplace_back("adaptation");
    return h;
  }();
  return header;
}

std::string run_to_csv(const RunRecord& record) {
  csv::Writer w(run_csv_header());
  const std::string adaptation = record.adaptation_enabled ? "1" : "0";
  for (const RunRow& row : record.rows) {
    std::vector<std::string> fields;
    fields.reserve(columns().size() + 1);
    for (const auto& c : columns()) fields.push_back(csv::format_double(c.get(row)));
    fields.push_back(adaptation);
    w.add_row(std::move(fields));
  }
  return w.str();
}

void write_run_csv(const RunRecord& record, const std::filesystem::path& path) {
  csv::write_text(path, run_to_csv(record));
}

RunRecord run_from_csv_text(std::string_view text, std::string_view source) {
  const csv::Table table = csv::parse(text, source);
  std::vector<std::size_t> index;
  for (const auto& c : columns()) {
    const auto i = table.find(c.name);
    if (!i) throw ValidationError(std::string(source) + ": missing column '" + c.name + "'");
    index.push_back(*i);
  }
  const auto adapt_col = table.find("adaptation");

  RunRecord rec;
  rec.rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    RunRow row;
    for (std::size_t c = 0; c < columns().size(); ++c) {
      if (index[c] >= fields.size()) {
        throw ValidationError(std::string(source) + ": row " + std::to_string(r + 1) +
                              " is short");
      }
      columns()[c].set(row, csv::parse_double(fields[index[c]], columns()[c].name));
    }
    if (adapt_col && *adapt_col < fields.size()) {
      rec.adaptation_enabled = fields[*adapt_col] != "0";
    }
    rec.rows.push_back(std::move(row));
  }
  if (rec.rows.size() >= 2) rec.T = rec.rows[1].t - rec.rows[0].t;
  return rec;
}

RunRecord read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return run_from_csv_text(ss.str(), path.string());
}

void write_events_csv(const RunRecord& record, const std::filesystem::path& path) {
  csv::Writer w({"step", "t", "kind", "detail"});
  for (const auto& e : record.events) {
    w.add_row({std::to_string(e.step), csv::format_double(static_cast<double>(e.step) * record.T),
               e.kind, e.detail});
  }
  w.save(path);
}

}  // namespace coldstart
