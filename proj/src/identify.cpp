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

#include "coldstart/identify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "coldstart/errors.hpp"

namespace coldstart {
namespace {

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= 1e-14 * std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
}

double peak(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double v) { return csv::format_double(v); }

}  // namespace

FirstOrderFit identify_first_order(std::span<const double> u, std::span<const double> y,
                                   double T, const IdentifyOptions& options) {
  if (u.size() != y.size()) {
    throw IdentificationError("input and output lengths differ (" + std::to_string(u.size()) +
                              " vs " + std::to_string(y.size()) + ")");
  }
  if (u.size() < std::max<std::size_t>(options.min_samples, 3)) {
    throw IdentificationError("need at least " + std::to_string(options.min_samples) +
                              " samples, got " + std::to_string(u.size()));
  }
  if (!(T > 0.0)) throw IdentificationError("sample time must be > 0");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(y[i])) {
      throw IdentificationError("non-finite sample at row " + std::to_string(i + 1));
    }
  }
  if (peak(u) == 0.0) throw IdentificationError("input is identically zero (no excitation)");

  const auto m = static_cast<Eigen::Index>(u.size() - 1);
  Eigen::MatrixXd phi(m, 2);
  Eigen::VectorXd target(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto i = static_cast<std::size_t>(k);
    phi(k, 0) = y[i];
    phi(k, 1) = u[i];
    target(k) = y[i + 1];
  }

  // Rank check on column-normalised regressors.
  Eigen::MatrixXd scaled = phi;
  for (Eigen::Index c = 0; c < 2; ++c) {
    const double nrm = scaled.col(c).norm();
    if (nrm > 0.0) scaled.col(c) /= nrm;
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(scaled).singularValues();
  if (!(sv(1) > options.rank_tolerance * sv(0))) {
    if (is_constant(u) && is_constant(y) && y[0] != 0.0) {
      // Only the static gain is observable.
      FirstOrderFit fit;
      fit.tf = {0.0, u[0] / y[0]};
      fit.tau_identifiable = false;
      fit.a = std::nan("");
      fit.b = std::nan("");
      return fit;
    }
    throw IdentificationError("regressors are collinear (singular-value ratio " +
                              fmt(sv(1) / sv(0)) + "); input lacks persistent excitation");
  }

  const Eigen::Vector2d theta = phi.colPivHouseholderQr().solve(target);
  FirstOrderFit fit;
  fit.a = theta(0);
  fit.b = theta(1);
  if (!(fit.a > 0.0 && fit.a < 1.0)) {
    throw IdentificationError("discrete pole a = " + fmt(fit.a) +
                              " outside (0, 1); no stable first-order continuous equivalent");
  }
  const double gain = fit.b / (1.0 - fit.a);
  if (!(gain != 0.0) || !std::isfinite(gain)) {
    throw IdentificationError("DC gain b/(1-a) = " + fmt(gain) + " is not usable");
  }
  const double pole = -std::log(fit.a) / T;
  fit.tf.k = 1.0 / gain;
  fit.tf.tau = fit.tf.k / pole;
  fit.residual_rms = std::sqrt((phi * theta - target).squaredNorm() / static_cast<double>(m));
  return fit;
}

std::vector<PairSpec> parse_pair_specs(std::string_view text) {
  std::vector<PairSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item =
        text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start);
    start = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const std::string s(item);
    const auto eq = s.find('=');
    const auto dot = s.find('.');
    const auto slash = s.find('/', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || dot == std::string::npos || dot > eq ||
        slash == std::string::npos) {
      throw ValidationError("pair spec '" + s + "': expected i.j=ycol/ucol");
    }
    PairSpec p;
    try {
      const int i = std::stoi(s.substr(0, dot));
      const int j = std::stoi(s.substr(dot + 1, eq - dot - 1));
      if (i < 1 || j < 1) throw std::out_of_range("index");
      p.i = static_cast<std::size_t>(i - 1);
      p.j = static_cast<std::size_t>(j - 1);
    } catch (const std::exception&) {
      throw ValidationError("pair spec '" + s + "': indices must be positive integers");
    }
    p.y_column = s.substr(eq + 1, slash - eq - 1);
    p.u_column = s.substr(slash + 1);
    if (p.y_column.empty() || p.u_column.empty()) {
      throw ValidationError("pair spec '" + s + "': empty column name");
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw ValidationError("pair spec is empty");
  return out;
}

bool MimoFit::complete() const {
  return std::none_of(reports.begin(), reports.end(),
                      [](const PairReport& r) { return r.status == PairStatus::kError; });
}

MimoFit identify_mimo(const csv::Table& data, const std::vector<PairSpec>& pairs, double T,
                      const IdentifyOptions& options) {
  std::size_t n = 0;
  for (const auto& p : pairs) n = std::max({n, p.i + 1, p.j + 1});
  for (const auto& p : pairs) {
    data.require(p.y_column);
    data.require(p.u_column);
  }
  MimoFit out{TFMatrix(n), {}};
  std::vector<bool> seen(n * n, false);
  for (const auto& p : pairs) {
    const std::string cell = "(" + std::to_string(p.i + 1) + "," + std::to_string(p.j + 1) + ")";
    if (seen[p.i * n + p.j]) throw ValidationError("pair " + cell + " given twice");
    seen[p.i * n + p.j] = true;

    PairReport report{p, PairStatus::kFit, std::nullopt, ""};
    const std::vector<double> u = data.column(p.u_column);
    const std::vector<double> y = data.column(p.y_column);
    if (peak(u) > 0.0 && peak(y) <= options.zero_response * peak(u)) {
      report.status = PairStatus::kZeroCoupling;
      report.message = "no response";
    } else {
      try {
        report.fit = identify_first_order(u, y, T, options);
        out.model.set(p.i, p.j, report.fit->tf);
        if (!report.fit->tau_identifiable) report.message = "tau unidentifiable (DC-only data)";
      } catch (const IdentificationError& e) {
        report.status = PairStatus::kError;
        report.message = "pair " + cell + ": " + e.what();
      }
    }
    out.reports.push_back(std::move(report));
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      PairReport hole;
      hole.spec.i = k / n;
      hole.spec.j = k % n;
      hole.status = PairStatus::kError;
      hole.message = "pair not specified";
      out.reports.push_back(std::move(hole));
    }
  }
  std::sort(out.reports.begin(), out.reports.end(), [](const PairReport& a, const PairReport& b) {
    return std::pair(a.spec.i, a.spec.j) < std::pair(b.spec.i, b.spec.j);
  });
  return out;
}

std::string mimo_model_csv(const MimoFit& fit) {
  csv::Writer w({"i", "j", "tau", "k", "status"});
  for (const auto& r : fit.reports) {
    const bool has = r.status == PairStatus::kFit && r.fit;
    const char* status = r.status == PairStatus::kFit
                             ? (r.fit && !r.fit->tau_identifiable ? "fit_dc_only" : "fit")
                             : (r.status == PairStatus::kZeroCoupling ? "zero" : "error");
    w.add_row({std::to_string(r.spec.i + 1), std::to_string(r.spec.j + 1),
               has ? csv::format_double(r.fit->tf.tau) : "",
               has ? csv::format_double(r.fit->tf.k) : "", status});
  }
  return w.str();
}

std::string mimo_report_csv(const MimoFit& fit) {
  csv::Writer w({"i", "j", "y_column", "u_column", "status", "tau", "k", "a", "b",
                 "tau_identifiable", "residual_rms", "message"});
  for (const auto& r : fit.reports) {
    const bool has = r.fit.has_value();
    const char* status = r.status == PairStatus::kFit
                             ? "fit"
                             : (r.status == PairStatus::kZeroCoupling ? "zero" : "error");
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    w.add_row({std::to_string(r.spec.i + 1), std::to_string(r.spec.j + 1), r.spec.y_column,
               r.spec.u_column, status, has ? csv::format_double(r.fit->tf.tau) : "",
               has ? csv::format_double(r.fit->tf.k) : "",
               has ? csv::format_double(r.fit->a) : "", has ? csv::format_double(r.fit->b) : "",
               has ? (r.fit->tau_identifiable ? "1" : "0") : "",
               has ? csv::format_double(r.fit->residual_rms) : "", msg});
  }
  return w.str();
}

std::vector<double> simulate_first_order(const FirstOrderTF& tf, std::span<const double> u,
                                         double T, double y0) {
  tf.validate();
  std::vector<double> y(u.size());
  if (u.empty()) return y;
  y[0] = y0;
  if (tf.tau == 0.0) {
    for (std::size_t k = 0; k + 1 < u.size(); ++k) y[k + 1] = u[k] / tf.k;
    return y;
  }
  const double a = std::exp(-tf.k / tf.tau * T);
  const double b = (1.0 - a) / tf.k;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) y[k + 1] = a * y[k] + b * u[k];
  return y;
}

}  // namespace coldstart
