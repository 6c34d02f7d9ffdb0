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

#include "coldstart/rga.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {

void FirstOrderTF::validate() const {
  if (!std::isfinite(tau) || !std::isfinite(k)) throw ValidationError("tau and k must be finite");
  if (tau == 0.0 && k == 0.0) throw ValidationError("tau and k are both zero");
  if (k == 0.0) throw ValidationError("k must be nonzero for a finite DC gain");
}

ConventionalTF to_conventional(const FirstOrderTF& tf) {
  tf.validate();
  return {1.0 / tf.k, tf.tau / tf.k};
}

FirstOrderTF from_conventional(const ConventionalTF& tf) {
  if (!(tf.gain != 0.0) || !std::isfinite(tf.gain) || !std::isfinite(tf.time_constant)) {
    throw ValidationError("conventional gain must be finite and nonzero");
  }
  return {tf.time_constant / tf.gain, 1.0 / tf.gain};
}

TFMatrix::TFMatrix(std::size_t n) : n_(n), entries_(n * n) {}

const std::optional<FirstOrderTF>& TFMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ValidationError("TFMatrix index out of range");
  return entries_[i * n_ + j];
}

void TFMatrix::set(std::size_t i, std::size_t j, std::optional<FirstOrderTF> tf) {
  if (i >= n_ || j >= n_) throw ValidationError("TFMatrix index out of range");
  entries_[i * n_ + j] = tf;
}

void TFMatrix::validate() const {
  if (n_ == 0) throw ValidationError("TFMatrix is empty");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (const auto& e = at(i, j)) {
        try {
          e->validate();
        } catch (const ValidationError& err) {
          throw ValidationError("cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                "): " + err.what());
        }
      }
    }
  }
}

TFMatrix TFMatrix::permute_inputs(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw ValidationError("permutation size mismatch");
  TFMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out.set(i, j, at(i, perm.at(j)));
  }
  return out;
}

cplx freq_response(const FirstOrderTF& tf, double omega) {
  if (!(omega >= 0.0)) throw ValidationError("frequency must be >= 0");
  const cplx den(tf.k, tf.tau * omega);
  if (den == cplx(0.0, 0.0)) {
    throw SingularGainError("1/(tau s + k) is singular at omega = " + csv::format_double(omega));
  }
  return 1.0 / den;
}

Eigen::MatrixXcd open_loop_matrix(const TFMatrix& tfm, double omega) {
  const std::size_t n = tfm.size();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (const auto& e = tfm.at(i, j)) {
        P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = freq_response(*e, omega);
      }
    }
  }
  return P;
}

namespace {

double norm1(const Eigen::MatrixXcd& M) { return M.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

RgaPoint rga_at(const Eigen::MatrixXcd& P, double condition_limit) {
  if (P.rows() != P.cols() || P.rows() == 0) throw ValidationError("P must be square and nonempty");
  if (!P.allFinite()) throw SingularMatrixError("P has non-finite entries", INFINITY);
  const Eigen::FullPivLU<Eigen::MatrixXcd> lu(P);
  if (!lu.isInvertible()) throw SingularMatrixError("P is singular", INFINITY);
  const Eigen::MatrixXcd inv = lu.inverse();
  const double cond = norm1(P) * norm1(inv);
  if (!std::isfinite(cond) || cond > condition_limit) {
    throw SingularMatrixError("P is ill-conditioned (cond1 = " + csv::format_double(cond) + ")",
                              cond);
  }
  RgaPoint out;
  const Eigen::MatrixXcd c = inv.transpose();
  out.lambda = P.cwiseProduct(c);
  out.q = c.cwiseInverse();
  out.condition = cond;
  return out;
}

std::size_t RgaResult::gaps() const {
  std::size_t n = 0;
  for (const auto& l : lambda) n += l ? 0 : 1;
  return n;
}

std::vector<double> log_grid(double omega_min, double omega_max, std::size_t points) {
  if (!(omega_min > 0.0) || !(omega_max >= omega_min) || points == 0) {
    throw ValidationError("frequency grid needs 0 < wmin <= wmax and points >= 1");
  }
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = omega_min;
    return grid;
  }
  const double a = std::log10(omega_min);
  const double b = std::log10(omega_max);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  grid.back() = omega_max;
  return grid;
}

double magnitude_db(cplx v) {
  const double m = std::abs(v);
  return m == 0.0 ? -std::numeric_limits<double>::infinity() : 20.0 * std::log10(m);
}

namespace {

void check_grid(const std::vector<double>& omega) {
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] >= 0.0) || !std::isfinite(omega[i])) {
      throw ValidationError("frequency grid: entries must be finite and >= 0");
    }
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw ValidationError("frequency grid: must be strictly increasing");
    }
  }
}

void sweep_point(const TFMatrix& tfm, double omega, double limit,
                 std::optional<Eigen::MatrixXcd>& lambda, std::string& reason) {
  try {
    lambda = rga_at(open_loop_matrix(tfm, omega), limit).lambda;
  } catch (const SingularMatrixError& e) {
    reason = e.what();
  } catch (const SingularGainError& e) {
    reason = e.what();
  }
}

void finish(RgaResult& r, std::size_t n) {
  const auto N = static_cast<Eigen::Index>(n);
  r.dominance = Eigen::MatrixXd::Zero(N, N);
  const double lo = std::pow(10.0, -3.0 / 20.0);
  const double hi = std::pow(10.0, 3.0 / 20.0);
  std::size_t valid = 0;
  for (const auto& l : r.lambda) {
    if (!l) continue;
    ++valid;
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) {
        const double m = std::abs((*l)(i, j));
        if (m >= lo && m <= hi) r.dominance(i, j) += 1.0;
      }
    }
  }
  if (valid > 0) r.dominance /= static_cast<double>(valid);
}

RgaResult prepare(const TFMatrix& tfm, const std::vector<double>& omega) {
  tfm.validate();
  check_grid(omega);
  RgaResult r;
  r.omega = omega;
  r.lambda.resize(omega.size());
  r.gap_reason.resize(omega.size());
  return r;
}

}  // namespace

RgaResult rga_sweep(const TFMatrix& tfm, const std::vector<double>& omega,
                    double condition_limit) {
  RgaResult r = prepare(tfm, omega);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    sweep_point(tfm, omega[i], condition_limit, r.lambda[i], r.gap_reason[i]);
  }
  finish(r, tfm.size());
  return r;
}

RgaResult rga_sweep_parallel(const TFMatrix& tfm, const std::vector<double>& omega,
                             double condition_limit) {
  RgaResult r = prepare(tfm, omega);
  const auto n = static_cast<std::ptrdiff_t>(omega.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    sweep_point(tfm, omega[k], condition_limit, r.lambda[k], r.gap_reason[k]);
  }
  finish(r, tfm.size());
  return r;
}

TFMatrix default_engine_model() {
  // Rows: AFR, omega_e, T_exh. Columns: mdot_fc, mdot_ai, delta.
  const FirstOrderTF table[3][3] = {
      {{0.2, 1.0}, {2.0, 8.0}, {5.0, 40.0}},
      {{3.0, 12.0}, {0.5, 1.0}, {4.0, 20.0}},
      {{6.0, 25.0}, {5.0, 15.0}, {0.8, 1.0}},
  };
  TFMatrix m(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m.set(i, j, table[i][j]);
  }
  return m;
}

namespace {

std::size_t parse_index(const std::string& text, const std::string& where) {
  const double v = csv::parse_double(text, where);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) {
    throw ValidationError(where + ": index must be a positive integer");
  }
  return static_cast<std::size_t>(v) - 1;
}

}  // namespace

TFMatrix tf_matrix_from_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t ci = t.require("i"), cj = t.require("j"), ct = t.require("tau"),
                    ck = t.require("k");
  const auto cs = t.find("status");
  struct Cell {
    std::size_t i, j;
    std::optional<FirstOrderTF> tf;
  };
  std::vector<Cell> cells;
  std::size_t n = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const std::string where = path.string() + " row " + std::to_string(r + 1);
    if (f.size() < 4) throw ValidationError(where + ": expected i,j,tau,k");
    Cell c{parse_index(f[ci], where + " column i"), parse_index(f[cj], where + " column j"), {}};
    const std::string cell = "cell (" + f[ci] + "," + f[cj] + ")";
    if (cs && *cs < f.size() && f[*cs].rfind("error", 0) == 0) {
      throw ValidationError(path.string() + ": " + cell + " is a hole (" + f[*cs] + ")");
    }
    const bool empty_tau = f[ct].empty(), empty_k = f[ck].empty();
    if (empty_tau != empty_k) {
      throw ValidationError(path.string() + ": " + cell + " needs both tau and k, or neither");
    }
    if (!empty_tau) {
      c.tf = FirstOrderTF{csv::parse_double(f[ct], cell + " tau"),
                          csv::parse_double(f[ck], cell + " k")};
      try {
        c.tf->validate();
      } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + cell + ": " + e.what());
      }
    }
    n = std::max({n, c.i + 1, c.j + 1});
    cells.push_back(c);
  }
  if (n == 0) throw ValidationError(path.string() + ": no cells");
  TFMatrix m(n);
  std::vector<bool> seen(n * n, false);
  for (const Cell& c : cells) {
    if (seen[c.i * n + c.j]) {
      throw ValidationError(path.string() + ": duplicate cell (" + std::to_string(c.i + 1) + "," +
                            std::to_string(c.j + 1) + ")");
    }
    seen[c.i * n + c.j] = true;
    m.set(c.i, c.j, c.tf);
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      throw ValidationError(path.string() + ": missing cell (" + std::to_string(k / n + 1) + "," +
                            std::to_string(k % n + 1) + ")");
    }
  }
  return m;
}

TFMatrix tf_matrix_from_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError(path.string() + ": malformed JSON");
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw ValidationError(path.string() + ": expected {\"entries\": [[...]]}");
  }
  const auto& rows = j["entries"];
  const std::size_t n = rows.size();
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<std::size_t>() != n)) {
    throw ValidationError(path.string() + ": n does not match the entries");
  }
  TFMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) {
      throw ValidationError(path.string() + ": row " + std::to_string(i + 1) + " must have " +
                            std::to_string(n) + " cells");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = rows[i][k];
      const std::string cell =
          "cell (" + std::to_string(i + 1) + "," + std::to_string(k + 1) + ")";
      if (e.is_null()) continue;
      if (!e.is_object() || !e.contains("tau") || !e.contains("k") || !e["tau"].is_number() ||
          !e["k"].is_number()) {
        throw ValidationError(path.string() + ": " + cell + " must be null or {tau, k}");
      }
      FirstOrderTF tf{e["tau"].get<double>(), e["k"].get<double>()};
      try {
        tf.validate();
      } catch (const ValidationError& err) {
        throw ValidationError(path.string() + ": " + cell + ": " + err.what());
      }
      m.set(i, k, tf);
    }
  }
  if (n == 0) throw ValidationError(path.string() + ": no cells");
  return m;
}

TFMatrix load_tf_matrix(const std::filesystem::path& path) {
  return path.extension() == ".json" ? tf_matrix_from_json(path) : tf_matrix_from_csv(path);
}

std::string tf_matrix_to_csv(const TFMatrix& tfm) {
  csv::Writer w({"i", "j", "tau", "k"});
  for (std::size_t i = 0; i < tfm.size(); ++i) {
    for (std::size_t j = 0; j < tfm.size(); ++j) {
      const auto& e = tfm.at(i, j);
      w.add_row({std::to_string(i + 1), std::to_string(j + 1),
                 e ? csv::format_double(e->tau) : "", e ? csv::format_double(e->k) : ""});
    }
  }
  return w.str();
}

std::string tf_matrix_to_json(const TFMatrix& tfm) {
  nlohmann::ordered_json j;
  j["n"] = tfm.size();
  j["entries"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < tfm.size(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < tfm.size(); ++k) {
      const auto& e = tfm.at(i, k);
      row.push_back(e ? nlohmann::ordered_json{{"tau", e->tau}, {"k", e->k}}
                      : nlohmann::ordered_json(nullptr));
    }
    j["entries"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string rga_to_csv(const RgaResult& r) {
  const auto n = static_cast<Eigen::Index>(r.dominance.rows());
  std::vector<std::string> header = {"omega"};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      header.push_back("lambda" + ij + "_re");
      header.push_back("lambda" + ij + "_im");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      header.push_back("lambda" + std::to_string(i + 1) + std::to_string(j + 1) + "_db");
    }
  }
  header.emplace_back("gap");
  csv::Writer w(header);
  for (std::size_t k = 0; k < r.omega.size(); ++k) {
    std::vector<std::string> f = {csv::format_double(r.omega[k])};
    const auto& l = r.lambda[k];
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        f.push_back(l ? csv::format_double((*l)(i, j).real()) : "");
        f.push_back(l ? csv::format_double((*l)(i, j).imag()) : "");
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        f.push_back(l ? csv::format_double(magnitude_db((*l)(i, j))) : "");
      }
    }
    f.push_back(l ? "0" : "1");
    w.add_row(std::move(f));
  }
  return w.str();
}

std::string rga_summary_csv(const RgaResult& r) {
  csv::Writer w({"i", "j", "dominance"});
  for (Eigen::Index i = 0; i < r.dominance.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.dominance.cols(); ++j) {
      w.add_row({std::to_string(i + 1), std::to_string(j + 1),
                 csv::format_double(r.dominance(i, j))});
    }
  }
  return w.str();
}

}  // namespace coldstart
