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

// Relative gain array of first-order transfer-function matrices
// G_ij(s) = 1 / (tau_ij s + k_ij), swept over frequency.

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coldstart {

using cplx = std::complex<double>;

// G(s) = 1 / (tau s + k). DC gain is 1/k.
struct FirstOrderTF {
  double tau = 0.0;
  double k = 1.0;

  void validate() const;
  bool operator==(const FirstOrderTF&) const = default;
};

// Conventional K / (T s + 1) form.
struct ConventionalTF {
  double gain = 1.0;
  double time_constant = 0.0;
};
ConventionalTF to_conventional(const FirstOrderTF& tf);
FirstOrderTF from_conventional(const ConventionalTF& tf);

// Square grid of entries; an empty entry is an explicit zero coupling.
class TFMatrix {
 public:
  explicit TFMatrix(std::size_t n = 0);

  std::size_t size() const { return n_; }
  const std::optional<FirstOrderTF>& at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, std::optional<FirstOrderTF> tf);
  void validate() const;

  // Reorders inputs (columns): column j of the result is column perm[j] here.
  TFMatrix permute_inputs(const std::vector<std::size_t>& perm) const;

  bool operator==(const TFMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::optional<FirstOrderTF>> entries_;
};

cplx freq_response(const FirstOrderTF& tf, double omega);
Eigen::MatrixXcd open_loop_matrix(const TFMatrix& tfm, double omega);

inline constexpr double kDefaultConditionLimit = 1e12;

struct RgaPoint {
  Eigen::MatrixXcd lambda;  // P .* inv(P)^T
  Eigen::MatrixXcd q;       // closed-loop gains, lambda_ij = p_ij / q_ij
  double condition = 0.0;   // 1-norm condition number of P
};

// Throws SingularMatrixError when P is singular or its condition number
// exceeds the limit.
RgaPoint rga_at(const Eigen::MatrixXcd& P, double condition_limit = kDefaultConditionLimit);

struct RgaResult {
  std::vector<double> omega;
  std::vector<std::optional<Eigen::MatrixXcd>> lambda;  // empty at gaps
  std::vector<std::string> gap_reason;                  // empty when not a gap
  Eigen::MatrixXd dominance;  // per pairing: share of non-gap points within +-3 dB of 1

  std::size_t gaps() const;
};

std::vector<double> log_grid(double omega_min, double omega_max, std::size_t points);

RgaResult rga_sweep(const TFMatrix& tfm, const std::vector<double>& omega,
                    double condition_limit = kDefaultConditionLimit);
// OpenMP over frequencies; results assembled in grid order.
RgaResult rga_sweep_parallel(const TFMatrix& tfm, const std::vector<double>& omega,
                             double condition_limit = kDefaultConditionLimit);

double magnitude_db(cplx v);  // 20 log10 |v|, -inf for 0

// Illustrative diagonally dominant 3x3 model (inputs mdot_fc, mdot_ai, delta;
// outputs AFR, omega_e, T_exh). Synthetic, not measured data.
TFMatrix default_engine_model();

// File forms. CSV: i,j,tau,k (1-based, empty tau/k = zero coupling, optional
// status column). JSON: {"n": N, "entries": [[{"tau":..,"k":..} | null, ...], ...]}.
TFMatrix tf_matrix_from_csv(const std::filesystem::path& path);
TFMatrix tf_matrix_from_json(const std::filesystem::path& path);
TFMatrix load_tf_matrix(const std::filesystem::path& path);  // by extension
std::string tf_matrix_to_csv(const TFMatrix& tfm);
std::string tf_matrix_to_json(const TFMatrix& tfm);

std::string rga_to_csv(const RgaResult& result);
std::string rga_summary_csv(const RgaResult& result);

}  // namespace coldstart
