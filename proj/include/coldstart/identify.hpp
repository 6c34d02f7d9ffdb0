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

// First-order model fitting from sampled input/output records:
// least-squares ARX(1) y(k+1) = a y(k) + b u(k), mapped to 1 / (tau s + k).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coldstart/csv.hpp"
#include "coldstart/rga.hpp"

namespace coldstart {

struct IdentifyOptions {
  std::size_t min_samples = 10;
  // Regressor columns whose singular-value ratio falls below this are
  // treated as collinear.
  double rank_tolerance = 1e-10;
  // A channel whose output peak is below this fraction of the input peak
  // (in the record's own units) is reported as zero coupling.
  double zero_response = 1e-12;
};

struct FirstOrderFit {
  FirstOrderTF tf;
  double a = 0.0;  // discrete pole
  double b = 0.0;  // discrete input gain
  bool tau_identifiable = true;  // false for DC-only records
  double residual_rms = 0.0;     // one-step-ahead prediction residual
};

// Throws IdentificationError with diagnostics when the record carries no
// usable information (too short, no excitation, pole outside (0, 1)).
FirstOrderFit identify_first_order(std::span<const double> u, std::span<const double> y,
                                   double T, const IdentifyOptions& options = {});

// One output column paired with one input column, placed at (i, j).
struct PairSpec {
  std::size_t i = 0;  // 0-based output index
  std::size_t j = 0;  // 0-based input index
  std::string y_column;
  std::string u_column;
};

// "1.1=afr/mdot_fc,1.2=afr/mdot_ai" (1-based indices).
std::vector<PairSpec> parse_pair_specs(std::string_view text);

enum class PairStatus { kFit, kZeroCoupling, kError };

struct PairReport {
  PairSpec spec;
  PairStatus status = PairStatus::kFit;
  std::optional<FirstOrderFit> fit;
  std::string message;
};

struct MimoFit {
  TFMatrix model;  // holes (failed pairs) are left empty; see reports
  std::vector<PairReport> reports;
  bool complete() const;
};

// Each pair is fit independently from its own columns (single-input
// experiments). Missing columns raise ValidationError; per-pair fit failures
// are recorded in the reports and the batch continues.
MimoFit identify_mimo(const csv::Table& data, const std::vector<PairSpec>& pairs, double T,
                      const IdentifyOptions& options = {});

// i,j,tau,k,status with an empty tau/k for zero couplings and holes.
std::string mimo_model_csv(const MimoFit& fit);
std::string mimo_report_csv(const MimoFit& fit);

// Exact zero-order-hold response of 1 / (tau s + k) to a sampled input.
std::vector<double> simulate_first_order(const FirstOrderTF& tf, std::span<const double> u,
                                         double T, double y0 = 0.0);

}  // namespace coldstart
