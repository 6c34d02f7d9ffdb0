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

// Run summaries. Missing events (no light-off, no convergence, no baseline)
// are std::nullopt and serialize as the literal "absent".

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coldstart/looplab.hpp"

namespace coldstart {

enum class Output { kAfr = 0, kSpeed = 1, kExhaust = 2 };
inline constexpr std::array<Output, 3> kAllOutputs = {Output::kAfr, Output::kSpeed,
                                                      Output::kExhaust};
std::string_view output_key(Output o);

struct ErrorStats {
  double mean = 0.0;  // signed mean of y - y_d
  double stddev = 0.0;
  double mean_abs = 0.0;
};

// Why a convergence time is missing.
enum class ConvergenceNote { kConverged, kNominal, kAdaptationOff, kNotConverged };
std::string_view convergence_note_key(ConvergenceNote n);

struct MetricsOptions {
  double window_start = 5.0;  // [s]
  double band = 0.05;         // relative band around phi_true
  double light_off_eta = 0.5;
};

struct MetricsSummary {
  double window_start = 0.0;
  std::size_t samples = 0;  // rows inside the window
  std::array<ErrorStats, 3> tracking{};  // by Output
  PerLoop<double> mean_abs_surface;      // over the window
  PerLoop<std::optional<double>> convergence_time;
  PerLoop<ConvergenceNote> convergence_note;
  double hc_cumulative = 0.0;  // [kg]
  std::optional<double> light_off_time;
  double final_eta = 0.0;
  // Paired against a non-adaptive baseline; absent without one.
  PerLoop<std::optional<double>> removal_ratio;
  std::optional<double> removal_ratio_min;
  // 1 - adaptive mean |s| / baseline mean |s|, clamped to [0, 1].
  PerLoop<std::optional<double>> tracking_improvement;
};

// Throws ValidationError when the baseline grid differs from the record's.
MetricsSummary compute_metrics(const RunRecord& record, const RunRecord* baseline = nullptr,
                               const MetricsOptions& options = {});

std::string metrics_to_text(const MetricsSummary& m);
void write_metrics_text(const MetricsSummary& m, const std::filesystem::path& path);

// Flat CSV form for batch sweeps; fields follow metrics_csv_header().
const std::vector<std::string>& metrics_csv_header();
std::vector<std::string> metrics_csv_fields(const MetricsSummary& m);

}  // namespace coldstart
