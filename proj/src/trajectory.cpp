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

#include "coldstart/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "coldstart/csv.hpp"
#include "coldstart/errors.hpp"

namespace coldstart {

Trajectory::Trajectory(std::vector<double> time, std::vector<double> afr_d,
                       std::vector<double> omega_d, std::vector<double> T_exh_d)
    : time_(std::move(time)),
      afr_d_(std::move(afr_d)),
      omega_d_(std::move(omega_d)),
      T_exh_d_(std::move(T_exh_d)) {
  if (time_.empty()) throw ValidationError("trajectory: no samples");
  if (afr_d_.size() != time_.size() || omega_d_.size() != time_.size() ||
      T_exh_d_.size() != time_.size()) {
    throw ValidationError("trajectory: series lengths differ");
  }
  for (std::size_t i = 0; i < time_.size(); ++i) {
    if (!std::isfinite(time_[i]) || !std::isfinite(afr_d_[i]) || !std::isfinite(omega_d_[i]) ||
        !std::isfinite(T_exh_d_[i])) {
      throw ValidationError("trajectory: non-finite value at row " + std::to_string(i + 1));
    }
    if (i > 0 && !(time_[i] > time_[i - 1])) {
      throw ValidationError("trajectory: time not strictly increasing at row " +
                            std::to_string(i + 1));
    }
  }
}

Trajectory Trajectory::default_profile() {
  // AFR ramps 12.5 -> 14.7 over the first 20 s; speed holds the fast-idle
  // 167 rad/s for 5 s, then descends to 100 rad/s at 20 s.
  const double afr_at_5 = 12.5 + (14.7 - 12.5) * 5.0 / 20.0;
  return Trajectory({0.0, 5.0, 20.0, 1000.0}, {12.5, afr_at_5, 14.7, 14.7},
                    {167.0, 167.0, 100.0, 100.0}, {650.0, 650.0, 650.0, 650.0});
}

Trajectory Trajectory::from_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  return Trajectory(t.column("time"), t.column("afr_d"), t.column("omega_d"),
                    t.column("T_exh_d"));
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  csv::Writer w({"time", "afr_d", "omega_d", "T_exh_d"});
  for (std::size_t i = 0; i < time_.size(); ++i) {
    w.add_row({csv::format_double(time_[i]), csv::format_double(afr_d_[i]),
               csv::format_double(omega_d_[i]), csv::format_double(T_exh_d_[i])});
  }
  w.save(path);
}

DesiredSample Trajectory::sample(double t) const {
  if (t <= time_.front()) return {afr_d_.front(), omega_d_.front(), T_exh_d_.front()};
  if (t >= time_.back()) return {afr_d_.back(), omega_d_.back(), T_exh_d_.back()};
  const auto it = std::upper_bound(time_.begin(), time_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - time_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - time_[lo]) / (time_[hi] - time_[lo]);
  auto lerp = [&](const std::vector<double>& v) { return v[lo] + w * (v[hi] - v[lo]); };
  return {lerp(afr_d_), lerp(omega_d_), lerp(T_exh_d_)};
}

DesiredWindow Trajectory::window(double t, double T) const {
  return {sample(t), sample(t + T), sample(t + 2.0 * T)};
}

}  // namespace coldstart
