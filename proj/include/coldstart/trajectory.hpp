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

#include <filesystem>
#include <vector>

#include "coldstart/dsmc.hpp"

namespace coldstart {

// Desired AFR / speed / exhaust-temperature profile, linearly interpolated
// between knots and held constant outside them.
class Trajectory {
 public:
  Trajectory() = default;
  // Throws ValidationError unless all series share the time vector, time is
  // strictly increasing and every value is finite.
  Trajectory(std::vector<double> time, std::vector<double> afr_d, std::vector<double> omega_d,
             std::vector<double> T_exh_d);

  // Rich-to-stoichiometric AFR ramp, idle-speed descent, 650 degC exhaust.
  static Trajectory default_profile();

  // CSV with header time,afr_d,omega_d,T_exh_d (any column order).
  static Trajectory from_csv(const std::filesystem::path& path);
  void write_csv(const std::filesystem::path& path) const;

  DesiredSample sample(double t) const;
  DesiredWindow window(double t, double T) const;

  double t_begin() const { return time_.front(); }
  double t_end() const { return time_.back(); }
  bool covers(double t0, double t1) const { return t_begin() <= t0 && t_end() >= t1; }

  const std::vector<double>& time() const { return time_; }

 private:
  std::vector<double> time_;
  std::vector<double> afr_d_;
  std::vector<double> omega_d_;
  std::vector<double> T_exh_d_;
};

}  // namespace coldstart
