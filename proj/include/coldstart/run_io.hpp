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

// RunRecord <-> CSV. Column order is fixed; see run_csv_header().

#include <filesystem>
#include <string>
#include <vector>

#include "coldstart/looplab.hpp"

namespace coldstart {

const std::vector<std::string>& run_csv_header();

std::string run_to_csv(const RunRecord& record);
void write_run_csv(const RunRecord& record, const std::filesystem::path& path);

// Restores everything the metrics need. Raw commands and the full controller
// telemetry round-trip as well.
RunRecord run_from_csv_text(std::string_view text, std::string_view source);
RunRecord read_run_csv(const std::filesystem::path& path);

void write_events_csv(const RunRecord& record, const std::filesystem::path& path);

}  // namespace coldstart
