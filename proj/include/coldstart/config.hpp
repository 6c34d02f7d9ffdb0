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

// JSON scenario configuration: parse with field-path errors, serialize, and
// dotted-key overrides ("controller.rho.T_exh=1500").

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coldstart/looplab.hpp"

namespace coldstart {

using Json = nlohmann::ordered_json;

// Unknown keys and type mismatches raise ValidationError with the JSON path.
ScenarioConfig config_from_json(const Json& j);
Json config_to_json(const ScenarioConfig& config);

// Sets one dotted path. The value is parsed as JSON when possible
// (numbers, true/false, arrays), otherwise taken as a string.
void apply_override(Json& j, std::string_view assignment);
void apply_overrides(Json& j, const std::vector<std::string>& assignments);

Json load_json(const std::filesystem::path& path);
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

}  // namespace coldstart
