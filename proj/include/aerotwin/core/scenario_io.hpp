/*
 * Copyright (C) 2026 The aerotwin authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AEROTWIN_CORE_SCENARIO_IO_HPP
#define AEROTWIN_CORE_SCENARIO_IO_HPP

#include <string>

#include <json.hpp>

#include "aerotwin/core/scenario.hpp"

namespace aerotwin {

// JSON schema: docs/scenario_schema.md. Cells are written as [row, col].

nlohmann::json grid_to_json(const GridLayout& g);
GridLayout grid_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const CompartmentParams& p, const GridLayout& g);
CompartmentParams params_from_json(const nlohmann::json& j, const GridLayout& g);

nlohmann::json scenario_to_json(const ScenarioConfig& s);
/// Parses and validates. A missing `params` key yields all-zero params
/// (scenario skeletons for fitting).
ScenarioConfig scenario_from_json(const nlohmann::json& j);

ScenarioConfig read_scenario(const std::string& path);
void write_scenario(const std::string& path, const ScenarioConfig& s);

nlohmann::json metrics_to_json(const MetricsRecord& m);

nlohmann::json read_json(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace aerotwin

#endif
