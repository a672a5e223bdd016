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

#ifndef AEROTWIN_TOOLS_CLI_CONFIG_HPP
#define AEROTWIN_TOOLS_CLI_CONFIG_HPP

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "aerotwin/estimation/differential_evolution.hpp"
#include "aerotwin/harness/benchmark.hpp"

namespace aerotwin::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parsed `--config` file. Every section is optional; unknown keys are errors.
struct CliConfig {
    RoomSpec room;
    SimOptions sim{1.0, 1.0};
    TwinTrainConfig twin;
    MamlConfig maml;
    PolicyConfig policy;
    std::size_t de_population = 0;  // 0: library default for the dimension
    std::size_t de_generations = 300;
    double de_mutation = 0.8;
    double de_crossover = 0.9;
    nlohmann::json benchmark = nlohmann::json::object();
};

CliConfig parse_config(const nlohmann::json& j);
CliConfig load_config(const std::string& path);  // empty path: defaults

TwinAccuracyConfig twin_accuracy_config(const nlohmann::json& j);
FewShotConfig few_shot_config(const nlohmann::json& j);
PlacementSuiteConfig placement_config(const nlohmann::json& j);

}  // namespace aerotwin::cli

#endif
