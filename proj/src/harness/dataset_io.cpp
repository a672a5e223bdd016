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

#include "aerotwin/harness/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "aerotwin/core/scenario_io.hpp"

namespace aerotwin {

namespace fs = std::filesystem;

namespace {

std::string stem(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zu", i);
    return buf;
}

}  // namespace

void save_dataset(const std::string& dir, const std::vector<Observation>& data) {
    const fs::path root(dir);
    fs::create_directories(root / "scenarios");
    fs::create_directories(root / "trajectories");
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::string s = "scenarios/" + stem(i) + ".json";
        const std::string t = "trajectories/" + stem(i) + ".csv";
        write_scenario((root / s).string(), data[i].scenario);
        write_trajectory_csv((root / t).string(), data[i].trajectory);
        entries.push_back({{"scenario", s}, {"trajectory", t}});
    }
    write_json((root / "dataset.json").string(), {{"count", data.size()}, {"observations", entries}});
}

std::vector<Observation> load_dataset(const std::string& dir) {
    const fs::path root(dir);
    const nlohmann::json manifest = read_json((root / "dataset.json").string());
    std::vector<Observation> out;
    for (const auto& e : manifest.at("observations")) {
        Observation o{read_scenario((root / e.at("scenario").get<std::string>()).string()),
                      read_trajectory_csv((root / e.at("trajectory").get<std::string>()).string())};
        out.push_back(std::move(o));
    }
    if (out.empty()) throw std::runtime_error("dataset " + dir + " is empty");
    return out;
}

}  // namespace aerotwin
