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

#ifndef AEROTWIN_HARNESS_DATASET_IO_HPP
#define AEROTWIN_HARNESS_DATASET_IO_HPP

#include <string>
#include <vector>

#include "aerotwin/core/scenario.hpp"

namespace aerotwin {

/// Directory layout: dataset.json manifest, scenarios/NNNN.json and
/// trajectories/NNNN.csv.
void save_dataset(const std::string& dir, const std::vector<Observation>& data);
std::vector<Observation> load_dataset(const std::string& dir);

}  // namespace aerotwin

#endif
