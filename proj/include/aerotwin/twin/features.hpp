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

#ifndef AEROTWIN_TWIN_FEATURES_HPP
#define AEROTWIN_TWIN_FEATURES_HPP

#include <span>

#include "aerotwin/core/scenario.hpp"
#include "aerotwin/nn/network.hpp"

namespace aerotwin {

/// Global min-max range for concentrations.
struct Normalization {
    double lo = 0.0;
    double hi = 1.0;
    double scale() const { return hi > lo ? hi - lo : 1.0; }
    friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// Range over every observed and base value of a training set.
Normalization fit_normalization(std::span<const Observation> train, std::span<const Trajectory> bases);

/// Frame layout for n cells (width 4n + 9): cough cell one-hot (n), cough
/// direction one-hot (4), purifier cell one-hot or absent (n + 1), purifier
/// fan multiplier, AC cell one-hot (n), AC fan multiplier, sin/cos of the
/// phase t / horizon, normalized base concentrations (n).
/// The cough block shows the most recent cough that has started.
std::size_t frame_width(const GridLayout& grid);

/// Per-cell node features: base concentration, cough here, purifier
/// multiplier here, AC multiplier here, sin, cos.
inline constexpr std::size_t node_feature_count = 6;

SequenceInput build_inputs(const ScenarioConfig& s, const Trajectory& base, const Normalization& norm,
                           bool with_nodes);

}  // namespace aerotwin

#endif
