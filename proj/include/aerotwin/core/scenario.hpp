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

#ifndef AEROTWIN_CORE_SCENARIO_HPP
#define AEROTWIN_CORE_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aerotwin/core/grid.hpp"
#include "aerotwin/core/params.hpp"
#include "aerotwin/core/trajectory.hpp"

namespace aerotwin {

struct CoughEvent {
    double time = 0.0;          // s
    CellIndex cell = 0;
    Direction direction = Direction::north;
    double emitted_mass = 0.0;  // ug
    double duration = 1.0;      // s
    friend bool operator==(const CoughEvent&, const CoughEvent&) = default;
};

/// From `time` on, the purifier sits at `cell` and runs at `fan`.
struct PurifierCommand {
    double time = 0.0;
    CellIndex cell = 0;
    FanLevel fan = FanLevel::off;
    friend bool operator==(const PurifierCommand&, const PurifierCommand&) = default;
};

struct AcConfig {
    CellIndex cell = 0;
    bool on = false;
    FanLevel fan = FanLevel::high;
    friend bool operator==(const AcConfig&, const AcConfig&) = default;
};

/// One experiment: room, physics, events and controls.
struct ScenarioConfig {
    GridLayout grid = default_grid();
    CompartmentParams params = CompartmentParams::zeros(default_grid());
    std::vector<CoughEvent> coughs;
    std::vector<PurifierCommand> purifier_schedule;
    AcConfig ac;
    double horizon = 900.0;
    std::uint64_t noise_seed = 0;

    /// Fraction of a cough's mass deposited in the cough cell; the rest goes
    /// to the neighbour it faces (all of it stays if there is none).
    double cough_split = 0.6;
    /// Purifier transit time per grid step when relocating; omega is zero in transit.
    double travel_time_per_cell = 5.0;
    /// Initial concentration per cell; empty means all zero.
    std::vector<double> initial;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Returns `s` unchanged if every invariant holds, otherwise throws
/// ScenarioError naming the first violation.
ScenarioConfig validate_scenario(ScenarioConfig s);

/// Time of the earliest cough; throws if there is none.
double first_cough_time(const ScenarioConfig& s);

/// A scenario paired with its measured (or simulated) trajectory.
struct Observation {
    ScenarioConfig scenario;
    Trajectory trajectory;
};

/// Prediction-quality summary. Concentration units follow the trajectories.
struct MetricsRecord {
    double mae = 0.0;
    double mse = 0.0;
    double pearson_rho = 0.0;
    bool rho_defined = true;
    double mrte = 0.0;           // s
    std::size_t censored = 0;    // censored per-cell MRTs that entered mrte
    friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// Average of several records; rho is averaged over records where defined.
MetricsRecord mean_metrics(const std::vector<MetricsRecord>& records);

}  // namespace aerotwin

#endif
