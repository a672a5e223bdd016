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

#ifndef AEROTWIN_HARNESS_SYNTHETIC_HPP
#define AEROTWIN_HARNESS_SYNTHETIC_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "aerotwin/core/random.hpp"
#include "aerotwin/core/scenario.hpp"
#include "aerotwin/sim/compartment.hpp"

namespace aerotwin {

/// Ground-truth room used by every synthetic experiment.
struct RoomSpec {
    int rows = 3;
    int cols = 3;
    double cell_volume = 2.0;           // m^3
    double exchange_mean = 0.1;         // m^3/s per boundary
    double exchange_jitter = 0.25;      // relative, uniform
    Cell ac_cell{0, 2};
    double exhaust = 0.05;              // m^3/s at the AC cell
    double filter_efficiency = 0.95;
    double filter_airflow = 0.06;       // m^3/s
    double cough_mass = 400.0;          // ug
    double cough_time = 60.0;           // s
    double horizon = 900.0;             // s
    double travel_time_per_cell = 5.0;  // s
};

/// Room skeleton with the true params; no coughs, no purifier.
ScenarioConfig make_room(const RoomSpec& spec, std::uint64_t seed);

enum class ScenarioFamily { purifier_free, single_cough, multi_cough };
std::string_view to_string(ScenarioFamily f);
ScenarioFamily parse_family(std::string_view s);

struct DatasetOptions {
    ScenarioFamily family = ScenarioFamily::single_cough;
    std::size_t count = 45;
    double noise_sigma = 0.0;  // relative
    std::uint64_t seed = 1;
    SimOptions sim{1.0, 1.0};
    /// Restricts purifier placements to one grid row.
    std::optional<int> purifier_row;
};

/// Scenario `index` of a family. Cough cells cycle through the accessible
/// cells so n = k * cells gives a balanced design; the purifier runs at high
/// from t = 0 at a random accessible cell (no purifier for purifier_free).
ScenarioConfig sample_scenario(const ScenarioConfig& room, ScenarioFamily family, std::size_t index, Rng& rng,
                               std::optional<int> purifier_row = std::nullopt);

std::vector<Observation> generate_dataset(const ScenarioConfig& room, const DatasetOptions& opts);

/// Mean-preserving log-normal noise: v * exp(sigma z - sigma^2 / 2).
Trajectory apply_noise(const Trajectory& t, double sigma, Rng& rng);

enum class SetupShift { furniture, ac_location, ac_speed };
std::string_view to_string(SetupShift s);
SetupShift parse_shift(std::string_view s);

/// furniture: two adjacent non-AC cells become inaccessible and the exchange
/// across their boundaries drops by 30-70%; ac_location: exhaust moves to another
/// perimeter cell; ac_speed: the AC fan drops to med or low.
ScenarioConfig apply_shift(const ScenarioConfig& room, SetupShift shift, Rng& rng);

}  // namespace aerotwin

#endif
