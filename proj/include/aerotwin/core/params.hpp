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

#ifndef AEROTWIN_CORE_PARAMS_HPP
#define AEROTWIN_CORE_PARAMS_HPP

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "aerotwin/core/grid.hpp"

namespace aerotwin {

enum class FanLevel { off, low, med, high };

/// Fraction of the nominal airflow delivered at a fan level.
double fan_multiplier(FanLevel level);
std::string_view to_string(FanLevel level);
FanLevel parse_fan_level(std::string_view s);

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Physical rates for the compartment model. Volumes live on the grid.
///
/// `exchange_rates` maps an ordered adjacent pair (from, to) to the
/// volumetric flow carrying air from `from` into `to` [m^3/s].
/// `source_scale` multiplies every cough's nominal emission rate
/// (emitted_mass / duration).
struct CompartmentParams {
    std::map<std::pair<CellIndex, CellIndex>, double> exchange_rates;
    std::vector<double> exhaust_rate;  // nominal Q per cell [m^3/s]
    double filter_efficiency = 0.0;    // gamma in [0, 1]
    double filter_airflow = 0.0;       // nominal omega [m^3/s]
    double source_scale = 1.0;

    /// Every ordered adjacent pair present with rate 0, zero exhaust.
    static CompartmentParams zeros(const GridLayout& grid);

    double exchange(CellIndex from, CellIndex to) const;
    void set_exchange(CellIndex from, CellIndex to, double rate);
    void set_symmetric_exchange(CellIndex a, CellIndex b, double rate);

    friend bool operator==(const CompartmentParams&, const CompartmentParams&) = default;
};

}  // namespace aerotwin

#endif
