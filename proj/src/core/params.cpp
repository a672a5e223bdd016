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

#include "aerotwin/core/params.hpp"

#include <stdexcept>
#include <string>

namespace aerotwin {

double fan_multiplier(FanLevel level) {
    switch (level) {
        case FanLevel::off: return 0.0;
        case FanLevel::low: return 0.5;
        case FanLevel::med: return 0.75;
        case FanLevel::high: return 1.0;
    }
    return 0.0;
}

std::string_view to_string(FanLevel level) {
    switch (level) {
        case FanLevel::off: return "off";
        case FanLevel::low: return "low";
        case FanLevel::med: return "med";
        case FanLevel::high: return "high";
    }
    return "off";
}

FanLevel parse_fan_level(std::string_view s) {
    if (s == "off") return FanLevel::off;
    if (s == "low") return FanLevel::low;
    if (s == "med" || s == "medium") return FanLevel::med;
    if (s == "high") return FanLevel::high;
    throw std::invalid_argument("unknown fan level '" + std::string(s) + "'");
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::north: return "N";
        case Direction::south: return "S";
        case Direction::east: return "E";
        case Direction::west: return "W";
    }
    return "N";
}

Direction parse_direction(std::string_view s) {
    if (s == "N") return Direction::north;
    if (s == "S") return Direction::south;
    if (s == "E") return Direction::east;
    if (s == "W") return Direction::west;
    throw std::invalid_argument("unknown cough direction '" + std::string(s) + "'");
}

CompartmentParams CompartmentParams::zeros(const GridLayout& grid) {
    CompartmentParams p;
    for (const auto& [a, b] : grid.pairs()) {
        p.exchange_rates[{a, b}] = 0.0;
        p.exchange_rates[{b, a}] = 0.0;
    }
    p.exhaust_rate.assign(grid.num_cells(), 0.0);
    return p;
}

double CompartmentParams::exchange(CellIndex from, CellIndex to) const {
    auto it = exchange_rates.find({from, to});
    if (it == exchange_rates.end())
        throw std::out_of_range("no exchange rate for non-adjacent pair " + std::to_string(from) +
                                "->" + std::to_string(to));
    return it->second;
}

void CompartmentParams::set_exchange(CellIndex from, CellIndex to, double rate) {
    auto it = exchange_rates.find({from, to});
    if (it == exchange_rates.end())
        throw std::out_of_range("no exchange rate for non-adjacent pair " + std::to_string(from) +
                                "->" + std::to_string(to));
    it->second = rate;
}

void CompartmentParams::set_symmetric_exchange(CellIndex a, CellIndex b, double rate) {
    set_exchange(a, b, rate);
    set_exchange(b, a, rate);
}

}  // namespace aerotwin
