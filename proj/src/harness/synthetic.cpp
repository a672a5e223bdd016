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

#include "aerotwin/harness/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aerotwin {

ScenarioConfig make_room(const RoomSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    ScenarioConfig s;
    s.grid = GridLayout(spec.rows, spec.cols, spec.cell_volume);
    s.params = CompartmentParams::zeros(s.grid);
    for (const auto& [a, b] : s.grid.pairs())
        s.params.set_symmetric_exchange(a, b,
                                        spec.exchange_mean * (1.0 + rng.uniform(-spec.exchange_jitter, spec.exchange_jitter)));
    const CellIndex ac = s.grid.index(spec.ac_cell);
    s.params.exhaust_rate[ac] = spec.exhaust;
    s.params.filter_efficiency = spec.filter_efficiency;
    s.params.filter_airflow = spec.filter_airflow;
    s.ac = {ac, true, FanLevel::high};
    s.horizon = spec.horizon;
    s.travel_time_per_cell = spec.travel_time_per_cell;
    s.coughs.push_back({spec.cough_time, s.grid.index({spec.rows / 2, spec.cols / 2}), Direction::north,
                        spec.cough_mass, 1.0});
    return validate_scenario(std::move(s));
}

std::string_view to_string(ScenarioFamily f) {
    switch (f) {
        case ScenarioFamily::purifier_free: return "purifier_free";
        case ScenarioFamily::single_cough: return "single_cough";
        case ScenarioFamily::multi_cough: return "multi_cough";
    }
    return "?";
}

ScenarioFamily parse_family(std::string_view s) {
    for (auto f : {ScenarioFamily::purifier_free, ScenarioFamily::single_cough, ScenarioFamily::multi_cough})
        if (to_string(f) == s) return f;
    throw std::invalid_argument("unknown scenario family: " + std::string(s));
}

ScenarioConfig sample_scenario(const ScenarioConfig& room, ScenarioFamily family, std::size_t index, Rng& rng,
                               std::optional<int> purifier_row) {
    ScenarioConfig s = room;
    s.coughs.clear();
    s.purifier_schedule.clear();
    const auto open = s.grid.accessible_cells();
    if (open.empty()) throw std::invalid_argument("room has no accessible cell");
    const CoughEvent first = room.coughs.empty() ? CoughEvent{} : room.coughs.front();
    const double mass = room.coughs.empty() ? 400.0 : first.emitted_mass;
    const double t0 = room.coughs.empty() ? 60.0 : first.time;

    s.coughs.push_back({t0, open[index % open.size()], static_cast<Direction>(rng.index(4)), mass, 1.0});
    if (family == ScenarioFamily::multi_cough) {
        const std::size_t extra = 1 + rng.index(2);
        double t = t0;
        for (std::size_t k = 0; k < extra; ++k) {
            t += rng.uniform(120.0, 240.0);
            s.coughs.push_back({t, open[rng.index(open.size())], static_cast<Direction>(rng.index(4)), mass, 1.0});
        }
    }
    if (family != ScenarioFamily::purifier_free) {
        std::vector<CellIndex> spots;
        for (CellIndex c : open)
            if (!purifier_row || s.grid.cell(c).row == *purifier_row) spots.push_back(c);
        if (spots.empty()) throw std::invalid_argument("no accessible purifier cell in the requested row");
        s.purifier_schedule.push_back({0.0, spots[rng.index(spots.size())], FanLevel::high});
    }
    s.noise_seed = rng.next();
    return validate_scenario(std::move(s));
}

Trajectory apply_noise(const Trajectory& t, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
    std::vector<double> data = t.data();
    if (sigma > 0.0)
        for (double& v : data) v *= std::exp(sigma * rng.normal() - 0.5 * sigma * sigma);
    return Trajectory(t.start_time(), t.sample_interval(), t.num_cells(), std::move(data), Provenance::sensed);
}

std::vector<Observation> generate_dataset(const ScenarioConfig& room, const DatasetOptions& opts) {
    if (opts.count == 0) throw std::invalid_argument("dataset size must be at least 1");
    Rng rng(opts.seed);
    std::vector<Observation> out;
    out.reserve(opts.count);
    for (std::size_t i = 0; i < opts.count; ++i) {
        ScenarioConfig s = sample_scenario(room, opts.family, i, rng, opts.purifier_row);
        Trajectory t = simulate(s, opts.sim);
        if (opts.noise_sigma > 0.0) {
            Rng noise(s.noise_seed);
            t = apply_noise(t, opts.noise_sigma, noise);
        }
        out.push_back({std::move(s), std::move(t)});
    }
    return out;
}

std::string_view to_string(SetupShift s) {
    switch (s) {
        case SetupShift::furniture: return "furniture";
        case SetupShift::ac_location: return "ac_location";
        case SetupShift::ac_speed: return "ac_speed";
    }
    return "?";
}

SetupShift parse_shift(std::string_view s) {
    for (auto v : {SetupShift::furniture, SetupShift::ac_location, SetupShift::ac_speed})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown setup shift: " + std::string(s));
}

ScenarioConfig apply_shift(const ScenarioConfig& room, SetupShift shift, Rng& rng) {
    ScenarioConfig s = room;
    const GridLayout& g = s.grid;
    switch (shift) {
        case SetupShift::furniture: {
            // A two-cell piece (table, shelf) on a random open pair away from the AC.
            std::vector<GridLayout::Pair> options;
            for (const auto& [a, b] : g.pairs())
                if (a != s.ac.cell && b != s.ac.cell && g.accessible(a) && g.accessible(b)) options.push_back({a, b});
            if (options.empty() || g.accessible_cells().size() < 4) throw std::invalid_argument("no room for furniture");
            const auto [a, b] = options[rng.index(options.size())];
            for (const auto& [i, j] : g.pairs()) {
                if (i != a && i != b && j != a && j != b) continue;
                const double keep = 1.0 - rng.uniform(0.3, 0.7);
                s.params.set_exchange(i, j, s.params.exchange(i, j) * keep);
                s.params.set_exchange(j, i, s.params.exchange(j, i) * keep);
            }
            const CellIndex list[] = {a, b};
            s.grid = g.with_blocked(list);
            const auto open = s.grid.accessible_cells();
            for (auto& c : s.coughs)
                if (c.cell == a || c.cell == b) c.cell = open.front();
            break;
        }
        case SetupShift::ac_location: {
            std::vector<CellIndex> options;
            for (CellIndex c : g.accessible_cells()) {
                const Cell rc = g.cell(c);
                const bool perimeter = rc.row == 0 || rc.col == 0 || rc.row == g.rows() - 1 || rc.col == g.cols() - 1;
                if (perimeter && c != s.ac.cell) options.push_back(c);
            }
            if (options.empty()) throw std::invalid_argument("no alternative AC cell");
            const CellIndex to = options[rng.index(options.size())];
            s.params.exhaust_rate[to] = s.params.exhaust_rate[s.ac.cell];
            s.params.exhaust_rate[s.ac.cell] = 0.0;
            s.ac.cell = to;
            break;
        }
        case SetupShift::ac_speed:
            s.ac.fan = rng.uniform() < 0.5 ? FanLevel::med : FanLevel::low;
            break;
    }
    return validate_scenario(std::move(s));
}

}  // namespace aerotwin
