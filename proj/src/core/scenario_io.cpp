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

#include "aerotwin/core/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

namespace aerotwin {

using nlohmann::json;

namespace {

json cell_json(const GridLayout& g, CellIndex i) {
    const Cell c = g.cell(i);
    return json::array({c.row, c.col});
}

CellIndex cell_from(const json& j, const GridLayout& g) {
    if (!j.is_array() || j.size() != 2) throw ScenarioError("cell must be a [row, col] pair");
    return g.index({j[0].get<int>(), j[1].get<int>()});
}

}  // namespace

json grid_to_json(const GridLayout& g) {
    json blocked = json::array();
    for (CellIndex i = 0; i < g.num_cells(); ++i)
        if (!g.accessible(i)) blocked.push_back(cell_json(g, i));
    json j{{"rows", g.rows()}, {"cols", g.cols()}, {"cell_volume_m3", g.cell_volume()}, {"blocked", blocked}};
    if (g.pairs() != lattice_pairs(g.rows(), g.cols())) {
        json adj = json::array();
        for (const auto& [a, b] : g.pairs()) adj.push_back(json::array({cell_json(g, a), cell_json(g, b)}));
        j["adjacency"] = adj;
    }
    return j;
}

GridLayout grid_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const double vol = j.at("cell_volume_m3").get<double>();
    GridLayout lattice(rows, cols, vol);
    std::vector<bool> acc(lattice.num_cells(), true);
    if (j.contains("blocked"))
        for (const auto& c : j.at("blocked")) acc[cell_from(c, lattice)] = false;
    std::vector<GridLayout::Pair> pairs = lattice.pairs();
    if (j.contains("adjacency")) {
        pairs.clear();
        for (const auto& p : j.at("adjacency"))
            pairs.emplace_back(cell_from(p.at(0), lattice), cell_from(p.at(1), lattice));
    }
    return GridLayout(rows, cols, vol, std::move(acc), std::move(pairs));
}

json params_to_json(const CompartmentParams& p, const GridLayout& g) {
    json ex = json::array();
    for (const auto& [pair, rate] : p.exchange_rates)
        ex.push_back({{"from", cell_json(g, pair.first)}, {"to", cell_json(g, pair.second)}, {"rate_m3s", rate}});
    return {{"exchange_rates", ex},
            {"exhaust_rates_m3s", p.exhaust_rate},
            {"filter_efficiency", p.filter_efficiency},
            {"filter_airflow_m3s", p.filter_airflow},
            {"source_scale", p.source_scale}};
}

CompartmentParams params_from_json(const json& j, const GridLayout& g) {
    CompartmentParams p = CompartmentParams::zeros(g);
    if (j.contains("uniform_exchange_m3s")) {
        const double a = j.at("uniform_exchange_m3s").get<double>();
        for (auto& [pair, rate] : p.exchange_rates) rate = a;
    }
    if (j.contains("exchange_rates")) {
        for (const auto& e : j.at("exchange_rates")) {
            const CellIndex from = cell_from(e.at("from"), g);
            const CellIndex to = cell_from(e.at("to"), g);
            if (!g.adjacent(from, to)) throw ScenarioError("exchange rate given for non-adjacent cells");
            p.set_exchange(from, to, e.at("rate_m3s").get<double>());
        }
    }
    if (j.contains("exhaust_rates_m3s")) p.exhaust_rate = j.at("exhaust_rates_m3s").get<std::vector<double>>();
    p.filter_efficiency = j.value("filter_efficiency", 0.0);
    p.filter_airflow = j.value("filter_airflow_m3s", 0.0);
    p.source_scale = j.value("source_scale", 1.0);
    return p;
}

json scenario_to_json(const ScenarioConfig& s) {
    const GridLayout& g = s.grid;
    json coughs = json::array();
    for (const auto& c : s.coughs)
        coughs.push_back({{"time_s", c.time},
                          {"cell", cell_json(g, c.cell)},
                          {"direction", std::string(to_string(c.direction))},
                          {"emitted_mass_ug", c.emitted_mass},
                          {"duration_s", c.duration}});
    json sched = json::array();
    for (const auto& p : s.purifier_schedule)
        sched.push_back({{"time_s", p.time}, {"cell", cell_json(g, p.cell)}, {"fan", std::string(to_string(p.fan))}});
    json j{{"grid", grid_to_json(g)},
           {"params", params_to_json(s.params, g)},
           {"coughs", coughs},
           {"purifier_schedule", sched},
           {"ac", {{"cell", cell_json(g, s.ac.cell)}, {"on", s.ac.on}, {"fan", std::string(to_string(s.ac.fan))}}},
           {"horizon_s", s.horizon},
           {"noise_seed", s.noise_seed},
           {"cough_split", s.cough_split},
           {"travel_s_per_cell", s.travel_time_per_cell}};
    if (!s.initial.empty()) j["initial_ugm3"] = s.initial;
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig s;
    try {
        s.grid = j.contains("grid") ? grid_from_json(j.at("grid")) : default_grid();
        const GridLayout& g = s.grid;
        s.params = j.contains("params") ? params_from_json(j.at("params"), g) : CompartmentParams::zeros(g);
        if (j.contains("coughs")) {
            for (const auto& c : j.at("coughs")) {
                CoughEvent e;
                e.time = c.at("time_s").get<double>();
                e.cell = cell_from(c.at("cell"), g);
                e.direction = parse_direction(c.value("direction", std::string("N")));
                e.emitted_mass = c.at("emitted_mass_ug").get<double>();
                e.duration = c.value("duration_s", 1.0);
                s.coughs.push_back(e);
            }
        }
        if (j.contains("purifier_schedule")) {
            for (const auto& p : j.at("purifier_schedule"))
                s.purifier_schedule.push_back({p.at("time_s").get<double>(), cell_from(p.at("cell"), g),
                                               parse_fan_level(p.value("fan", std::string("high")))});
        }
        if (j.contains("ac")) {
            const auto& a = j.at("ac");
            s.ac.cell = cell_from(a.at("cell"), g);
            s.ac.on = a.value("on", true);
            s.ac.fan = parse_fan_level(a.value("fan", std::string("high")));
        }
        s.horizon = j.value("horizon_s", 900.0);
        s.noise_seed = j.value("noise_seed", std::uint64_t{0});
        s.cough_split = j.value("cough_split", 0.6);
        s.travel_time_per_cell = j.value("travel_s_per_cell", 5.0);
        if (j.contains("initial_ugm3")) s.initial = j.at("initial_ugm3").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw ScenarioError(std::string("malformed scenario JSON: ") + e.what());
    }
    return validate_scenario(std::move(s));
}

json metrics_to_json(const MetricsRecord& m) {
    return {{"mae", m.mae},
            {"mse", m.mse},
            {"pearson_rho", m.rho_defined ? json(m.pearson_rho) : json(nullptr)},
            {"mrte_s", m.mrte},
            {"censored_cells", m.censored}};
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << j.dump(2) << '\n';
}

ScenarioConfig read_scenario(const std::string& path) { return scenario_from_json(read_json(path)); }

void write_scenario(const std::string& path, const ScenarioConfig& s) { write_json(path, scenario_to_json(s)); }

}  // namespace aerotwin
