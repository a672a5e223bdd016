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

#include "aerotwin/policy/placement.hpp"

#include <algorithm>
#include <cmath>

#include "aerotwin/core/random.hpp"

namespace aerotwin {

Trajectory SimulatorForecaster::forecast(const ScenarioConfig& s) const {
    return params_ ? simulate(s, *params_, sim_) : simulate(s, sim_);
}

void PolicyConfig::validate() const {
    if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
    if (!(idle_pm_threshold >= 0.0)) throw std::invalid_argument("idle_pm_threshold must be >= 0");
    if (!(fan_low_timeout >= 0.0)) throw std::invalid_argument("fan_low_timeout must be >= 0");
    if (run_fan == FanLevel::off) throw std::invalid_argument("run_fan cannot be off");
}

std::string_view to_string(FanAction a) {
    switch (a) {
        case FanAction::move_run: return "move_run";
        case FanAction::hold: return "hold";
        case FanAction::lower: return "lower";
        case FanAction::off: return "off";
    }
    return "?";
}

std::string_view to_string(PlacementStrategy s) {
    switch (s) {
        case PlacementStrategy::optimal: return "optimal";
        case PlacementStrategy::random_neighbor: return "random_neighbor";
        case PlacementStrategy::fixed_corner: return "fixed_corner";
        case PlacementStrategy::static_center: return "static_center";
    }
    return "?";
}

PlacementStrategy parse_strategy(std::string_view s) {
    for (auto v : {PlacementStrategy::optimal, PlacementStrategy::random_neighbor, PlacementStrategy::fixed_corner,
                   PlacementStrategy::static_center})
        if (to_string(v) == s) return v;
    throw std::invalid_argument("unknown placement strategy: " + std::string(s));
}

namespace {

ScenarioConfig with_placement(const ScenarioConfig& context, double t, CellIndex cell, FanLevel fan) {
    ScenarioConfig s = context;
    std::erase_if(s.purifier_schedule, [t](const PurifierCommand& c) { return c.time >= t; });
    s.purifier_schedule.push_back({t, cell, fan});
    s.travel_time_per_cell = 0.0;
    return s;
}

double event_mrt(const Trajectory& traj, double t, BaselineReturnOptions opts) {
    opts.cell.reset();
    opts.search_from = t;
    return mrt_baseline_return(traj, t, opts).mrt;
}

double forecast_mrt(const CoughEvent& event, const ScenarioConfig& context, CellIndex cell,
                    const Forecaster& forecaster, const PolicyConfig& cfg) {
    Trajectory traj;
    try {
        traj = forecaster.forecast(with_placement(context, event.time, cell, cfg.run_fan));
    } catch (const std::exception& e) {
        throw PredictionError("forecast for cell " + std::to_string(cell) + " failed: " + e.what());
    }
    return event_mrt(traj, event.time, cfg.mrt);
}

}  // namespace

std::map<CellIndex, double> placement_mrts(const CoughEvent& event, const ScenarioConfig& context,
                                           const Forecaster& forecaster, const PolicyConfig& cfg) {
    const auto open = context.grid.accessible_cells();
    if (open.empty()) throw std::invalid_argument("no accessible cells");
    std::map<CellIndex, double> out;
    for (CellIndex c : open) out[c] = forecast_mrt(event, context, c, forecaster, cfg);
    return out;
}

PlacementDecision decide(const CoughEvent& event, CellIndex agent_cell, const ScenarioConfig& context,
                         const Forecaster& forecaster, const PolicyConfig& cfg) {
    cfg.validate();
    if (agent_cell >= context.grid.num_cells()) throw std::invalid_argument("agent cell outside grid");
    PlacementDecision d;
    d.time = event.time;
    d.predicted_mrt = placement_mrts(event, context, forecaster, cfg);

    double best = std::numeric_limits<double>::infinity();
    for (const auto& [cell, r] : d.predicted_mrt) best = std::min(best, r);
    for (const auto& [cell, r] : d.predicted_mrt)
        if (r <= best + cfg.tolerance) d.candidate_set.push_back(cell);

    // candidate_set is in index order, so the first minimum wins ties
    d.target_cell = *std::min_element(d.candidate_set.begin(), d.candidate_set.end(), [&](CellIndex a, CellIndex b) {
        return context.grid.manhattan(agent_cell, a) < context.grid.manhattan(agent_cell, b);
    });
    d.fan_action = FanAction::move_run;
    return d;
}

FanAction idle_update(double elapsed, std::optional<double> local_pm, double residence_sum, const PolicyConfig& cfg) {
    if (local_pm) return *local_pm < cfg.idle_pm_threshold ? FanAction::off : FanAction::hold;
    return elapsed > residence_sum + cfg.fan_low_timeout ? FanAction::lower : FanAction::hold;
}

namespace {

CellIndex first_open_near(const GridLayout& g, Cell want) {
    const CellIndex w = g.index(want);
    if (g.accessible(w)) return w;
    const auto open = g.accessible_cells();
    if (open.empty()) throw std::invalid_argument("no accessible cells");
    return *std::min_element(open.begin(), open.end(),
                             [&](CellIndex a, CellIndex b) { return g.manhattan(w, a) < g.manhattan(w, b); });
}

}  // namespace

EpisodeResult run_episode(const ScenarioConfig& truth, PlacementStrategy strategy, const Forecaster* forecaster,
                          const PolicyConfig& cfg, const EpisodeOptions& opts) {
    cfg.validate();
    if (truth.coughs.empty()) throw std::invalid_argument("episode needs at least one cough");
    if (strategy == PlacementStrategy::optimal && !forecaster)
        throw std::invalid_argument("the optimal strategy needs a forecaster");
    const GridLayout& g = truth.grid;
    if (opts.start_cell >= g.num_cells() || !g.accessible(opts.start_cell))
        throw std::invalid_argument("agent must start on an accessible cell");

    std::vector<CoughEvent> coughs = truth.coughs;
    std::stable_sort(coughs.begin(), coughs.end(), [](const auto& a, const auto& b) { return a.time < b.time; });

    Rng rng(opts.seed);
    EpisodeResult out;
    out.schedule.push_back({0.0, opts.start_cell, FanLevel::off});
    CellIndex agent = opts.start_cell;
    double arrival = 0.0;
    double residence_sum = 0.0;

    for (std::size_t k = 0; k < coughs.size(); ++k) {
        const CoughEvent& ev = coughs[k];
        ScenarioConfig context = truth;
        context.coughs.assign(coughs.begin(), coughs.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        context.purifier_schedule = out.schedule;

        PlacementDecision d;
        d.time = ev.time;
        switch (strategy) {
            case PlacementStrategy::optimal:
                d = decide(ev, agent, context, *forecaster, cfg);
                break;
            case PlacementStrategy::random_neighbor: {
                std::vector<CellIndex> options;
                for (CellIndex nb : g.neighbors(ev.cell))
                    if (g.accessible(nb)) options.push_back(nb);
                d.target_cell = options.empty() ? ev.cell : options[rng.index(options.size())];
                break;
            }
            case PlacementStrategy::fixed_corner:
                d.target_cell = first_open_near(g, {0, 0});
                break;
            case PlacementStrategy::static_center:
                d.target_cell = first_open_near(g, {g.rows() / 2, g.cols() / 2});
                break;
        }
        if (d.candidate_set.empty()) d.candidate_set.push_back(d.target_cell);

        const int steps = g.manhattan(agent, d.target_cell);
        const bool moving_or_starting = steps > 0 || k == 0;
        d.fan_action = moving_or_starting ? FanAction::move_run : FanAction::hold;
        out.distance_travelled += steps;
        out.schedule.push_back({ev.time, d.target_cell, cfg.run_fan});
        arrival = ev.time + truth.travel_time_per_cell * steps;
        agent = d.target_cell;

        if (opts.idle_management && forecaster) {
            const auto it = d.predicted_mrt.find(agent);
            residence_sum += it != d.predicted_mrt.end() ? it->second
                                                         : forecast_mrt(ev, context, agent, *forecaster, cfg);
            const double next = k + 1 < coughs.size() ? coughs[k + 1].time : truth.horizon;
            // the rule fires once elapsed time strictly exceeds the sum
            const double lower_at = std::max(ev.time + residence_sum + cfg.fan_low_timeout, arrival);
            if (lower_at < next) out.schedule.push_back({lower_at, agent, FanLevel::low});
        }
        out.decisions.push_back(std::move(d));
    }

    ScenarioConfig realized = truth;
    realized.purifier_schedule = out.schedule;
    out.realized = simulate(realized, opts.sim);
    const MrtReference ref = mrt_reference(realized, cfg.mrt);
    const BaselineReturn br = mrt_baseline_return(out.realized, ref.cough_time, ref.opts);
    out.mrt = br.mrt;
    out.censored = br.censored;
    return out;
}

namespace {

nlohmann::json cell_json(const GridLayout& g, CellIndex c) {
    const Cell rc = g.cell(c);
    return nlohmann::json::array({rc.row, rc.col});
}

}  // namespace

nlohmann::json decision_to_json(const PlacementDecision& d, const GridLayout& grid) {
    nlohmann::json j;
    j["time_s"] = d.time;
    j["target_cell"] = cell_json(grid, d.target_cell);
    j["fan_action"] = std::string(to_string(d.fan_action));
    j["candidate_set"] = nlohmann::json::array();
    for (CellIndex c : d.candidate_set) j["candidate_set"].push_back(cell_json(grid, c));
    j["predicted_mrt_s"] = nlohmann::json::array();
    for (const auto& [c, r] : d.predicted_mrt)
        j["predicted_mrt_s"].push_back({{"cell", cell_json(grid, c)}, {"mrt_s", r}});
    return j;
}

nlohmann::json episode_to_json(const EpisodeResult& r, const GridLayout& grid) {
    nlohmann::json j;
    j["mrt_s"] = r.mrt;
    j["censored"] = r.censored;
    j["distance_travelled"] = r.distance_travelled;
    j["schedule"] = nlohmann::json::array();
    for (const auto& c : r.schedule)
        j["schedule"].push_back(
            {{"time_s", c.time}, {"cell", cell_json(grid, c.cell)}, {"fan", std::string(to_string(c.fan))}});
    j["decisions"] = nlohmann::json::array();
    for (const auto& d : r.decisions) j["decisions"].push_back(decision_to_json(d, grid));
    return j;
}

}  // namespace aerotwin
