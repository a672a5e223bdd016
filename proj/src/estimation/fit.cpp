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

#include "aerotwin/estimation/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace aerotwin {

ParamVector::ParamVector(const GridLayout& grid, const FitSpec& spec) : grid_(grid), spec_(spec) {
    for (const auto& [a, b] : grid.pairs()) {
        exchange_slots_.emplace_back(a, b);
        if (spec.tying == ExchangeTying::directed) exchange_slots_.emplace_back(b, a);
    }
    for (const auto& [a, b] : exchange_slots_) {
        bounds_.push_back(spec.exchange_bounds);
        names_.push_back("alpha_" + std::to_string(a) + (spec.tying == ExchangeTying::symmetric ? "_" : "->") +
                         std::to_string(b));
    }
    for (CellIndex v : spec.vent_cells) {
        if (v >= grid.num_cells()) throw std::invalid_argument("vent cell outside grid");
        bounds_.push_back(spec.exhaust_bounds);
        names_.push_back("Q_" + std::to_string(v));
    }
    if (spec.fit_source_scale) {
        bounds_.push_back(spec.source_scale_bounds);
        names_.push_back("source_scale");
    }
}

CompartmentParams ParamVector::to_params(std::span<const double> x) const {
    if (x.size() != dimension()) throw std::invalid_argument("decision vector has wrong dimension");
    CompartmentParams p = CompartmentParams::zeros(grid_);
    std::size_t k = 0;
    for (const auto& [a, b] : exchange_slots_) {
        if (spec_.tying == ExchangeTying::symmetric)
            p.set_symmetric_exchange(a, b, x[k]);
        else
            p.set_exchange(a, b, x[k]);
        ++k;
    }
    for (CellIndex v : spec_.vent_cells) p.exhaust_rate[v] = x[k++];
    if (spec_.fit_source_scale) p.source_scale = x[k++];
    return p;
}

std::vector<double> ParamVector::from_params(const CompartmentParams& p) const {
    std::vector<double> x;
    for (const auto& [a, b] : exchange_slots_) x.push_back(p.exchange(a, b));
    for (CellIndex v : spec_.vent_cells) x.push_back(p.exhaust_rate.at(v));
    if (spec_.fit_source_scale) x.push_back(p.source_scale);
    return x;
}

double trajectory_mse(std::span<const Observation> data, const CompartmentParams& params, const SimOptions& sim) {
    double sse = 0.0;
    std::size_t count = 0;
    for (const auto& obs : data) {
        Trajectory pred;
        try {
            pred = simulate(obs.scenario, params, sim);
        } catch (const NumericalError&) {
            return 1e30;
        }
        const auto& a = pred.data();
        const auto& b = obs.trajectory.data();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            sse += d * d;
        }
        count += a.size();
    }
    return count ? sse / static_cast<double>(count) : 0.0;
}

FitSpec resolve_fit_spec(const FitSpec& spec, const ScenarioConfig& skeleton) {
    FitSpec out = spec;
    if (out.vent_cells.empty()) out.vent_cells.push_back(skeleton.ac.cell);
    return out;
}

DeConfig default_fit_de_config(const ScenarioConfig& skeleton, const FitSpec& spec, std::uint64_t seed) {
    return DeConfig::for_bounds(ParamVector(skeleton.grid, resolve_fit_spec(spec, skeleton)).bounds(), seed);
}

FitResult fit_params(std::span<const Observation> data, const FitSpec& spec_in, DeConfig de) {
    if (data.empty()) throw std::invalid_argument("fit_params needs at least one observation");
    const FitSpec spec = resolve_fit_spec(spec_in, data.front().scenario);
    const GridLayout& grid = data.front().scenario.grid;

    for (const auto& obs : data) {
        if (!(obs.scenario.grid == grid)) throw std::invalid_argument("all observations must share one grid");
        for (const auto& cmd : obs.scenario.purifier_schedule)
            if (cmd.fan != FanLevel::off)
                throw std::invalid_argument("fitting data must not run the purifier");
        const std::size_t samples =
            static_cast<std::size_t>(std::floor(obs.scenario.horizon / spec.sim.sample_interval + 1e-9)) + 1;
        const Trajectory& t = obs.trajectory;
        if (t.num_cells() != grid.num_cells() || t.size() != samples || std::abs(t.start_time()) > 1e-9 ||
            std::abs(t.sample_interval() - spec.sim.sample_interval) > 1e-9)
            throw std::invalid_argument("observed trajectory is misaligned with the simulator sampling");
    }

    const ParamVector map(grid, spec);
    if (de.bounds.empty()) de.bounds = map.bounds();
    if (de.bounds.size() != map.dimension()) throw std::invalid_argument("DE bounds do not match the fit dimension");

    auto objective = [&](std::span<const double> x) { return trajectory_mse(data, map.to_params(x), spec.sim); };
    const DeResult r = de_minimize(objective, de);

    FitResult out;
    out.best_params = map.to_params(r.best);
    out.best_fitness = r.best_fitness;
    out.generations_run = r.generations_run;
    out.fitness_history = r.history;
    return out;
}

FitResult fit_params(const Trajectory& observed, const ScenarioConfig& skeleton, const FitSpec& spec, DeConfig de) {
    const Observation obs{skeleton, observed};
    return fit_params(std::span<const Observation>(&obs, 1), spec, std::move(de));
}

}  // namespace aerotwin
