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

#ifndef AEROTWIN_ESTIMATION_FIT_HPP
#define AEROTWIN_ESTIMATION_FIT_HPP

#include <span>
#include <string>
#include <vector>

#include "aerotwin/core/scenario.hpp"
#include "aerotwin/estimation/differential_evolution.hpp"
#include "aerotwin/sim/compartment.hpp"

namespace aerotwin {

enum class ExchangeTying { symmetric, directed };

/// What the decision vector contains and how it is bounded.
struct FitSpec {
    ExchangeTying tying = ExchangeTying::symmetric;
    /// Cells whose exhaust is fitted; empty means the AC cell of the first skeleton.
    std::vector<CellIndex> vent_cells;
    Bounds exchange_bounds{0.0, 0.2};
    Bounds exhaust_bounds{0.0, 0.3};
    Bounds source_scale_bounds{0.25, 4.0};
    bool fit_source_scale = true;
    SimOptions sim{1.0, 1.0};
};

/// Maps a flat decision vector onto CompartmentParams:
/// [exchange rates (per unordered or ordered pair), exhaust per vent, source scale].
class ParamVector {
public:
    ParamVector(const GridLayout& grid, const FitSpec& spec);

    std::size_t dimension() const { return bounds_.size(); }
    const std::vector<Bounds>& bounds() const { return bounds_; }
    const std::vector<std::string>& names() const { return names_; }

    /// Filter terms are left at zero: fitting data has no active purifier.
    CompartmentParams to_params(std::span<const double> x) const;
    std::vector<double> from_params(const CompartmentParams& p) const;

private:
    GridLayout grid_;
    FitSpec spec_;
    std::vector<std::pair<CellIndex, CellIndex>> exchange_slots_;
    std::vector<Bounds> bounds_;
    std::vector<std::string> names_;
};

struct FitResult {
    CompartmentParams best_params;
    double best_fitness = 0.0;  // MSE (ug/m^3)^2
    std::size_t generations_run = 0;
    std::vector<double> fitness_history;
};

/// Mean squared error between simulate(scenario, params) and the observed
/// trajectory, pooled over every observation. Unstable parameter sets score
/// a large finite penalty.
double trajectory_mse(std::span<const Observation> data, const CompartmentParams& params, const SimOptions& sim);

/// Fits exchange, exhaust and source-scale terms by differential evolution.
/// `de.bounds` is filled from the spec when empty. The scenarios' own
/// params are ignored. Throws if a scenario runs the purifier or the
/// observed trajectory does not line up with the simulator sampling.
FitResult fit_params(std::span<const Observation> data, const FitSpec& spec, DeConfig de);
FitResult fit_params(const Trajectory& observed, const ScenarioConfig& skeleton, const FitSpec& spec, DeConfig de);

/// Fills in vent cells (AC cell of `skeleton`) when the spec leaves them empty.
FitSpec resolve_fit_spec(const FitSpec& spec, const ScenarioConfig& skeleton);

/// Default DE settings for a spec: population 15 x dimension, F 0.8, CR 0.9.
DeConfig default_fit_de_config(const ScenarioConfig& skeleton, const FitSpec& spec, std::uint64_t seed);

}  // namespace aerotwin

#endif
