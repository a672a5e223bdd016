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

#ifndef AEROTWIN_SIM_COMPARTMENT_HPP
#define AEROTWIN_SIM_COMPARTMENT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aerotwin/core/scenario.hpp"

namespace aerotwin {

struct SimOptions {
    double dt = 0.1;               // s, fixed RK4 step
    double sample_interval = 1.0;  // s, must be a whole multiple of dt

    void validate() const;
    std::size_t steps_per_sample() const;
    friend bool operator==(const SimOptions&, const SimOptions&) = default;
};

/// Thrown when integration produces a non-finite or clearly negative state.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Control inputs that hold over one integration step.
struct ControlInputs {
    std::span<const double> source;           // ug/s per cell; empty means none
    std::optional<CellIndex> purifier_cell;   // filtering cell, if running
    FanLevel purifier_fan = FanLevel::high;
    std::optional<AcConfig> ac;               // scales exhaust at ac.cell
};

/// Right-hand side of the compartment balance, with rates divided through
/// by cell volume:
///   V_i dC_i/dt = sum_j (a_ji C_j - a_ij C_i) - gamma*omega*C_i [i = p] - Q_i C_i + m_i
class CompartmentSystem {
public:
    CompartmentSystem(const GridLayout& grid, const CompartmentParams& params);

    std::size_t size() const { return inv_volume_.size(); }
    void rhs(std::span<const double> c, const ControlInputs& u, std::span<double> out) const;

private:
    struct Edge {
        CellIndex from;
        CellIndex to;
        double rate;
    };
    std::vector<Edge> edges_;
    std::vector<double> inv_volume_;
    std::vector<double> exhaust_;
    double filter_rate_ = 0.0;  // gamma * nominal omega
};

/// dC/dt per cell.
std::vector<double> derivative(std::span<const double> state, const CompartmentParams& params,
                               const GridLayout& grid, const ControlInputs& controls);

/// Largest dt for which the non-negativity property is documented to hold:
/// min_i V_i / (sum_j a_ij + gamma*omega + Q_i).
double stability_dt_bound(const GridLayout& grid, const CompartmentParams& params);

/// Where the purifier is and whether it filters, as a function of time.
class PurifierTimeline {
public:
    struct State {
        std::optional<CellIndex> location;  // last commanded cell (nullopt before first command)
        bool in_transit = false;
        FanLevel fan = FanLevel::off;
        /// Cell that is being filtered right now, if any.
        std::optional<CellIndex> filtering() const {
            if (!location || in_transit || fan == FanLevel::off) return std::nullopt;
            return location;
        }
    };

    PurifierTimeline(const GridLayout& grid, std::vector<PurifierCommand> schedule, double travel_time_per_cell);
    State at(double t) const;

private:
    std::vector<PurifierCommand> schedule_;
    std::vector<double> arrival_;
};

/// Cough emission rate per cell at time t [ug/s].
void cough_sources(const ScenarioConfig& s, double t, std::span<double> out);
/// Mean emission rate over [t0, t0 + h); injects the exact cough mass for any step.
void cough_sources_step(const ScenarioConfig& s, double t0, double h, std::span<double> out);

/// Fixed-step RK4 over [0, horizon], sampled every opts.sample_interval.
/// Uses `s.params` for the physics.
Trajectory simulate(const ScenarioConfig& s, const SimOptions& opts = {});
/// Same scenario with different physical parameters.
Trajectory simulate(const ScenarioConfig& s, const CompartmentParams& params, const SimOptions& opts);

/// Total aerosol mass sum_i V_i C_i of one field.
double total_mass(const GridLayout& grid, std::span<const double> c);

}  // namespace aerotwin

#endif
