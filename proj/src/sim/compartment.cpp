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

#include "aerotwin/sim/compartment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace aerotwin {

void SimOptions::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(sample_interval >= dt)) throw std::invalid_argument("sample_interval must be >= dt");
    const double ratio = sample_interval / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
        throw std::invalid_argument("sample_interval must be an integer multiple of dt");
}

std::size_t SimOptions::steps_per_sample() const {
    return static_cast<std::size_t>(std::llround(sample_interval / dt));
}

CompartmentSystem::CompartmentSystem(const GridLayout& grid, const CompartmentParams& params) {
    const std::size_t n = grid.num_cells();
    inv_volume_.assign(n, 1.0 / grid.cell_volume());
    if (params.exhaust_rate.size() != n) throw std::invalid_argument("exhaust_rate has wrong length");
    exhaust_ = params.exhaust_rate;
    filter_rate_ = params.filter_efficiency * params.filter_airflow;
    for (const auto& [pair, rate] : params.exchange_rates) {
        if (!grid.adjacent(pair.first, pair.second))
            throw std::invalid_argument("exchange rate on non-adjacent pair");
        if (rate != 0.0) edges_.push_back({pair.first, pair.second, rate});
    }
}

void CompartmentSystem::rhs(std::span<const double> c, const ControlInputs& u, std::span<double> out) const {
    const std::size_t n = size();
    if (c.size() != n || out.size() != n) throw std::invalid_argument("state dimension mismatch");
    if (!u.source.empty() && u.source.size() != n) throw std::invalid_argument("source dimension mismatch");

    for (std::size_t i = 0; i < n; ++i) out[i] = -exhaust_[i] * c[i];
    if (u.ac) {
        // AC cell exhaust follows its fan; other vents run at nominal rate.
        const double m = u.ac->on ? fan_multiplier(u.ac->fan) : 0.0;
        out[u.ac->cell] = -exhaust_[u.ac->cell] * m * c[u.ac->cell];
    }
    for (const Edge& e : edges_) {
        const double flux = e.rate * c[e.from];
        out[e.from] -= flux;
        out[e.to] += flux;
    }
    if (u.purifier_cell) {
        const CellIndex p = *u.purifier_cell;
        out[p] -= filter_rate_ * fan_multiplier(u.purifier_fan) * c[p];
    }
    if (!u.source.empty())
        for (std::size_t i = 0; i < n; ++i) out[i] += u.source[i];
    for (std::size_t i = 0; i < n; ++i) out[i] *= inv_volume_[i];
}

std::vector<double> derivative(std::span<const double> state, const CompartmentParams& params,
                               const GridLayout& grid, const ControlInputs& controls) {
    if (state.size() != grid.num_cells()) throw std::invalid_argument("state dimension mismatch");
    CompartmentSystem sys(grid, params);
    std::vector<double> out(state.size());
    sys.rhs(state, controls, out);
    return out;
}

double stability_dt_bound(const GridLayout& grid, const CompartmentParams& params) {
    std::vector<double> outflow(grid.num_cells(), 0.0);
    for (const auto& [pair, rate] : params.exchange_rates) outflow[pair.first] += rate;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < outflow.size(); ++i) {
        const double total = outflow[i] + params.filter_efficiency * params.filter_airflow + params.exhaust_rate[i];
        if (total > 0.0) bound = std::min(bound, grid.cell_volume() / total);
    }
    return bound;
}

PurifierTimeline::PurifierTimeline(const GridLayout& grid, std::vector<PurifierCommand> schedule,
                                   double travel_time_per_cell)
    : schedule_(std::move(schedule)) {
    std::stable_sort(schedule_.begin(), schedule_.end(),
                     [](const PurifierCommand& a, const PurifierCommand& b) { return a.time < b.time; });
    arrival_.resize(schedule_.size());
    for (std::size_t k = 0; k < schedule_.size(); ++k) {
        double travel = 0.0;
        if (k > 0) travel = travel_time_per_cell * grid.manhattan(schedule_[k - 1].cell, schedule_[k].cell);
        arrival_[k] = schedule_[k].time + travel;
    }
}

PurifierTimeline::State PurifierTimeline::at(double t) const {
    State st;
    auto it = std::upper_bound(schedule_.begin(), schedule_.end(), t,
                               [](double v, const PurifierCommand& c) { return v < c.time; });
    if (it == schedule_.begin()) return st;
    const std::size_t k = static_cast<std::size_t>(it - schedule_.begin()) - 1;
    st.location = schedule_[k].cell;
    st.fan = schedule_[k].fan;
    st.in_transit = t < arrival_[k];
    return st;
}

void cough_sources(const ScenarioConfig& s, double t, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& c : s.coughs) {
        if (t < c.time || t >= c.time + c.duration) continue;
        const double rate = s.params.source_scale * c.emitted_mass / c.duration;
        if (auto f = s.grid.facing(c.cell, c.direction)) {
            out[c.cell] += s.cough_split * rate;
            out[*f] += (1.0 - s.cough_split) * rate;
        } else {
            out[c.cell] += rate;
        }
    }
}

void cough_sources_step(const ScenarioConfig& s, double t0, double h, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& c : s.coughs) {
        const double overlap = std::min(t0 + h, c.time + c.duration) - std::max(t0, c.time);
        if (overlap <= 0.0) continue;
        const double rate = s.params.source_scale * c.emitted_mass / c.duration * overlap / h;
        if (auto f = s.grid.facing(c.cell, c.direction)) {
            out[c.cell] += s.cough_split * rate;
            out[*f] += (1.0 - s.cough_split) * rate;
        } else {
            out[c.cell] += rate;
        }
    }
}

double total_mass(const GridLayout& grid, std::span<const double> c) {
    double m = 0.0;
    for (double v : c) m += v;
    return m * grid.cell_volume();
}

Trajectory simulate(const ScenarioConfig& s, const SimOptions& opts) { return simulate(s, s.params, opts); }

Trajectory simulate(const ScenarioConfig& scenario, const CompartmentParams& params, const SimOptions& opts) {
    opts.validate();
    ScenarioConfig s = scenario;
    s.params = params;
    s = validate_scenario(std::move(s));

    const std::size_t n = s.grid.num_cells();
    const CompartmentSystem sys(s.grid, s.params);
    const PurifierTimeline purifier(s.grid, s.purifier_schedule, s.travel_time_per_cell);
    const std::size_t per_sample = opts.steps_per_sample();
    const std::size_t samples =
        static_cast<std::size_t>(std::floor(s.horizon / opts.sample_interval + 1e-9)) + 1;

    std::vector<double> c = s.initial.empty() ? std::vector<double>(n, 0.0) : s.initial;
    std::vector<double> data;
    data.reserve(samples * n);
    data.insert(data.end(), c.begin(), c.end());

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), src(n);
    const double h = opts.dt;
    ControlInputs u;
    u.ac = s.ac;
    for (std::size_t k = 1; k < samples; ++k) {
        for (std::size_t step = 0; step < per_sample; ++step) {
            const double t0 = static_cast<double>((k - 1) * per_sample + step) * h;
            // Purifier state sampled at the step midpoint; emission averaged over the step.
            const double tm = t0 + 0.5 * h;
            cough_sources_step(s, t0, h, src);
            const auto pst = purifier.at(tm);
            u.source = src;
            u.purifier_cell = pst.filtering();
            u.purifier_fan = pst.fan;

            sys.rhs(c, u, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k1[i];
            sys.rhs(tmp, u, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + 0.5 * h * k2[i];
            sys.rhs(tmp, u, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = c[i] + h * k3[i];
            sys.rhs(tmp, u, k4);
            for (std::size_t i = 0; i < n; ++i) {
                double v = c[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                if (!std::isfinite(v))
                    throw NumericalError("non-finite concentration at t=" + std::to_string(t0 + h) +
                                         " (step too large?)");
                if (v < 0.0) {
                    if (v < -1e-12)
                        throw NumericalError("negative concentration " + std::to_string(v) + " at t=" +
                                             std::to_string(t0 + h) + " (step too large?)");
                    v = 0.0;
                }
                c[i] = v;
            }
        }
        data.insert(data.end(), c.begin(), c.end());
    }
    return Trajectory(0.0, opts.sample_interval, n, std::move(data), Provenance::simulated);
}

}  // namespace aerotwin
