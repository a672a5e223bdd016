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

#include "aerotwin/core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aerotwin {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ScenarioError(what);
}

bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

ScenarioConfig validate_scenario(ScenarioConfig s) {
    const GridLayout& g = s.grid;
    const std::size_t n = g.num_cells();

    for (const auto& [pair, rate] : s.params.exchange_rates) {
        require(g.adjacent(pair.first, pair.second),
                "exchange rate defined for non-adjacent pair " + std::to_string(pair.first) + "->" +
                    std::to_string(pair.second));
        require(nonneg(rate), "negative rate: exchange " + std::to_string(pair.first) + "->" +
                                  std::to_string(pair.second));
    }
    for (const auto& [a, b] : g.pairs()) {
        require(s.params.exchange_rates.count({a, b}) && s.params.exchange_rates.count({b, a}),
                "missing exchange rate for adjacent pair " + std::to_string(a) + "-" + std::to_string(b));
    }
    require(s.params.exhaust_rate.size() == n, "exhaust_rate must have one entry per cell");
    for (double q : s.params.exhaust_rate) require(nonneg(q), "negative rate: exhaust_rate");
    require(std::isfinite(s.params.filter_efficiency) && s.params.filter_efficiency >= 0.0 &&
                s.params.filter_efficiency <= 1.0,
            "filter_efficiency out of range [0, 1]");
    require(nonneg(s.params.filter_airflow), "negative rate: filter_airflow");
    require(nonneg(s.params.source_scale), "negative rate: source_scale");

    require(std::isfinite(s.horizon) && s.horizon > 0.0, "horizon must be positive");
    require(s.cough_split >= 0.0 && s.cough_split <= 1.0, "cough_split out of range [0, 1]");
    require(nonneg(s.travel_time_per_cell), "travel_time_per_cell must be non-negative");
    require(s.initial.empty() || s.initial.size() == n, "initial concentration has wrong length");
    for (double c : s.initial) require(nonneg(c), "initial concentration must be non-negative");

    for (const auto& c : s.coughs) {
        require(c.cell < n, "cough cell outside grid");
        require(g.accessible(c.cell), "inaccessible cell: cough at " + std::to_string(c.cell));
        require(std::isfinite(c.time) && c.time >= 0.0, "cough time must be non-negative");
        require(c.duration > 0.0, "cough duration must be positive");
        require(c.emitted_mass > 0.0, "cough emitted_mass must be positive");
        require(c.time < s.horizon, "cough after horizon");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& p : s.purifier_schedule) {
        require(p.cell < n, "purifier cell outside grid");
        require(g.accessible(p.cell), "inaccessible cell: purifier at " + std::to_string(p.cell));
        require(std::isfinite(p.time) && p.time >= 0.0, "purifier command time must be non-negative");
        require(p.time >= prev, "purifier schedule must be sorted by time");
        prev = p.time;
    }
    require(s.ac.cell < n, "AC cell outside grid");
    require(g.accessible(s.ac.cell), "inaccessible cell: AC at " + std::to_string(s.ac.cell));
    return s;
}

double first_cough_time(const ScenarioConfig& s) {
    if (s.coughs.empty()) throw std::invalid_argument("scenario has no cough events");
    double t = s.coughs.front().time;
    for (const auto& c : s.coughs) t = std::min(t, c.time);
    return t;
}

MetricsRecord mean_metrics(const std::vector<MetricsRecord>& records) {
    MetricsRecord m;
    if (records.empty()) return m;
    std::size_t rho_count = 0;
    for (const auto& r : records) {
        m.mae += r.mae;
        m.mse += r.mse;
        m.mrte += r.mrte;
        m.censored += r.censored;
        if (r.rho_defined) {
            m.pearson_rho += r.pearson_rho;
            ++rho_count;
        }
    }
    const double k = static_cast<double>(records.size());
    m.mae /= k;
    m.mse /= k;
    m.mrte /= k;
    m.rho_defined = rho_count > 0;
    m.pearson_rho = rho_count ? m.pearson_rho / static_cast<double>(rho_count) : 0.0;
    return m;
}

}  // namespace aerotwin
