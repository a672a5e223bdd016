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

#include "aerotwin/twin/features.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "aerotwin/sim/compartment.hpp"

namespace aerotwin {

Normalization fit_normalization(std::span<const Observation> train, std::span<const Trajectory> bases) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    auto scan = [&](const Trajectory& t) {
        for (double v : t.data()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    for (const auto& o : train) scan(o.trajectory);
    for (const auto& b : bases) scan(b);
    if (!std::isfinite(lo)) return {};
    return {lo, hi};
}

std::size_t frame_width(const GridLayout& grid) { return 4 * grid.num_cells() + 9; }

SequenceInput build_inputs(const ScenarioConfig& s, const Trajectory& base, const Normalization& norm,
                           bool with_nodes) {
    const std::size_t n = s.grid.num_cells();
    if (base.num_cells() != n) throw std::invalid_argument("base trajectory does not match the grid");
    const auto steps = static_cast<Eigen::Index>(base.size());
    const auto ni = static_cast<Eigen::Index>(n);
    SequenceInput in;
    in.frames = RowMatrix::Zero(steps, static_cast<Eigen::Index>(frame_width(s.grid)));
    if (with_nodes) in.nodes = RowMatrix::Zero(steps, ni * static_cast<Eigen::Index>(node_feature_count));

    const PurifierTimeline timeline(s.grid, s.purifier_schedule, s.travel_time_per_cell);
    const double ac_level = s.ac.on ? fan_multiplier(s.ac.fan) : 0.0;
    const double inv = 1.0 / norm.scale();
    const Eigen::Index o_dir = ni, o_pur = ni + 4, o_pfan = 2 * ni + 5, o_ac = 2 * ni + 6, o_acfan = 3 * ni + 6,
                       o_time = 3 * ni + 7, o_base = 3 * ni + 9;

    for (Eigen::Index k = 0; k < steps; ++k) {
        const double t = base.time(static_cast<std::size_t>(k));
        auto row = in.frames.row(k);
        const CoughEvent* latest = nullptr;
        for (const auto& c : s.coughs)
            if (c.time <= t && (!latest || c.time >= latest->time)) latest = &c;
        if (latest) {
            row(static_cast<Eigen::Index>(latest->cell)) = 1.0;
            row(o_dir + static_cast<Eigen::Index>(latest->direction)) = 1.0;
        }
        const auto state = timeline.at(t);
        const auto filtering = state.filtering();
        const double pur_level = filtering ? fan_multiplier(state.fan) : 0.0;
        row(o_pur + (filtering ? static_cast<Eigen::Index>(*filtering) : ni)) = 1.0;
        row(o_pfan) = pur_level;
        row(o_ac + static_cast<Eigen::Index>(s.ac.cell)) = 1.0;
        row(o_acfan) = ac_level;
        const double phase = 2.0 * std::numbers::pi * t / s.horizon;
        row(o_time) = std::sin(phase);
        row(o_time + 1) = std::cos(phase);
        for (std::size_t c = 0; c < n; ++c)
            row(o_base + static_cast<Eigen::Index>(c)) = (base.at(static_cast<std::size_t>(k), c) - norm.lo) * inv;

        if (!with_nodes) continue;
        auto nodes = in.nodes.row(k);
        for (std::size_t c = 0; c < n; ++c) {
            const auto b = static_cast<Eigen::Index>(c * node_feature_count);
            nodes(b) = row(o_base + static_cast<Eigen::Index>(c));
            nodes(b + 1) = latest && latest->cell == c ? 1.0 : 0.0;
            nodes(b + 2) = filtering && *filtering == c ? pur_level : 0.0;
            nodes(b + 3) = s.ac.cell == c ? ac_level : 0.0;
            nodes(b + 4) = row(o_time);
            nodes(b + 5) = row(o_time + 1);
        }
    }
    return in;
}

}  // namespace aerotwin
