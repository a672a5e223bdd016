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

#include "aerotwin/harness/sensor_csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "aerotwin/core/text.hpp"

namespace aerotwin {

namespace {

constexpr const char* kColumns[] = {"timestamp_s", "sensor_id", "pm1_0", "pm2_5", "pm4_0",
                                    "pm10",        "n1_0",      "n2_5",  "n4_0",  "n10"};

CellIndex cell_from_json(const nlohmann::json& j, const GridLayout& g) {
    const Cell c{j.at(0).get<int>(), j.at(1).get<int>()};
    if (!g.contains(c)) throw SensorCsvError("sensor cell outside the grid");
    return g.index(c);
}

}  // namespace

SensorMap sensor_map_from_json(const nlohmann::json& j, const GridLayout& grid) {
    SensorMap m;
    for (const auto& [id, cell] : j.at("sensors").items()) m[id] = cell_from_json(cell, grid);
    return m;
}

nlohmann::json sensor_map_to_json(const SensorMap& m, const GridLayout& grid) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [id, c] : m) {
        const Cell rc = grid.cell(c);
        s[id] = {rc.row, rc.col};
    }
    return {{"sensors", s}};
}

SensorMap default_sensor_map(const GridLayout& grid) {
    SensorMap m;
    for (CellIndex c = 0; c < grid.num_cells(); ++c) m["s" + std::to_string(c)] = c;
    return m;
}

std::vector<SensorCsvRow> read_sensor_rows(std::istream& in, const SensorMap& map) {
    std::string line;
    if (!std::getline(in, line)) throw SensorCsvError("empty sensor log");
    const auto header = split_csv_line(line);
    std::array<std::size_t, std::size(kColumns)> col{};
    for (std::size_t k = 0; k < std::size(kColumns); ++k) {
        const auto it = std::find(header.begin(), header.end(), kColumns[k]);
        if (it == header.end()) throw SensorCsvError(std::string("missing column ") + kColumns[k]);
        col[k] = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<SensorCsvRow> rows;
    std::map<std::string, double> last_time;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw SensorCsvError("line " + std::to_string(lineno) + ": wrong field count");
        SensorCsvRow r;
        try {
            r.timestamp = parse_double(f[col[0]]);
            r.sensor_id = f[col[1]];
            double* values[] = {&r.pm1_0, &r.pm2_5, &r.pm4_0, &r.pm10, &r.n1_0, &r.n2_5, &r.n4_0, &r.n10};
            for (std::size_t k = 0; k < 8; ++k) *values[k] = parse_double(f[col[k + 2]]);
            for (double* v : values)
                if (!(*v >= 0.0)) throw SensorCsvError("negative reading");
        } catch (const SensorCsvError& e) {
            throw SensorCsvError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception& e) {
            throw SensorCsvError("line " + std::to_string(lineno) + ": bad number (" + e.what() + ")");
        }
        const auto it = map.find(r.sensor_id);
        if (it == map.end()) throw SensorCsvError("line " + std::to_string(lineno) + ": unknown sensor_id " + r.sensor_id);
        r.cell = it->second;
        const auto [prev, fresh] = last_time.try_emplace(r.sensor_id, r.timestamp);
        if (!fresh) {
            if (!(r.timestamp > prev->second))
                throw SensorCsvError("line " + std::to_string(lineno) + ": timestamps of " + r.sensor_id +
                                     " are not increasing");
            prev->second = r.timestamp;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

IngestResult ingest_sensor_csv(std::istream& in, const SensorMap& map, const GridLayout& grid,
                               const IngestOptions& opts) {
    if (!(opts.sample_interval > 0.0)) throw std::invalid_argument("sample_interval must be positive");
    const auto rows = read_sensor_rows(in, map);

    struct Series {
        CellIndex cell;
        std::vector<double> t, v;
    };
    std::map<std::string, Series> series;
    for (const auto& r : rows) {
        auto& s = series.try_emplace(r.sensor_id, Series{r.cell, {}, {}}).first->second;
        s.t.push_back(r.timestamp);
        s.v.push_back(r.pm2_5);
    }
    std::vector<int> per_cell(grid.num_cells(), 0);
    for (const auto& [id, s] : series) {
        if (s.cell >= grid.num_cells()) throw SensorCsvError("sensor " + id + " maps outside the grid");
        ++per_cell[s.cell];
    }
    for (CellIndex c = 0; c < grid.num_cells(); ++c)
        if (per_cell[c] == 0) throw SensorCsvError("no sensor reports for cell " + std::to_string(c));

    double lo = -INFINITY, hi = INFINITY;
    for (const auto& [id, s] : series) {
        lo = std::max(lo, s.t.front());
        hi = std::min(hi, s.t.back());
    }
    const double start = opts.start.value_or(lo);
    const double end = opts.end.value_or(hi);
    if (start < lo - 1e-9 || end > hi + 1e-9) throw SensorCsvError("requested window exceeds sensor coverage");
    if (!(end >= start)) throw SensorCsvError("sensors share no common time span");
    const std::size_t n = static_cast<std::size_t>(std::floor((end - start) / opts.sample_interval + 1e-9)) + 1;

    IngestResult out;
    std::vector<double> data(n * grid.num_cells(), 0.0);
    for (const auto& [id, s] : series) {
        for (std::size_t k = 1; k < s.t.size(); ++k)
            if (s.t[k] - s.t[k - 1] > opts.max_gap) out.gaps.push_back({id, s.t[k - 1], s.t[k]});
        std::size_t j = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = start + static_cast<double>(k) * opts.sample_interval;
            while (j + 2 < s.t.size() && s.t[j + 1] < t) ++j;
            double v;
            if (s.t.size() == 1) {
                v = s.v[0];
            } else {
                const double w = std::clamp((t - s.t[j]) / (s.t[j + 1] - s.t[j]), 0.0, 1.0);
                v = s.v[j] + w * (s.v[j + 1] - s.v[j]);
            }
            data[k * grid.num_cells() + s.cell] += v / per_cell[s.cell];
        }
    }
    out.trajectory = Trajectory(start, opts.sample_interval, grid.num_cells(), std::move(data), Provenance::sensed);
    return out;
}

IngestResult ingest_sensor_csv(const std::string& path, const SensorMap& map, const GridLayout& grid,
                               const IngestOptions& opts) {
    std::ifstream in(path);
    if (!in) throw SensorCsvError("cannot open " + path);
    return ingest_sensor_csv(in, map, grid, opts);
}

void write_sensor_csv(std::ostream& out, const Trajectory& t, const SensorMap& map) {
    for (std::size_t k = 0; k < std::size(kColumns); ++k) out << (k ? "," : "") << kColumns[k];
    out << '\n';
    for (std::size_t k = 0; k < t.size(); ++k)
        for (const auto& [id, cell] : map) {
            if (cell >= t.num_cells()) throw std::invalid_argument("sensor map does not fit the trajectory");
            const double pm = t.at(k, cell);
            // other bins: fixed ratios to pm2_5
            out << format_double(t.time(k)) << ',' << id << ',' << format_double(0.7 * pm) << ','
                << format_double(pm) << ',' << format_double(1.1 * pm) << ',' << format_double(1.2 * pm) << ','
                << format_double(14.0 * pm) << ',' << format_double(20.0 * pm) << ','
                << format_double(22.0 * pm) << ',' << format_double(24.0 * pm) << '\n';
        }
}

}  // namespace aerotwin
