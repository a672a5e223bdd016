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

#ifndef AEROTWIN_HARNESS_SENSOR_CSV_HPP
#define AEROTWIN_HARNESS_SENSOR_CSV_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerotwin/core/grid.hpp"
#include "aerotwin/core/trajectory.hpp"

namespace aerotwin {

/// One line of a sensor log. Mass in ug/m^3, number in #/cm^3.
struct SensorCsvRow {
    double timestamp = 0.0;  // s
    std::string sensor_id;
    CellIndex cell = 0;
    double pm1_0 = 0.0, pm2_5 = 0.0, pm4_0 = 0.0, pm10 = 0.0;
    double n1_0 = 0.0, n2_5 = 0.0, n4_0 = 0.0, n10 = 0.0;
};

class SensorCsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// sensor_id -> cell. JSON form: {"sensors": {"id": [row, col], ...}}.
using SensorMap = std::map<std::string, CellIndex>;
SensorMap sensor_map_from_json(const nlohmann::json& j, const GridLayout& grid);
nlohmann::json sensor_map_to_json(const SensorMap& m, const GridLayout& grid);
/// One sensor per cell named "s<index>".
SensorMap default_sensor_map(const GridLayout& grid);

/// Parses the log; rejects unknown sensors, negative readings and
/// timestamps that go backwards for a sensor.
std::vector<SensorCsvRow> read_sensor_rows(std::istream& in, const SensorMap& map);

struct IngestOptions {
    double sample_interval = 1.0;  // s
    /// Output window; defaults to the span every sensor covers.
    std::optional<double> start;
    std::optional<double> end;
    double max_gap = 10.0;  // s between consecutive readings before a gap is flagged
};

struct SensorGap {
    std::string sensor_id;
    double from = 0.0;
    double to = 0.0;
};

struct IngestResult {
    Trajectory trajectory;  // pm2_5 per cell, sensors on one cell averaged
    std::vector<SensorGap> gaps;
};

/// Resamples pm2_5 onto a uniform grid by linear interpolation. Every cell
/// of `grid` needs at least one sensor.
IngestResult ingest_sensor_csv(std::istream& in, const SensorMap& map, const GridLayout& grid,
                               const IngestOptions& opts = {});
IngestResult ingest_sensor_csv(const std::string& path, const SensorMap& map, const GridLayout& grid,
                               const IngestOptions& opts = {});

/// Writes a trajectory as a sensor log (one row per sensor per sample).
/// pm2_5 carries the value; the other mass bins use fixed ratios and the
/// number bins a fixed mass-to-count factor.
void write_sensor_csv(std::ostream& out, const Trajectory& t, const SensorMap& map);

}  // namespace aerotwin

#endif
