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

#include "aerotwin/core/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aerotwin/core/text.hpp"

namespace aerotwin {

Trajectory::Trajectory(double start_time, double sample_interval, std::size_t num_cells,
                       std::vector<double> data, Provenance provenance)
    : start_time_(start_time), sample_interval_(sample_interval), num_cells_(num_cells),
      data_(std::move(data)), provenance_(provenance) {
    if (!(sample_interval_ > 0.0)) throw std::invalid_argument("sample_interval must be positive");
    if (num_cells_ == 0) throw std::invalid_argument("trajectory needs at least one cell");
    if (data_.empty()) throw std::invalid_argument("trajectory must be non-empty");
    if (data_.size() % num_cells_ != 0)
        throw std::invalid_argument("trajectory data is not a whole number of fields");
    for (double v : data_) {
        if (!std::isfinite(v)) throw std::invalid_argument("trajectory contains a non-finite value");
        if (v < 0.0) throw std::invalid_argument("trajectory contains a negative concentration");
    }
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = time(k);
    return out;
}

ConcentrationField Trajectory::field(std::size_t k) const {
    auto r = row(k);
    return {time(k), std::vector<double>(r.begin(), r.end())};
}

std::vector<double> Trajectory::series(std::size_t cell) const {
    if (cell >= num_cells_) throw std::out_of_range("cell outside trajectory");
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k, cell);
    return out;
}

std::vector<double> Trajectory::spatial_mean() const {
    std::vector<double> out(size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double s = 0.0;
        for (std::size_t c = 0; c < num_cells_; ++c) s += at(k, c);
        out[k] = s / static_cast<double>(num_cells_);
    }
    return out;
}

bool Trajectory::aligned_with(const Trajectory& other) const {
    return num_cells_ == other.num_cells_ && size() == other.size() &&
           std::abs(start_time_ - other.start_time_) < 1e-9 &&
           std::abs(sample_interval_ - other.sample_interval_) < 1e-9 * sample_interval_;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    out << "t_s";
    for (std::size_t c = 0; c < t.num_cells(); ++c) out << ",c_" << c;
    out << '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
        out << format_double(t.time(k));
        for (std::size_t c = 0; c < t.num_cells(); ++c) out << ',' << format_double(t.at(k, c));
        out << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trajectory_csv(f, t);
}

Trajectory read_trajectory_csv(std::istream& in, Provenance provenance) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trajectory CSV is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || trim(header[0]) != "t_s")
        throw std::runtime_error("trajectory CSV header must start with t_s");
    const std::size_t n = header.size() - 1;

    std::vector<double> times;
    std::vector<double> data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != n + 1)
            throw std::runtime_error("trajectory CSV line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(n + 1) + " columns");
        times.push_back(parse_double(cols[0]));
        for (std::size_t c = 0; c < n; ++c) data.push_back(parse_double(cols[c + 1]));
    }
    if (times.empty()) throw std::runtime_error("trajectory CSV has no rows");
    double interval = 1.0;
    if (times.size() > 1) {
        interval = times[1] - times[0];
        if (!(interval > 0.0)) throw std::runtime_error("trajectory timestamps must increase");
        for (std::size_t k = 1; k < times.size(); ++k) {
            const double expected = times[0] + static_cast<double>(k) * interval;
            if (std::abs(times[k] - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
                throw std::runtime_error("trajectory timestamps are not uniformly spaced at row " +
                                         std::to_string(k));
        }
    }
    return Trajectory(times[0], interval, n, std::move(data), provenance);
}

Trajectory read_trajectory_csv(const std::string& path, Provenance provenance) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return read_trajectory_csv(f, provenance);
}

}  // namespace aerotwin
