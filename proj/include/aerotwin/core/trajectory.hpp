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

#ifndef AEROTWIN_CORE_TRAJECTORY_HPP
#define AEROTWIN_CORE_TRAJECTORY_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace aerotwin {

enum class Provenance { simulated, sensed, predicted };

struct ConcentrationField {
    double timestamp = 0.0;       // s since scenario start
    std::vector<double> values;   // ug/m^3 per cell
    friend bool operator==(const ConcentrationField&, const ConcentrationField&) = default;
};

/// Uniformly sampled per-cell concentration series. Storage is a dense
/// row-major (samples x cells) block; timestamps are start + k * interval.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(double start_time, double sample_interval, std::size_t num_cells,
               std::vector<double> data, Provenance provenance);

    std::size_t size() const { return num_cells_ == 0 ? 0 : data_.size() / num_cells_; }
    std::size_t num_cells() const { return num_cells_; }
    double start_time() const { return start_time_; }
    double sample_interval() const { return sample_interval_; }
    Provenance provenance() const { return provenance_; }
    void set_provenance(Provenance p) { provenance_ = p; }

    double time(std::size_t k) const { return start_time_ + static_cast<double>(k) * sample_interval_; }
    double end_time() const { return time(size() - 1); }
    std::vector<double> times() const;

    double at(std::size_t k, std::size_t cell) const { return data_[k * num_cells_ + cell]; }
    double& at(std::size_t k, std::size_t cell) { return data_[k * num_cells_ + cell]; }
    std::span<const double> row(std::size_t k) const {
        return {data_.data() + k * num_cells_, num_cells_};
    }
    ConcentrationField field(std::size_t k) const;

    std::vector<double> series(std::size_t cell) const;
    std::vector<double> spatial_mean() const;

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& mutable_data() { return data_; }

    /// True if both share start, interval, length and cell count.
    bool aligned_with(const Trajectory& other) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    double start_time_ = 0.0;
    double sample_interval_ = 1.0;
    std::size_t num_cells_ = 0;
    std::vector<double> data_;
    Provenance provenance_ = Provenance::simulated;
};

/// CSV with header `t_s,c_0,...,c_{n-1}`; timestamps printed with full
/// round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);
void write_trajectory_csv(const std::string& path, const Trajectory& t);
Trajectory read_trajectory_csv(std::istream& in, Provenance provenance = Provenance::sensed);
Trajectory read_trajectory_csv(const std::string& path, Provenance provenance = Provenance::sensed);

}  // namespace aerotwin

#endif
