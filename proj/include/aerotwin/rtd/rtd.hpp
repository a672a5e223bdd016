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

#ifndef AEROTWIN_RTD_RTD_HPP
#define AEROTWIN_RTD_RTD_HPP

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "aerotwin/core/scenario.hpp"
#include "aerotwin/core/trajectory.hpp"

namespace aerotwin {

struct RtdPoint {
    double t = 0.0;
    double f = 0.0;
    friend bool operator==(const RtdPoint&, const RtdPoint&) = default;
};

/// Cumulative residence-time distribution of an outlet series,
/// F(t_k) = int_0^{t_k} C / int_0^T C, by the trapezoidal rule.
/// Throws if the series has negative values or integrates to zero.
std::vector<RtdPoint> cumulative_rtd(std::span<const double> times, std::span<const double> conc);

/// First moment sum t * dF, with each increment placed at its interval midpoint.
double mrt_moment(std::span<const RtdPoint> f_curve);

struct BaselineReturnOptions {
    double baseline_window = 60.0;  // s before the cough
    double band = 0.05;             // fraction of the peak excess over baseline
    double hold = 30.0;             // s the signal must stay inside the band
    /// nullopt: spatial-mean signal with the median per-cell baseline.
    std::optional<std::size_t> cell;
    /// Where to start looking for the peak; defaults to the cough time.
    /// Multi-cough runs pass the last cough time here.
    std::optional<double> search_from;
};

struct BaselineReturn {
    double mrt = 0.0;       // s after the cough
    double baseline = 0.0;
    double peak = 0.0;
    bool censored = false;  // never settled; mrt = end - cough_time
};

/// Time from `cough_time` until the signal, after its post-cough peak,
/// enters and stays within band * (peak - baseline) of the baseline for
/// `hold` seconds. The entry time is interpolated linearly between samples.
BaselineReturn mrt_baseline_return(const Trajectory& traj, double cough_time, const BaselineReturnOptions& opts = {});

struct RtdResult {
    std::vector<RtdPoint> f_curve;  // t relative to the cough
    double mrt_moment = 0.0;
    BaselineReturn baseline_return;
};

/// Full report: excess-over-baseline outlet series after the cough feeds the
/// F curve and moment MRT; the baseline-return MRT uses `opts`.
/// `outlet` nullopt uses the spatial mean.
RtdResult analyze_rtd(const Trajectory& traj, double cough_time, std::optional<std::size_t> outlet,
                      const BaselineReturnOptions& opts = {});

nlohmann::json rtd_to_json(const RtdResult& r);

/// Reference point for a scenario's MRT: measured from the first cough,
/// with the peak searched after the last one.
struct MrtReference {
    double cough_time = 0.0;
    BaselineReturnOptions opts;
};
MrtReference mrt_reference(const ScenarioConfig& s, BaselineReturnOptions opts = {});

}  // namespace aerotwin

#endif
