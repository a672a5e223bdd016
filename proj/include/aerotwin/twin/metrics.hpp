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

#ifndef AEROTWIN_TWIN_METRICS_HPP
#define AEROTWIN_TWIN_METRICS_HPP

#include "aerotwin/core/scenario.hpp"
#include "aerotwin/rtd/rtd.hpp"

namespace aerotwin {

/// Pearson correlation; nullopt when either series is constant.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// MAE and MSE over cells x samples, Pearson rho on the flattened series,
/// MRTE as the mean over cells of |MRT_pred - MRT_obs| with per-cell
/// baseline-return MRTs (censored values enter as clipped).
MetricsRecord compute_metrics(const Trajectory& predicted, const Trajectory& observed, double cough_time,
                              const BaselineReturnOptions& opts = {});
/// Uses mrt_reference(s) for the cough time and search start.
MetricsRecord compute_metrics(const Trajectory& predicted, const Trajectory& observed, const ScenarioConfig& s);

}  // namespace aerotwin

#endif
