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

#include "aerotwin/twin/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace aerotwin {

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson needs equal, non-empty series");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

MetricsRecord compute_metrics(const Trajectory& predicted, const Trajectory& observed, double cough_time,
                              const BaselineReturnOptions& opts) {
    if (!predicted.aligned_with(observed)) throw std::invalid_argument("predicted and observed are misaligned");
    MetricsRecord m;
    const auto& p = predicted.data();
    const auto& o = observed.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - o[i];
        m.mae += std::abs(d);
        m.mse += d * d;
    }
    m.mae /= static_cast<double>(p.size());
    m.mse /= static_cast<double>(p.size());
    const auto rho = pearson(p, o);
    m.rho_defined = rho.has_value();
    m.pearson_rho = rho.value_or(0.0);

    double total = 0.0;
    for (std::size_t c = 0; c < observed.num_cells(); ++c) {
        BaselineReturnOptions cell_opts = opts;
        cell_opts.cell = c;
        const auto rp = mrt_baseline_return(predicted, cough_time, cell_opts);
        const auto ro = mrt_baseline_return(observed, cough_time, cell_opts);
        m.censored += (rp.censored ? 1 : 0) + (ro.censored ? 1 : 0);
        total += std::abs(rp.mrt - ro.mrt);
    }
    m.mrte = total / static_cast<double>(observed.num_cells());
    return m;
}

MetricsRecord compute_metrics(const Trajectory& predicted, const Trajectory& observed, const ScenarioConfig& s) {
    const MrtReference ref = mrt_reference(s);
    return compute_metrics(predicted, observed, ref.cough_time, ref.opts);
}

}  // namespace aerotwin
