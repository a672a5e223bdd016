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

#include "aerotwin/rtd/rtd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aerotwin {

std::vector<RtdPoint> cumulative_rtd(std::span<const double> times, std::span<const double> conc) {
    if (times.size() != conc.size()) throw std::invalid_argument("times and concentrations differ in length");
    if (times.empty()) throw std::invalid_argument("empty outlet series");
    for (std::size_t k = 0; k < conc.size(); ++k) {
        if (!std::isfinite(conc[k]) || conc[k] < 0.0)
            throw std::invalid_argument("outlet series must be finite and non-negative");
        if (k > 0 && !(times[k] > times[k - 1])) throw std::invalid_argument("times must increase strictly");
    }
    std::vector<double> cum(conc.size(), 0.0);
    for (std::size_t k = 1; k < conc.size(); ++k)
        cum[k] = cum[k - 1] + 0.5 * (conc[k - 1] + conc[k]) * (times[k] - times[k - 1]);
    const double total = cum.back();
    if (!(total > 0.0)) throw std::invalid_argument("outlet series integrates to zero; RTD undefined");

    std::vector<RtdPoint> out(conc.size());
    for (std::size_t k = 0; k < conc.size(); ++k) out[k] = {times[k], cum[k] / total};
    out.back().f = 1.0;
    return out;
}

double mrt_moment(std::span<const RtdPoint> f) {
    if (f.empty()) throw std::invalid_argument("empty RTD curve");
    if (f.size() == 1) return f[0].t;
    double m = f[0].t * f[0].f;
    for (std::size_t k = 1; k < f.size(); ++k) m += 0.5 * (f[k - 1].t + f[k].t) * (f[k].f - f[k - 1].f);
    return m;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BaselineReturn mrt_baseline_return(const Trajectory& traj, double cough_time, const BaselineReturnOptions& opts) {
    const double eps = 1e-9 * std::max(1.0, traj.sample_interval());
    if (cough_time < traj.start_time() - eps || cough_time > traj.end_time() + eps)
        throw std::invalid_argument("cough_time outside trajectory");
    if (opts.cell && *opts.cell >= traj.num_cells()) throw std::invalid_argument("cell outside trajectory");

    const std::size_t n = traj.size();
    const std::vector<double> signal = opts.cell ? traj.series(*opts.cell) : traj.spatial_mean();

    // Baseline over [cough - window, cough).
    std::vector<std::size_t> window;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traj.time(k);
        if (t >= cough_time - opts.baseline_window - eps && t < cough_time - eps) window.push_back(k);
    }
    if (window.empty()) throw std::invalid_argument("empty pre-cough window");

    BaselineReturn r;
    if (opts.cell) {
        double s = 0.0;
        for (std::size_t k : window) s += signal[k];
        r.baseline = s / static_cast<double>(window.size());
    } else {
        std::vector<double> means(traj.num_cells(), 0.0);
        for (std::size_t k : window)
            for (std::size_t c = 0; c < traj.num_cells(); ++c) means[c] += traj.at(k, c);
        for (double& m : means) m /= static_cast<double>(window.size());
        r.baseline = median(std::move(means));
    }

    const double from = std::max(cough_time, opts.search_from.value_or(cough_time));
    std::size_t k0 = 0;
    while (k0 < n && traj.time(k0) < from - eps) ++k0;
    if (k0 >= n) throw std::invalid_argument("search start outside trajectory");

    std::size_t kpk = k0;
    for (std::size_t k = k0; k < n; ++k)
        if (signal[k] > signal[kpk]) kpk = k;
    r.peak = signal[kpk];
    const double excess = r.peak - r.baseline;
    if (!(excess > 0.0)) {
        r.mrt = 0.0;
        return r;
    }
    const double thr = opts.band * excess;
    auto inside = [&](std::size_t k) { return std::abs(signal[k] - r.baseline) <= thr; };

    // next_out[k]: first index >= k that is outside the band.
    std::vector<std::size_t> next_out(n + 1, n);
    for (std::size_t k = n; k-- > kpk;) next_out[k] = inside(k) ? next_out[k + 1] : k;

    const double t_end = traj.end_time();
    for (std::size_t k = kpk; k < n; ++k) {
        if (!inside(k)) continue;
        const double tk = traj.time(k);
        if (tk + opts.hold > t_end + eps) break;
        const std::size_t j = next_out[k];
        if (j < n && traj.time(j) <= tk + opts.hold + eps) continue;

        double t_enter = tk;
        if (k > kpk) {
            const double e1 = signal[k - 1] - r.baseline;
            const double e2 = signal[k] - r.baseline;
            const double target = e1 > 0.0 ? thr : -thr;
            const double frac = (e1 - target) / (e1 - e2);
            t_enter = traj.time(k - 1) + std::clamp(frac, 0.0, 1.0) * traj.sample_interval();
        }
        r.mrt = std::max(0.0, t_enter - cough_time);
        return r;
    }
    r.censored = true;
    r.mrt = t_end - cough_time;
    return r;
}

RtdResult analyze_rtd(const Trajectory& traj, double cough_time, std::optional<std::size_t> outlet,
                      const BaselineReturnOptions& opts) {
    BaselineReturnOptions o = opts;
    o.cell = outlet;
    RtdResult res;
    res.baseline_return = mrt_baseline_return(traj, cough_time, o);

    const std::vector<double> signal = outlet ? traj.series(*outlet) : traj.spatial_mean();
    std::vector<double> t;
    std::vector<double> c;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.time(k) < cough_time - 1e-9) continue;
        t.push_back(traj.time(k) - cough_time);
        c.push_back(std::max(0.0, signal[k] - res.baseline_return.baseline));
    }
    res.f_curve = cumulative_rtd(t, c);
    res.mrt_moment = mrt_moment(res.f_curve);
    return res;
}

nlohmann::json rtd_to_json(const RtdResult& r) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : r.f_curve) curve.push_back({p.t, p.f});
    return {{"mrt_moment_s", r.mrt_moment},
            {"mrt_baseline_return_s", r.baseline_return.mrt},
            {"censored", r.baseline_return.censored},
            {"baseline_ugm3", r.baseline_return.baseline},
            {"peak_ugm3", r.baseline_return.peak},
            {"f_curve", curve}};
}

MrtReference mrt_reference(const ScenarioConfig& s, BaselineReturnOptions opts) {
    if (s.coughs.empty()) throw std::invalid_argument("scenario has no cough");
    double first = s.coughs.front().time, last = first;
    for (const auto& c : s.coughs) {
        first = std::min(first, c.time);
        last = std::max(last, c.time);
    }
    if (!opts.search_from) opts.search_from = last;
    return {first, opts};
}

}  // namespace aerotwin
