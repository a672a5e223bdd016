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

#include <doctest.h>

#include <cmath>

#include "aerotwin/core/random.hpp"
#include "aerotwin/rtd/rtd.hpp"
#include "aerotwin/sim/compartment.hpp"

using namespace aerotwin;

namespace {

std::vector<double> grid_times(double dt, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = dt * static_cast<double>(k);
    return t;
}

double f_at(const std::vector<RtdPoint>& f, double t) {
    for (const auto& p : f)
        if (std::abs(p.t - t) < 1e-9) return p.f;
    FAIL("time not on the curve");
    return 0.0;
}

Trajectory single_cell(std::vector<double> values, double dt = 1.0) {
    return Trajectory(0.0, dt, 1, std::move(values), Provenance::sensed);
}

}  // namespace

TEST_SUITE("rtd_analysis") {

TEST_CASE("impulse: F steps at t0 and the moment MRT is t0") {
    const auto t = grid_times(1.0, 201);
    std::vector<double> c(201, 0.0);
    c[100] = 1.0;
    const auto f = cumulative_rtd(t, c);
    CHECK(f.front().f == 0.0);
    CHECK(f_at(f, 99.0) == 0.0);
    CHECK(f_at(f, 100.0) == doctest::Approx(0.5));
    CHECK(f_at(f, 101.0) == doctest::Approx(1.0));
    CHECK(f.back().f == 1.0);
    CHECK(mrt_moment(f) == doctest::Approx(100.0).epsilon(1e-2));
}

TEST_CASE("exponential washout: F(tau) ~ 1 - 1/e, MRT ~ tau") {
    const double tau = 60.0;
    const auto t = grid_times(0.5, 2001);  // 1000 s
    std::vector<double> c(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) c[k] = std::exp(-t[k] / tau);
    const auto f = cumulative_rtd(t, c);
    CHECK(f_at(f, 60.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-3));
    CHECK(mrt_moment(f) == doctest::Approx(tau).epsilon(0.02));
}

TEST_CASE("constant series gives a linear F") {
    const auto t = grid_times(1.0, 101);
    const std::vector<double> c(101, 3.0);
    const auto f = cumulative_rtd(t, c);
    for (const auto& p : f) REQUIRE(p.f == doctest::Approx(p.t / 100.0).epsilon(1e-12));
}

TEST_CASE("rejects degenerate input") {
    const auto t = grid_times(1.0, 5);
    CHECK_THROWS(cumulative_rtd(t, std::vector<double>(5, 0.0)));
    CHECK_THROWS(cumulative_rtd(t, std::vector<double>{0, 1, -1, 0, 0}));
    CHECK_THROWS(cumulative_rtd(std::vector<double>{0, 1, 1, 2, 3}, std::vector<double>(5, 1.0)));
}

TEST_CASE("simulated CSTR: MRT matches V / Q") {
    ScenarioConfig s;
    s.grid = GridLayout(1, 1, 10.0);
    s.params = CompartmentParams::zeros(s.grid);
    s.params.exhaust_rate[0] = 0.05;  // V/Q = 200 s
    s.ac = {0, true, FanLevel::high};
    s.initial = {100.0};
    s.horizon = 3000.0;
    const Trajectory tr = simulate(s, {0.5, 1.0});
    const auto f = cumulative_rtd(tr.times(), tr.series(0));
    CHECK(mrt_moment(f) == doctest::Approx(200.0).epsilon(0.05));
}

TEST_CASE("baseline return: flat signal settles immediately") {
    const Trajectory tr = single_cell(std::vector<double>(300, 7.0));
    const auto r = mrt_baseline_return(tr, 100.0);
    CHECK(r.mrt == 0.0);
    CHECK_FALSE(r.censored);
    CHECK(r.baseline == doctest::Approx(7.0));
}

TEST_CASE("baseline return: exponential decay settles at ln(20) / k") {
    const double k = 0.005;
    std::vector<double> c(3001);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double t = static_cast<double>(i);
        c[i] = t < 100.0 ? 10.0 : 10.0 + 100.0 * std::exp(-k * (t - 100.0));
    }
    const auto r = mrt_baseline_return(single_cell(c), 100.0);
    CHECK_FALSE(r.censored);
    CHECK(r.mrt == doctest::Approx(std::log(20.0) / k).epsilon(1e-3));
    CHECK(r.mrt == doctest::Approx(599.15).epsilon(1e-3));
}

TEST_CASE("baseline return: censored when the signal never settles") {
    std::vector<double> c(400);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = i < 100 ? 5.0 : 5.0 + 100.0 - 0.1 * (i - 100.0);
    const auto r = mrt_baseline_return(single_cell(c), 100.0);
    CHECK(r.censored);
    CHECK(r.mrt == doctest::Approx(299.0));
}

TEST_CASE("baseline return: spatial mean with the median baseline") {
    std::vector<double> data;
    for (int k = 0; k < 600; ++k) {
        const double bump = k >= 100 ? 90.0 * std::exp(-0.02 * (k - 100)) : 0.0;
        data.insert(data.end(), {1.0 + bump, 2.0 + bump, 30.0 + bump});
    }
    const Trajectory tr(0.0, 1.0, 3, data, Provenance::sensed);
    const auto r = mrt_baseline_return(tr, 100.0);
    // median baseline 2, spatial mean baseline 11: the mean never returns to 2.
    CHECK(r.baseline == doctest::Approx(2.0));
    CHECK(r.censored);
    BaselineReturnOptions one;
    one.cell = 0;
    const auto r0 = mrt_baseline_return(tr, 100.0, one);
    CHECK_FALSE(r0.censored);
    CHECK(r0.mrt == doctest::Approx(std::log(20.0) / 0.02).epsilon(5e-3));
}

TEST_CASE("property: scaling time scales the MRT; scaling amplitude leaves it") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 50 + rng.index(100);
        std::vector<double> c(n);
        for (auto& v : c) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 10.0);
        c[rng.index(n)] = 1.0;
        const double dt = rng.uniform(0.1, 5.0);
        const double s = rng.uniform(0.1, 10.0);
        const double a = rng.uniform(0.01, 100.0);
        const double m = mrt_moment(cumulative_rtd(grid_times(dt, n), c));
        const double ms = mrt_moment(cumulative_rtd(grid_times(dt * s, n), c));
        std::vector<double> ca = c;
        for (auto& v : ca) v *= a;
        const double ma = mrt_moment(cumulative_rtd(grid_times(dt, n), ca));
        REQUIRE(ms == doctest::Approx(s * m).epsilon(1e-9));
        REQUIRE(ma == doctest::Approx(m).epsilon(1e-9));
        std::size_t first = n, last = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (c[k] > 0.0) {
                first = std::min(first, k);
                last = k;
            }
        REQUIRE(m >= dt * static_cast<double>(first) - dt);
        REQUIRE(m <= dt * static_cast<double>(last) + dt);
    }
}

TEST_CASE("analyze_rtd reports relative times and JSON") {
    std::vector<double> c(600);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = i < 100 ? 2.0 : 2.0 + 50.0 * std::exp(-0.01 * (i - 100.0));
    const auto r = analyze_rtd(single_cell(c), 100.0, 0);
    CHECK(r.f_curve.front().t == doctest::Approx(0.0));
    CHECK(r.mrt_moment == doctest::Approx(100.0).epsilon(0.05));
    const auto j = rtd_to_json(r);
    CHECK(j.contains("mrt_moment_s"));
    CHECK(j.contains("mrt_baseline_return_s"));
}

}
