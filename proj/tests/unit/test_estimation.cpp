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
#include <numbers>

#include "aerotwin/core/random.hpp"
#include "aerotwin/estimation/fit.hpp"
#include "test_support.hpp"

using namespace aerotwin;

namespace {

DeConfig box(std::size_t dim, double lo, double hi, std::uint64_t seed) {
    DeConfig c;
    c.bounds.assign(dim, Bounds{lo, hi});
    c.seed = seed;
    return c;
}

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

ScenarioConfig calibration_room(double cough_time, CellIndex cough_cell, Direction d) {
    ScenarioConfig s;
    Rng rng(99);
    s.params = CompartmentParams::zeros(s.grid);
    for (const auto& [a, b] : s.grid.pairs()) s.params.set_symmetric_exchange(a, b, rng.uniform(0.01, 0.04));
    s.params.exhaust_rate[2] = 0.08;
    s.ac = {2, true, FanLevel::high};
    s.coughs.push_back({cough_time, cough_cell, d, 400.0, 1.0});
    s.horizon = 400.0;
    return s;
}

}  // namespace

TEST_SUITE("param_estimation") {

TEST_CASE("DE: sphere in 5D converges") {
    DeConfig c = box(5, -5.0, 5.0, 3);
    c.population_size = 40;
    c.max_generations = 200;
    c.tolerance = 0.0;
    const DeResult r = de_minimize(sphere, c);
    CHECK(r.best_fitness < 1e-6);
    CHECK(r.history.size() == r.generations_run + 1);
    for (std::size_t g = 1; g < r.history.size(); ++g) REQUIRE(r.history[g] <= r.history[g - 1]);
}

TEST_CASE("DE: Rastrigin 2D reaches the global basin for nearly every seed") {
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        DeConfig c = box(2, -5.12, 5.12, seed);
        c.population_size = 60;
        c.max_generations = 500;
        c.mutation_factor = 0.5;
        c.crossover_rate = 0.9;
        if (de_minimize(rastrigin, c).best_fitness < 1e-3) ++hits;
    }
    CHECK(hits >= 19);
}

TEST_CASE("DE: constant objective stops on stagnation") {
    DeConfig c = box(3, 0.0, 1.0, 1);
    const DeResult r = de_minimize([](std::span<const double>) { return 4.0; }, c);
    CHECK(r.best_fitness == 4.0);
    CHECK(r.generations_run == c.stagnation_generations);
}

TEST_CASE("DE: reflection keeps every evaluated point inside the box") {
    CHECK(reflect_into(1.5, {0.0, 1.0}) == doctest::Approx(0.5));
    CHECK(reflect_into(-0.25, {0.0, 1.0}) == doctest::Approx(0.25));
    CHECK(reflect_into(3.2, {0.0, 1.0}) == doctest::Approx(0.8));
    CHECK(reflect_into(0.7, {0.7, 0.7}) == 0.7);
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const Bounds b{rng.uniform(-3, 0), rng.uniform(0, 3)};
        const double v = reflect_into(rng.uniform(-50, 50), b);
        REQUIRE(v >= b.lo);
        REQUIRE(v <= b.hi);
    }
    DeConfig c = box(4, -1.0, 2.0, 8);
    c.mutation_factor = 1.8;
    bool inside = true;
    de_minimize(
        [&](std::span<const double> x) {
            for (double v : x) inside = inside && v >= -1.0 && v <= 2.0;
            return sphere(x);
        },
        c);
    CHECK(inside);
}

TEST_CASE("DE: deterministic for a seed and independent of thread count") {
    DeConfig c = box(3, -2.0, 2.0, 21);
    c.max_generations = 50;
    const DeResult a = de_minimize(rastrigin, c);
    const DeResult b = de_minimize(rastrigin, c);
    c.threads = 3;
    const DeResult t = de_minimize(rastrigin, c);
    CHECK(a.best == b.best);
    CHECK(a.history == b.history);
    CHECK(a.best == t.best);
    CHECK(a.history == t.history);
    c.seed = 22;
    c.threads = 1;
    CHECK(de_minimize(rastrigin, c).history != a.history);
}

TEST_CASE("DE: non-finite objective and bad config are errors") {
    DeConfig c = box(2, 0.0, 1.0, 1);
    CHECK_THROWS_AS(de_minimize([](std::span<const double>) { return std::nan(""); }, c), ObjectiveError);
    c.population_size = 3;
    CHECK_THROWS_AS(de_minimize(sphere, c), std::invalid_argument);
    c = box(2, 1.0, 0.0, 1);
    CHECK_THROWS_AS(de_minimize(sphere, c), std::invalid_argument);
}

TEST_CASE("ParamVector maps decision vectors both ways") {
    const ScenarioConfig s = calibration_room(30.0, 4, Direction::north);
    const FitSpec spec = resolve_fit_spec({}, s);
    const ParamVector sym(s.grid, spec);
    CHECK(sym.dimension() == 12 + 1 + 1);
    FitSpec dir = spec;
    dir.tying = ExchangeTying::directed;
    CHECK(ParamVector(s.grid, dir).dimension() == 24 + 1 + 1);
    CompartmentParams p = s.params;
    p.source_scale = 1.3;
    const auto x = sym.from_params(p);
    CHECK(sym.to_params(x) == p);
}

TEST_CASE("fit self-consistency: noiseless data recovers the generating trajectory") {
    std::vector<Observation> data;
    for (auto [cell, dir] : {std::pair{CellIndex{4}, Direction::north}, std::pair{CellIndex{6}, Direction::east}}) {
        ScenarioConfig s = calibration_room(30.0, cell, dir);
        s.params.source_scale = 1.0;
        data.push_back({s, simulate(s, {1.0, 1.0})});
    }
    FitSpec spec;
    spec.fit_source_scale = false;
    DeConfig de = default_fit_de_config(data.front().scenario, spec, 5);
    de.population_size = 60;
    de.max_generations = 400;
    de.mutation_factor = 0.5;
    const FitResult r = fit_params(data, spec, de);
    double peak = 0.0;
    for (const auto& o : data)
        for (double v : o.trajectory.data()) peak = std::max(peak, v);
    CHECK(std::sqrt(r.best_fitness) < 0.01 * peak);
    CHECK(r.best_params.exhaust_rate[2] == doctest::Approx(0.08).epsilon(0.05));
}

TEST_CASE("fit with noise lands near the noise floor") {
    ScenarioConfig s = calibration_room(30.0, 4, Direction::west);
    const Trajectory clean = simulate(s, {1.0, 1.0});
    Rng rng(17);
    std::vector<double> noisy = clean.data();
    const double sigma = 0.5;
    for (auto& v : noisy) v = std::max(0.0, v + sigma * rng.normal());
    double floor_mse = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) floor_mse += (noisy[i] - clean.data()[i]) * (noisy[i] - clean.data()[i]);
    floor_mse /= static_cast<double>(noisy.size());
    const Trajectory obs(0.0, 1.0, 9, noisy, Provenance::sensed);
    DeConfig de = default_fit_de_config(s, {}, 9);
    de.population_size = 60;
    de.max_generations = 300;
    de.mutation_factor = 0.5;
    const FitResult r = fit_params(obs, s, {}, de);
    CHECK(r.best_fitness <= 2.0 * floor_mse);
}

TEST_CASE("fit on an all-zero trajectory is exact") {
    ScenarioConfig s = calibration_room(30.0, 4, Direction::north);
    s.coughs.clear();
    const Trajectory zero(0.0, 1.0, 9, std::vector<double>(9 * 401, 0.0), Provenance::sensed);
    DeConfig de = default_fit_de_config(s, {}, 1);
    de.max_generations = 5;
    const FitResult r = fit_params(zero, s, {}, de);
    CHECK(r.best_fitness == 0.0);
}

TEST_CASE("fit rejects purifier data and misaligned series") {
    ScenarioConfig s = calibration_room(30.0, 4, Direction::north);
    const Trajectory t = simulate(s, {1.0, 1.0});
    ScenarioConfig p = s;
    p.purifier_schedule.push_back({0.0, 0, FanLevel::high});
    CHECK_THROWS_AS(fit_params(t, p, {}, {}), std::invalid_argument);
    const Trajectory coarse = simulate(s, {1.0, 5.0});
    CHECK_THROWS_AS(fit_params(coarse, s, {}, {}), std::invalid_argument);
}

}
