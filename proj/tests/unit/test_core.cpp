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

#include <sstream>

#include "aerotwin/core/grid.hpp"
#include "aerotwin/core/scenario.hpp"
#include "aerotwin/core/scenario_io.hpp"
#include "aerotwin/core/text.hpp"
#include "test_support.hpp"

using namespace aerotwin;

namespace {

ScenarioConfig well_formed() {
    ScenarioConfig s;
    s.params = testing::uniform_params(s.grid, 0.02, 0.08, 2);
    s.params.filter_efficiency = 0.95;
    s.params.filter_airflow = 0.05;
    s.coughs.push_back({60.0, 4, Direction::north, 400.0, 1.0});
    s.purifier_schedule.push_back({0.0, 0, FanLevel::high});
    s.ac = {2, true, FanLevel::high};
    return s;
}

}  // namespace

TEST_SUITE("core_domain") {

TEST_CASE("default grid is the 3x3 four-connected testbed") {
    const GridLayout g = default_grid();
    CHECK(g.num_cells() == 9);
    CHECK(g.pairs().size() == 12);
    CHECK(g.cell_volume() > 0.0);
    CHECK(g.accessible_cells().size() == 9);

    const CellIndex corner = g.index({0, 0});
    const auto nb = g.neighbors(corner);
    REQUIRE(nb.size() == 2);
    CHECK(nb[0] == g.index({0, 1}));
    CHECK(nb[1] == g.index({1, 0}));
    CHECK(g.neighbors(g.index({1, 1})).size() == 4);
    CHECK_FALSE(g.adjacent(0, 4));  // no diagonals
}

TEST_CASE("row-major indexing and facing neighbours") {
    const GridLayout g = default_grid();
    CHECK(g.index({1, 2}) == 5);
    CHECK(g.cell(7) == Cell{2, 1});
    CHECK(g.facing(4, Direction::north) == 1u);
    CHECK(g.facing(4, Direction::south) == 7u);
    CHECK(g.facing(4, Direction::east) == 5u);
    CHECK(g.facing(4, Direction::west) == 3u);
    CHECK_FALSE(g.facing(0, Direction::north).has_value());
    CHECK(g.manhattan(0, 8) == 4);
}

TEST_CASE("diagonal adjacency is rejected") {
    CHECK_THROWS_AS(GridLayout(3, 3, 1.0, {}, {{0, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(GridLayout(3, 3, 0.0), std::invalid_argument);
}

TEST_CASE("adjacency is an involution on generated layouts") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const ScenarioConfig s = testing::random_scenario(rng);
        const GridLayout& g = s.grid;
        for (CellIndex i = 0; i < g.num_cells(); ++i)
            for (CellIndex j = 0; j < g.num_cells(); ++j) {
                REQUIRE(g.adjacent(i, j) == g.adjacent(j, i));
                if (g.adjacent(i, j)) REQUIRE(g.manhattan(i, j) == 1);
            }
    }
}

TEST_CASE("exchange rates exist exactly on adjacent ordered pairs") {
    const GridLayout g = default_grid();
    CompartmentParams p = CompartmentParams::zeros(g);
    CHECK(p.exchange_rates.size() == 24);
    p.set_exchange(0, 1, 0.3);
    CHECK(p.exchange(0, 1) == 0.3);
    CHECK(p.exchange(1, 0) == 0.0);
    CHECK_THROWS_AS(p.exchange(0, 4), std::out_of_range);
    CHECK_THROWS_AS(p.set_exchange(0, 8, 1.0), std::out_of_range);
}

TEST_CASE("validate_scenario reports the violated invariant") {
    SUBCASE("identity on a well-formed scenario") {
        const ScenarioConfig s = well_formed();
        CHECK(validate_scenario(s) == s);
    }
    SUBCASE("cough at a blocked cell") {
        ScenarioConfig s = well_formed();
        const CellIndex blocked[] = {4};
        s.grid = s.grid.with_blocked(blocked);
        CHECK_THROWS_WITH_AS(validate_scenario(s), doctest::Contains("inaccessible cell"), ScenarioError);
    }
    SUBCASE("filter efficiency above one") {
        ScenarioConfig s = well_formed();
        s.params.filter_efficiency = 1.2;
        CHECK_THROWS_WITH_AS(validate_scenario(s), doctest::Contains("filter_efficiency out of range"),
                             ScenarioError);
    }
    SUBCASE("negative rate") {
        ScenarioConfig s = well_formed();
        s.params.set_exchange(0, 1, -0.1);
        CHECK_THROWS_WITH_AS(validate_scenario(s), doctest::Contains("negative rate"), ScenarioError);
    }
    SUBCASE("cough after the horizon") {
        ScenarioConfig s = well_formed();
        s.coughs[0].time = 1000.0;
        CHECK_THROWS_WITH_AS(validate_scenario(s), doctest::Contains("cough after horizon"), ScenarioError);
    }
    SUBCASE("purifier parked on furniture") {
        ScenarioConfig s = well_formed();
        const CellIndex blocked[] = {0};
        s.grid = s.grid.with_blocked(blocked);
        CHECK_THROWS_WITH_AS(validate_scenario(s), doctest::Contains("inaccessible cell"), ScenarioError);
    }
}

TEST_CASE("scenario JSON round-trip preserves every field") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const ScenarioConfig s = validate_scenario(testing::random_scenario(rng));
        const std::string text = scenario_to_json(s).dump();
        const ScenarioConfig back = scenario_from_json(nlohmann::json::parse(text));
        REQUIRE(back == s);
    }
}

TEST_CASE("scenario skeleton without params parses to zero rates") {
    const auto j = nlohmann::json::parse(R"({
        "grid": {"rows": 3, "cols": 3, "cell_volume_m3": 2.0},
        "coughs": [{"time_s": 60, "cell": [1, 1], "direction": "E", "emitted_mass_ug": 400}],
        "ac": {"cell": [0, 2], "on": true, "fan": "high"},
        "horizon_s": 900, "noise_seed": 3})");
    const ScenarioConfig s = scenario_from_json(j);
    CHECK(s.params == CompartmentParams::zeros(s.grid));
    CHECK(s.coughs.at(0).cell == 4);
    CHECK(s.coughs.at(0).direction == Direction::east);
    CHECK(s.coughs.at(0).duration == 1.0);
    CHECK(s.ac.cell == 2);
}

TEST_CASE("trajectory CSV round-trip and header") {
    Trajectory t(0.0, 0.5, 2, {0.0, 1.0, 0.1, 2.5, 1e-17, 3.0 / 7.0}, Provenance::simulated);
    std::stringstream ss;
    write_trajectory_csv(ss, t);
    const std::string text = ss.str();
    CHECK(text.rfind("t_s,c_0,c_1\n", 0) == 0);
    const Trajectory back = read_trajectory_csv(ss, Provenance::simulated);
    CHECK(back == t);
}

TEST_CASE("trajectory invariants") {
    CHECK_THROWS(Trajectory(0.0, 1.0, 2, {}, Provenance::sensed));
    CHECK_THROWS(Trajectory(0.0, 1.0, 2, {1.0, -1.0}, Provenance::sensed));
    CHECK_THROWS(Trajectory(0.0, 0.0, 1, {1.0}, Provenance::sensed));
}

TEST_CASE("format_double round-trips") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-20, 20));
        REQUIRE(parse_double(format_double(v)) == v);
    }
}

}
