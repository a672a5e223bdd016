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

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "aerotwin/harness/benchmark.hpp"
#include "aerotwin/harness/dataset_io.hpp"
#include "cli_config.hpp"

using namespace aerotwin;
using nlohmann::json;

namespace {

BenchmarkReport toy_report() {
    BenchmarkReport r;
    r.suite = "toy";
    r.seeds = {1, 2};
    r.columns = {"a", "b"};
    r.rows.push_back({"g", "x", {1.0, 2.5}, {1.0, 1.0}});
    r.rows.push_back({"g", "y", {3.0, 0.0}, {2.0, 4.0}});
    r.checks.push_back({"x below y", true, "1 < 3"});
    return r;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() / ("aerotwin_ut_" + std::to_string(::getpid()))) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_SUITE("harness_cli") {

TEST_CASE("summary statistics") {
    CHECK(mean_of({}) == 0.0);
    CHECK(mean_of({1.0, 2.0, 6.0}) == doctest::Approx(3.0));
    CHECK(stddev_of({5.0}) == 0.0);
    CHECK(stddev_of({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(1.2909944487));
}

TEST_CASE("report lookup, pass state and serialisation") {
    BenchmarkReport r = toy_report();
    CHECK(r.passed());
    CHECK(r.row("g", "y").values[0] == 3.0);
    CHECK_THROWS_AS(r.row("g", "z"), std::out_of_range);

    const json j = report_to_json(r);
    CHECK(j["suite"] == "toy");
    CHECK(j["rows"].size() == 2);
    CHECK(j["checks"][0]["passed"] == true);

    std::ostringstream csv;
    write_report_csv(csv, r);
    CHECK(csv.str().rfind("group,entity,a,b", 0) == 0);
    CHECK(csv.str().find("g,y,3") != std::string::npos);

    r.checks.push_back({"always wrong", false, ""});
    CHECK_FALSE(r.passed());
    const std::string table = format_report_table(r);
    CHECK(table.find("[PASS] x below y") != std::string::npos);
    CHECK(table.find("[FAIL] always wrong") != std::string::npos);
}

TEST_CASE("stale base keeps filter terms at zero unless told otherwise") {
    BenchmarkCommon c;
    c.sim = {2.0, 10.0};
    c.calibration_count = 2;
    c.de_population = 20;
    c.de_generations = 10;
    const ScenarioConfig room = make_room(c.room, 3);
    const CompartmentParams stale = fit_stale_params(room, c, 3);
    CHECK(stale.filter_efficiency == 0.0);
    CHECK(stale.filter_airflow == 0.0);

    c.base_knows_purifier = true;
    const CompartmentParams informed = fit_stale_params(room, c, 3);
    CHECK(informed.filter_efficiency == room.params.filter_efficiency);
    CHECK(informed.filter_airflow == room.params.filter_airflow);
    // the fit itself does not depend on the flag
    CHECK(informed.exchange_rates == stale.exchange_rates);
}

TEST_CASE("oracle placement suite is reproducible and complete") {
    PlacementSuiteConfig cfg;
    cfg.oracle_forecaster = true;
    cfg.scenarios = 2;
    cfg.common.room.horizon = 900.0;
    const BenchmarkReport a = run_placement_suite(cfg);
    const BenchmarkReport b = run_placement_suite(cfg);
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    CHECK(a.rows.size() == 8);
    CHECK(a.checks.size() == 2);
    for (const auto& row : a.rows) {
        REQUIRE(row.values.size() == a.columns.size());
        CHECK(row.values[0] > 0.0);
        CHECK(row.per_seed.size() == 1);
    }
    // start cell (0,0) to centre (1,1)
    CHECK(a.row("single_cough", "static_center").values[3] == 2.0);
    CHECK(a.settings["forecaster"] == "simulator");
    CHECK(a.settings["common"]["base_knows_purifier"] == true);

    cfg.seeds.clear();
    CHECK_THROWS_AS(run_placement_suite(cfg), std::invalid_argument);
}

TEST_CASE("dataset directories round-trip exactly") {
    TempDir tmp;
    const ScenarioConfig room = make_room({}, 4);
    DatasetOptions o;
    o.family = ScenarioFamily::multi_cough;
    o.count = 3;
    o.noise_sigma = 0.1;
    o.seed = 5;
    o.sim = {1.0, 5.0};
    const auto data = generate_dataset(room, o);
    save_dataset(tmp.path.string(), data);
    CHECK(std::filesystem::exists(tmp.path / "scenarios" / "0002.json"));
    const auto back = load_dataset(tmp.path.string());
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(back[i].scenario == data[i].scenario);
        CHECK(back[i].trajectory == data[i].trajectory);
    }
    CHECK_THROWS(load_dataset((tmp.path / "missing").string()));
}

TEST_CASE("config files: defaults, overrides and unknown keys") {
    using cli::parse_config;
    const cli::CliConfig d = parse_config(json::object());
    CHECK(d.sim.dt == 1.0);
    CHECK(d.de_generations == 300);

    const cli::CliConfig c = parse_config(json::parse(R"({
        "room": {"rows": 4, "exchange_mean": 0.2, "ac_cell": [1, 1]},
        "sim": {"dt": 0.5, "sample_interval": 2},
        "policy": {"tolerance": 12, "run_fan": "med"},
        "de": {"population": 30},
        "benchmark": {"placement": {"scenarios": 4, "base_knows_purifier": false,
                                    "room": {"horizon": 600}}}
    })"));
    CHECK(c.room.rows == 4);
    CHECK(c.room.exchange_mean == 0.2);
    CHECK(c.sim.sample_interval == 2.0);
    CHECK(c.policy.tolerance == 12.0);
    CHECK(c.policy.run_fan == FanLevel::med);
    CHECK(c.de_population == 30);
    const PlacementSuiteConfig p = cli::placement_config(c.benchmark["placement"]);
    CHECK(p.scenarios == 4);
    CHECK_FALSE(p.common.base_knows_purifier);
    CHECK(p.common.room.horizon == 600.0);
    // untouched fields keep the suite defaults, not the plain room defaults
    CHECK(p.common.room.exchange_mean == placement_common().room.exchange_mean);

    CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"rooom": {}})")), "unknown key 'config.rooom'",
                         cli::ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"benchmark": {"few_shot": {"draws": 3}}})")),
                         "unknown key 'benchmark.few_shot.draws'", cli::ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"sim": {"dt": "fast"}})")), cli::ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"room": {"ac_cell": [1]}})")), cli::ConfigError);
}

}
