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

#ifndef AEROTWIN_HARNESS_BENCHMARK_HPP
#define AEROTWIN_HARNESS_BENCHMARK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerotwin/estimation/fit.hpp"
#include "aerotwin/harness/synthetic.hpp"
#include "aerotwin/meta/maml.hpp"
#include "aerotwin/policy/placement.hpp"
#include "aerotwin/twin/twin.hpp"

namespace aerotwin {

struct BenchmarkRow {
    std::string group;   // e.g. shift or scenario family; may be empty
    std::string entity;  // model or policy
    std::vector<double> values;    // aligned with BenchmarkReport::columns
    std::vector<double> per_seed;  // primary metric per seed (or per draw)
};

struct OrderingCheck {
    std::string description;
    bool passed = false;
    std::string detail;
};

struct BenchmarkReport {
    std::string suite;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> columns;
    std::vector<BenchmarkRow> rows;
    std::vector<OrderingCheck> checks;
    nlohmann::json settings;

    bool passed() const;
    const BenchmarkRow& row(const std::string& group, const std::string& entity) const;
};

nlohmann::json report_to_json(const BenchmarkReport& r);
void write_report_csv(std::ostream& out, const BenchmarkReport& r);
std::string format_report_table(const BenchmarkReport& r);

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);

/// Shared room and stale-base settings.
struct BenchmarkCommon {
    RoomSpec room;
    SimOptions sim{2.0, 10.0};
    double noise_sigma = 0.05;
    std::size_t calibration_count = 4;  // purifier-free runs for the stale fit
    std::size_t de_population = 60;
    std::size_t de_generations = 200;
    double de_mutation = 0.5;
    /// Copy the purifier's rated efficiency and airflow into the fitted base.
    bool base_knows_purifier = false;
    TwinTrainConfig twin{16, 1, 4, 2, 200, 4, 1e-2, 5.0, 1, {2.0, 10.0}};
};
nlohmann::json common_to_json(const BenchmarkCommon& c);

/// Stale compartment params: DE fit to purifier-free runs of the room.
/// Filter terms stay zero unless `base_knows_purifier`.
CompartmentParams fit_stale_params(const ScenarioConfig& room, const BenchmarkCommon& c, std::uint64_t seed);

struct TwinAccuracyConfig {
    BenchmarkCommon common;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::size_t scenarios = 30;
    std::size_t folds = 5;
    double seed_win_fraction = 0.9;  // GC-LSTM-Res must beat stale in this share of seeds
    double best_ratio = 0.5;         // best hybrid MRTE / stale MRTE
};
BenchmarkReport run_twin_accuracy(const TwinAccuracyConfig& cfg);

struct FewShotConfig {
    BenchmarkCommon common;
    std::vector<std::uint64_t> seeds{1, 2};
    std::size_t draws_per_seed = 5;
    std::size_t meta_setups = 5;       // base room plus shifted copies used for meta-training
    std::size_t scenarios_per_setup = 6;
    std::size_t pretrain_epochs = 150;
    MamlConfig maml{0.3, 1e-3, 20, 3, 200, 1};
    std::size_t support_size = 2;
    std::size_t query_size = 6;
    double horizon = 1200.0;
};
BenchmarkReport run_few_shot(const FewShotConfig& cfg);

/// Weakly mixed room with a strong purifier, long enough for multi-cough runs to settle.
inline BenchmarkCommon placement_common() {
    BenchmarkCommon c;
    c.room.exchange_mean = 0.03;
    c.room.filter_airflow = 0.15;
    c.room.horizon = 1800.0;
    c.base_knows_purifier = true;
    return c;
}

struct PlacementSuiteConfig {
    BenchmarkCommon common = placement_common();
    std::vector<std::uint64_t> seeds{1};
    std::size_t scenarios = 20;        // per family
    std::size_t train_scenarios = 30;  // twin training set
    PolicyConfig policy;
    /// Forecast with the true simulator instead of the trained twin.
    bool oracle_forecaster = false;
    bool idle_management = true;
};
BenchmarkReport run_placement_suite(const PlacementSuiteConfig& cfg);

}  // namespace aerotwin

#endif
