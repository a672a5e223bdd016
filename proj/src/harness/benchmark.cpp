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

#include "aerotwin/harness/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aerotwin/core/text.hpp"
#include "aerotwin/meta/episodes.hpp"
#include "aerotwin/twin/metrics.hpp"

namespace aerotwin {

bool BenchmarkReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const OrderingCheck& c) { return c.passed; });
}

const BenchmarkRow& BenchmarkReport::row(const std::string& group, const std::string& entity) const {
    for (const auto& r : rows)
        if (r.group == group && r.entity == entity) return r;
    throw std::out_of_range("no benchmark row " + group + "/" + entity);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

nlohmann::json report_to_json(const BenchmarkReport& r) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["seeds"] = r.seeds;
    j["columns"] = r.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json x;
        x["group"] = row.group;
        x["entity"] = row.entity;
        for (std::size_t k = 0; k < r.columns.size(); ++k) x[r.columns[k]] = row.values.at(k);
        x["per_seed"] = row.per_seed;
        j["rows"].push_back(std::move(x));
    }
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"description", c.description}, {"passed", c.passed}, {"detail", c.detail}});
    j["passed"] = r.passed();
    j["settings"] = r.settings;
    return j;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& r) {
    out << "group,entity";
    for (const auto& c : r.columns) out << ',' << c;
    out << ",per_seed\n";
    for (const auto& row : r.rows) {
        out << row.group << ',' << row.entity;
        for (double v : row.values) out << ',' << format_double(v);
        out << ',';
        for (std::size_t k = 0; k < row.per_seed.size(); ++k) out << (k ? ";" : "") << format_double(row.per_seed[k]);
        out << '\n';
    }
}

std::string format_report_table(const BenchmarkReport& r) {
    std::ostringstream os;
    char buf[64];
    os << "== " << r.suite << " ==\n";
    std::snprintf(buf, sizeof buf, "%-14s%-20s", "group", "entity");
    os << buf;
    for (const auto& c : r.columns) {
        std::snprintf(buf, sizeof buf, "%14s", c.c_str());
        os << buf;
    }
    os << '\n';
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%-14s%-20s", row.group.c_str(), row.entity.c_str());
        os << buf;
        for (double v : row.values) {
            std::snprintf(buf, sizeof buf, "%14.3f", v);
            os << buf;
        }
        os << '\n';
    }
    for (const auto& c : r.checks)
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.description << "  (" << c.detail << ")\n";
    return os.str();
}

nlohmann::json common_to_json(const BenchmarkCommon& c) {
    return {{"exchange_mean", c.room.exchange_mean},
            {"exhaust", c.room.exhaust},
            {"filter_airflow", c.room.filter_airflow},
            {"horizon_s", c.room.horizon},
            {"dt_s", c.sim.dt},
            {"sample_interval_s", c.sim.sample_interval},
            {"noise_sigma", c.noise_sigma},
            {"calibration_count", c.calibration_count},
            {"de_population", c.de_population},
            {"de_generations", c.de_generations},
            {"de_mutation", c.de_mutation},
            {"base_knows_purifier", c.base_knows_purifier},
            {"hidden_size", c.twin.hidden_size},
            {"gcn_hidden", c.twin.gcn_hidden},
            {"epochs", c.twin.epochs},
            {"batch_size", c.twin.batch_size},
            {"learning_rate", c.twin.learning_rate}};
}

namespace {

DatasetOptions dataset_options(ScenarioFamily f, std::size_t n, double sigma, std::uint64_t seed, SimOptions sim) {
    DatasetOptions o;
    o.family = f;
    o.count = n;
    o.noise_sigma = sigma;
    o.seed = seed;
    o.sim = sim;
    return o;
}

}  // namespace

CompartmentParams fit_stale_params(const ScenarioConfig& room, const BenchmarkCommon& c, std::uint64_t seed) {
    const auto calib = generate_dataset(room, dataset_options(ScenarioFamily::purifier_free, c.calibration_count, c.noise_sigma, seed * 7 + 1, c.sim));
    FitSpec spec;
    spec.sim = c.sim;
    DeConfig de = default_fit_de_config(room, spec, seed);
    de.population_size = c.de_population;
    de.max_generations = c.de_generations;
    de.mutation_factor = c.de_mutation;
    CompartmentParams p = fit_params(calib, spec, de).best_params;
    if (c.base_knows_purifier) {
        p.filter_efficiency = room.params.filter_efficiency;
        p.filter_airflow = room.params.filter_airflow;
    }
    return p;
}

namespace {

const std::vector<std::string> kMetricColumns = {"mae", "mse", "pearson_rho", "mrte_s", "mrte_sd_s"};

// Collects per-seed metric records for one row.
struct MetricAccumulator {
    std::vector<MetricsRecord> records;
    BenchmarkRow finish(std::string group, std::string entity) const {
        BenchmarkRow row{std::move(group), std::move(entity), {}, {}};
        for (const auto& m : records) row.per_seed.push_back(m.mrte);
        const MetricsRecord mean = mean_metrics(records);
        row.values = {mean.mae, mean.mse, mean.pearson_rho, mean.mrte, stddev_of(row.per_seed)};
        return row;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

BenchmarkReport run_twin_accuracy(const TwinAccuracyConfig& cfg) {
    if (cfg.seeds.empty()) throw std::invalid_argument("twin_accuracy needs at least one seed");
    BenchmarkReport rep;
    rep.suite = "twin_accuracy";
    rep.seeds = cfg.seeds;
    rep.columns = kMetricColumns;

    const auto variants = all_twin_variants();
    std::map<std::string, MetricAccumulator> acc;
    std::vector<std::string> order = {"Compartment (stale)"};
    for (const auto& v : variants) order.push_back(v.name());

    for (std::uint64_t seed : cfg.seeds) {
        const ScenarioConfig room = make_room(cfg.common.room, seed);
        const CompartmentParams stale = fit_stale_params(room, cfg.common, seed);
        const auto data = generate_dataset(room, dataset_options(ScenarioFamily::single_cough, cfg.scenarios, cfg.common.noise_sigma, seed * 7 + 2, cfg.common.sim));
        const SimOptions sim = cfg.common.sim;
        const CvResult base = cross_validate(data, cfg.folds, seed, [&](std::span<const Observation>, std::size_t) {
            return Predictor([&stale, sim](const ScenarioConfig& s) { return simulate(s, stale, sim); });
        });
        acc[order[0]].records.push_back(base.mean);
        TwinTrainConfig tc = cfg.common.twin;
        tc.seed = seed;
        tc.sim = sim;
        for (const auto& v : variants) acc[v.name()].records.push_back(cross_validate_twin(v, data, stale, tc, cfg.folds).mean);
    }
    for (const auto& name : order) rep.rows.push_back(acc[name].finish("", name));

    const auto& stale_row = rep.row("", order[0]);
    const auto& best_row = rep.row("", TwinVariant{MlModule::gc_lstm, true}.name());
    std::size_t wins = 0;
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) wins += best_row.per_seed[k] < stale_row.per_seed[k];
    const std::size_t need = static_cast<std::size_t>(std::ceil(cfg.seed_win_fraction * cfg.seeds.size() - 1e-9));
    rep.checks.push_back({"MRTE(Comp-GC-LSTM-Res) < MRTE(stale) per seed", wins >= need,
                          std::to_string(wins) + "/" + std::to_string(cfg.seeds.size()) + " seeds, need " +
                              std::to_string(need)});

    double best = INFINITY;
    std::string best_name;
    bool all_dominate = true;
    for (std::size_t k = 1; k < order.size(); ++k) {
        const double m = rep.row("", order[k]).values[3];
        if (m < best) {
            best = m;
            best_name = order[k];
        }
        all_dominate = all_dominate && m < stale_row.values[3];
    }
    rep.checks.push_back({"best hybrid MRTE < " + fmt(cfg.best_ratio) + " x stale MRTE",
                          best < cfg.best_ratio * stale_row.values[3],
                          best_name + " " + fmt(best) + " s vs stale " + fmt(stale_row.values[3]) + " s"});
    rep.checks.push_back({"every hybrid MRTE < stale MRTE", all_dominate, "mean over seeds"});

    rep.settings = {{"common", common_to_json(cfg.common)},
                    {"scenarios", cfg.scenarios},
                    {"folds", cfg.folds},
                    {"seed_win_fraction", cfg.seed_win_fraction},
                    {"best_ratio", cfg.best_ratio}};
    return rep;
}

namespace {

PartitionRule rule_for(SetupShift s) {
    switch (s) {
        case SetupShift::furniture: return PartitionRule::furniture;
        case SetupShift::ac_location: return PartitionRule::ac_location;
        case SetupShift::ac_speed: return PartitionRule::ac_fan_speed;
    }
    return PartitionRule::purifier_row;
}

}  // namespace

BenchmarkReport run_few_shot(const FewShotConfig& cfg) {
    if (cfg.seeds.empty() || cfg.draws_per_seed == 0) throw std::invalid_argument("few_shot needs seeds and draws");
    if (cfg.meta_setups < 2) throw std::invalid_argument("few_shot needs at least two meta-training setups");
    BenchmarkReport rep;
    rep.suite = "few_shot";
    rep.seeds = cfg.seeds;
    rep.columns = kMetricColumns;

    BenchmarkCommon common = cfg.common;
    common.room.horizon = cfg.horizon;
    const SimOptions sim = common.sim;
    const SetupShift shifts[] = {SetupShift::furniture, SetupShift::ac_location, SetupShift::ac_speed};
    bool identity = true;

    for (SetupShift shift : shifts) {
        MetricAccumulator stale_acc, zero_acc, two_acc;
        for (std::uint64_t seed : cfg.seeds) {
            const ScenarioConfig room = make_room(common.room, seed);
            const CompartmentParams stale = fit_stale_params(room, common, seed);
            Rng train_rng(seed * 131 + static_cast<std::uint64_t>(shift));
            std::vector<Observation> train;
            for (std::size_t k = 0; k < cfg.meta_setups; ++k) {
                const ScenarioConfig setup = k == 0 ? room : apply_shift(room, shift, train_rng);
                const auto d = generate_dataset(setup, dataset_options(ScenarioFamily::single_cough, cfg.scenarios_per_setup,
                                                        common.noise_sigma, train_rng.next(), sim));
                train.insert(train.end(), d.begin(), d.end());
            }
            const auto episodes = build_episodes(train, rule_for(shift), cfg.support_size, seed);
            TwinTrainConfig tc = common.twin;
            tc.epochs = cfg.pretrain_epochs;
            tc.seed = seed;
            tc.sim = sim;
            const TwinModel init = train_twin({MlModule::gc_lstm, true}, train, stale, tc).model;
            MamlConfig mc = cfg.maml;
            mc.seed = seed;
            const TwinModel meta = meta_train_twin(init, episodes, mc).model;
            identity = identity && adapt_twin(meta, {}, mc.inner_steps, mc.inner_lr) == meta;

            Rng test_rng(seed * 31 + static_cast<std::uint64_t>(shift));
            for (std::size_t d = 0; d < cfg.draws_per_seed; ++d) {
                const ScenarioConfig shifted = apply_shift(room, shift, test_rng);
                const auto test = generate_dataset(shifted, dataset_options(ScenarioFamily::single_cough,
                                                             cfg.support_size + cfg.query_size, common.noise_sigma,
                                                             test_rng.next(), sim));
                const std::span<const Observation> all(test);
                const auto support = all.first(cfg.support_size);
                const auto query = all.subspan(cfg.support_size);
                const TwinModel adapted = adapt_twin(meta, support, mc.inner_steps, mc.inner_lr);
                std::vector<MetricsRecord> s, z, t;
                for (const auto& o : query) {
                    s.push_back(compute_metrics(simulate(o.scenario, stale, sim), o.trajectory, o.scenario));
                    z.push_back(compute_metrics(predict(meta, o.scenario), o.trajectory, o.scenario));
                    t.push_back(compute_metrics(predict(adapted, o.scenario), o.trajectory, o.scenario));
                }
                stale_acc.records.push_back(mean_metrics(s));
                zero_acc.records.push_back(mean_metrics(z));
                two_acc.records.push_back(mean_metrics(t));
            }
        }
        const std::string group(to_string(shift));
        rep.rows.push_back(stale_acc.finish(group, "Compartment (stale)"));
        rep.rows.push_back(zero_acc.finish(group, "0-shot"));
        rep.rows.push_back(two_acc.finish(group, "2-shot"));
        const double z = rep.rows[rep.rows.size() - 2].values[3];
        const double t = rep.rows.back().values[3];
        rep.checks.push_back({group + ": mean 2-shot MRTE <= mean 0-shot MRTE", t <= z,
                              fmt(t) + " s vs " + fmt(z) + " s over " +
                                  std::to_string(two_acc.records.size()) + " draws"});
    }
    rep.checks.push_back({"zero-shot adaptation returns the meta-weights", identity, "exact comparison"});

    rep.settings = {{"common", common_to_json(common)},
                    {"draws_per_seed", cfg.draws_per_seed},
                    {"meta_setups", cfg.meta_setups},
                    {"scenarios_per_setup", cfg.scenarios_per_setup},
                    {"pretrain_epochs", cfg.pretrain_epochs},
                    {"inner_lr", cfg.maml.inner_lr},
                    {"outer_lr", cfg.maml.outer_lr},
                    {"inner_steps", cfg.maml.inner_steps},
                    {"meta_batch", cfg.maml.meta_batch},
                    {"meta_iterations", cfg.maml.meta_iterations},
                    {"support_size", cfg.support_size},
                    {"query_size", cfg.query_size}};
    return rep;
}

BenchmarkReport run_placement_suite(const PlacementSuiteConfig& cfg) {
    if (cfg.seeds.empty() || cfg.scenarios == 0) throw std::invalid_argument("placement needs seeds and scenarios");
    BenchmarkReport rep;
    rep.suite = "placement";
    rep.seeds = cfg.seeds;
    rep.columns = {"mrt_s", "mrt_sd_s", "censored", "distance"};

    const PlacementStrategy strategies[] = {PlacementStrategy::optimal, PlacementStrategy::random_neighbor,
                                            PlacementStrategy::fixed_corner, PlacementStrategy::static_center};
    const ScenarioFamily families[] = {ScenarioFamily::single_cough, ScenarioFamily::multi_cough};
    const SimOptions sim = cfg.common.sim;

    struct Acc {
        std::vector<double> mrt, per_seed;
        double censored = 0.0, distance = 0.0;
    };
    std::map<std::pair<int, int>, Acc> acc;

    for (std::uint64_t seed : cfg.seeds) {
        const ScenarioConfig room = make_room(cfg.common.room, seed);
        std::unique_ptr<Forecaster> forecaster;
        if (cfg.oracle_forecaster) {
            forecaster = std::make_unique<SimulatorForecaster>(sim);
        } else {
            const CompartmentParams stale = fit_stale_params(room, cfg.common, seed);
            const auto train = generate_dataset(room, dataset_options(ScenarioFamily::single_cough, cfg.train_scenarios,
                                                       cfg.common.noise_sigma, seed * 7 + 2, sim));
            TwinTrainConfig tc = cfg.common.twin;
            tc.seed = seed;
            tc.sim = sim;
            forecaster = std::make_unique<TwinForecaster>(train_twin({MlModule::gc_lstm, true}, train, stale, tc).model);
        }
        for (int f = 0; f < 2; ++f) {
            Rng rng(seed * 7 + 5 + static_cast<std::uint64_t>(f));
            std::map<int, std::vector<double>> seed_mrt;
            for (std::size_t i = 0; i < cfg.scenarios; ++i) {
                ScenarioConfig s = sample_scenario(room, families[f], i, rng);
                s.purifier_schedule.clear();
                for (int k = 0; k < 4; ++k) {
                    EpisodeOptions eo;
                    eo.sim = sim;
                    eo.seed = s.noise_seed;
                    eo.idle_management = cfg.idle_management;
                    const EpisodeResult r = run_episode(s, strategies[k], forecaster.get(), cfg.policy, eo);
                    Acc& a = acc[{f, k}];
                    a.mrt.push_back(r.mrt);
                    a.censored += r.censored;
                    a.distance += r.distance_travelled;
                    seed_mrt[k].push_back(r.mrt);
                }
            }
            for (int k = 0; k < 4; ++k) acc[{f, k}].per_seed.push_back(mean_of(seed_mrt[k]));
        }
    }

    for (int f = 0; f < 2; ++f) {
        const std::string group(to_string(families[f]));
        for (int k = 0; k < 4; ++k) {
            const Acc& a = acc[{f, k}];
            const double n = static_cast<double>(a.mrt.size());
            rep.rows.push_back({group, std::string(to_string(strategies[k])),
                                {mean_of(a.mrt), stddev_of(a.mrt), a.censored, a.distance / n}, a.per_seed});
        }
        const double opt = rep.row(group, "optimal").values[0];
        const double nb = rep.row(group, "random_neighbor").values[0];
        const double corner = rep.row(group, "fixed_corner").values[0];
        rep.checks.push_back({group + ": MRT optimal < random_neighbor < fixed_corner", opt < nb && nb < corner,
                              fmt(opt) + " < " + fmt(nb) + " < " + fmt(corner)});
    }

    rep.settings = {{"common", common_to_json(cfg.common)},
                    {"scenarios", cfg.scenarios},
                    {"train_scenarios", cfg.train_scenarios},
                    {"tolerance_s", cfg.policy.tolerance},
                    {"forecaster", cfg.oracle_forecaster ? "simulator" : "Comp-GC-LSTM-Res"}};
    return rep;
}

}  // namespace aerotwin
