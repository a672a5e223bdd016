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

#include "cli_config.hpp"

#include <set>

#include "aerotwin/core/scenario_io.hpp"

namespace aerotwin::cli {

using nlohmann::json;

namespace {

// Reads known keys from one JSON object and rejects the rest.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("config section '" + name_ + "' must be an object");
    }
    void done() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ConfigError("unknown key '" + name_ + "." + k + "'");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    template <class T>
    void get(const std::string& key, T& v) {
        if (!has(key)) return;
        try {
            v = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("bad value for '" + name_ + "." + key + "'");
        }
    }
    void get(const std::string& key, FanLevel& v) {
        std::string s;
        get(key, s);
        if (!s.empty()) v = parse_fan_level(s);
    }
    const json& sub(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }
    std::string child(const std::string& key) const { return name_ + "." + key; }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

void read_room(const json& j, const std::string& name, RoomSpec& r) {
    Section s(j, name);
    s.get("rows", r.rows);
    s.get("cols", r.cols);
    s.get("cell_volume", r.cell_volume);
    s.get("exchange_mean", r.exchange_mean);
    s.get("exchange_jitter", r.exchange_jitter);
    if (s.has("ac_cell")) {
        const auto& c = s.sub("ac_cell");
        if (!c.is_array() || c.size() != 2) throw ConfigError(name + ".ac_cell must be [row, col]");
        r.ac_cell = {c[0].get<int>(), c[1].get<int>()};
    }
    s.get("exhaust", r.exhaust);
    s.get("filter_efficiency", r.filter_efficiency);
    s.get("filter_airflow", r.filter_airflow);
    s.get("cough_mass", r.cough_mass);
    s.get("cough_time", r.cough_time);
    s.get("horizon", r.horizon);
    s.get("travel_time_per_cell", r.travel_time_per_cell);
    s.done();
}

void read_sim(const json& j, const std::string& name, SimOptions& o) {
    Section s(j, name);
    s.get("dt", o.dt);
    s.get("sample_interval", o.sample_interval);
    s.done();
    o.validate();
}

void read_twin(const json& j, const std::string& name, TwinTrainConfig& t) {
    Section s(j, name);
    s.get("hidden_size", t.hidden_size);
    s.get("lstm_layers", t.lstm_layers);
    s.get("gcn_hidden", t.gcn_hidden);
    s.get("gcn_layers", t.gcn_layers);
    s.get("epochs", t.epochs);
    s.get("batch_size", t.batch_size);
    s.get("learning_rate", t.learning_rate);
    s.get("clip_norm", t.clip_norm);
    s.done();
}

void read_maml(const json& j, const std::string& name, MamlConfig& m) {
    Section s(j, name);
    s.get("inner_lr", m.inner_lr);
    s.get("outer_lr", m.outer_lr);
    s.get("inner_steps", m.inner_steps);
    s.get("meta_batch", m.meta_batch);
    s.get("meta_iterations", m.meta_iterations);
    s.done();
    m.validate();
}

void read_policy(const json& j, const std::string& name, PolicyConfig& p) {
    Section s(j, name);
    s.get("tolerance", p.tolerance);
    s.get("idle_pm_threshold", p.idle_pm_threshold);
    s.get("fan_low_timeout", p.fan_low_timeout);
    s.get("run_fan", p.run_fan);
    s.get("baseline_window", p.mrt.baseline_window);
    s.get("band", p.mrt.band);
    s.get("hold", p.mrt.hold);
    s.done();
    p.validate();
}

void read_common(Section& s, BenchmarkCommon& c) {
    if (s.has("room")) read_room(s.sub("room"), s.child("room"), c.room);
    if (s.has("sim")) read_sim(s.sub("sim"), s.child("sim"), c.sim);
    if (s.has("twin")) read_twin(s.sub("twin"), s.child("twin"), c.twin);
    s.get("noise_sigma", c.noise_sigma);
    s.get("calibration_count", c.calibration_count);
    s.get("de_population", c.de_population);
    s.get("de_generations", c.de_generations);
    s.get("de_mutation", c.de_mutation);
    s.get("base_knows_purifier", c.base_knows_purifier);
}

}  // namespace

CliConfig parse_config(const json& j) {
    CliConfig c;
    Section s(j, "config");
    if (s.has("room")) read_room(s.sub("room"), "room", c.room);
    if (s.has("sim")) read_sim(s.sub("sim"), "sim", c.sim);
    if (s.has("twin")) read_twin(s.sub("twin"), "twin", c.twin);
    if (s.has("maml")) read_maml(s.sub("maml"), "maml", c.maml);
    if (s.has("policy")) read_policy(s.sub("policy"), "policy", c.policy);
    if (s.has("de")) {
        Section d(s.sub("de"), "de");
        d.get("population", c.de_population);
        d.get("generations", c.de_generations);
        d.get("mutation", c.de_mutation);
        d.get("crossover", c.de_crossover);
        d.done();
    }
    if (s.has("benchmark")) {
        c.benchmark = s.sub("benchmark");
        // validate eagerly so typos surface before any long run
        if (!c.benchmark.is_object()) throw ConfigError("config section 'benchmark' must be an object");
        if (c.benchmark.contains("twin_accuracy")) twin_accuracy_config(c.benchmark["twin_accuracy"]);
        if (c.benchmark.contains("few_shot")) few_shot_config(c.benchmark["few_shot"]);
        if (c.benchmark.contains("placement")) placement_config(c.benchmark["placement"]);
        Section b(c.benchmark, "benchmark");
        b.has("twin_accuracy");
        b.has("few_shot");
        b.has("placement");
        b.done();
    }
    s.done();
    return c;
}

CliConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_config(read_json(path));
}

TwinAccuracyConfig twin_accuracy_config(const json& j) {
    TwinAccuracyConfig c;
    Section s(j, "benchmark.twin_accuracy");
    read_common(s, c.common);
    s.get("seeds", c.seeds);
    s.get("scenarios", c.scenarios);
    s.get("folds", c.folds);
    s.get("seed_win_fraction", c.seed_win_fraction);
    s.get("best_ratio", c.best_ratio);
    s.done();
    return c;
}

FewShotConfig few_shot_config(const json& j) {
    FewShotConfig c;
    Section s(j, "benchmark.few_shot");
    read_common(s, c.common);
    s.get("seeds", c.seeds);
    s.get("draws_per_seed", c.draws_per_seed);
    s.get("meta_setups", c.meta_setups);
    s.get("scenarios_per_setup", c.scenarios_per_setup);
    s.get("pretrain_epochs", c.pretrain_epochs);
    if (s.has("maml")) read_maml(s.sub("maml"), "benchmark.few_shot.maml", c.maml);
    s.get("support_size", c.support_size);
    s.get("query_size", c.query_size);
    s.get("horizon", c.horizon);
    s.done();
    return c;
}

PlacementSuiteConfig placement_config(const json& j) {
    PlacementSuiteConfig c;
    Section s(j, "benchmark.placement");
    read_common(s, c.common);
    s.get("seeds", c.seeds);
    s.get("scenarios", c.scenarios);
    s.get("train_scenarios", c.train_scenarios);
    if (s.has("policy")) read_policy(s.sub("policy"), "benchmark.placement.policy", c.policy);
    s.get("oracle_forecaster", c.oracle_forecaster);
    s.get("idle_management", c.idle_management);
    s.done();
    return c;
}

}  // namespace aerotwin::cli
