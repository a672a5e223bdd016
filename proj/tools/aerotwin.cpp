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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "aerotwin/core/scenario_io.hpp"
#include "aerotwin/estimation/fit.hpp"
#include "aerotwin/harness/benchmark.hpp"
#include "aerotwin/harness/dataset_io.hpp"
#include "aerotwin/harness/sensor_csv.hpp"
#include "aerotwin/meta/episodes.hpp"
#include "aerotwin/rtd/rtd.hpp"
#include "aerotwin/sim/compartment.hpp"
#include "aerotwin/twin/metrics.hpp"
#include "cli_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aerotwin;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string config;
    std::string out_dir = ".";
};

// Thrown when a benchmark ordering fails; maps to exit code 1.
struct OrderingFailure {};

std::string out_path(const Globals& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

void print_metrics(const std::string& label, const MetricsRecord& m) {
    std::printf("%-24s MAE %.4f  MSE %.4f  rho %.4f  MRTE %.2f s\n", label.c_str(), m.mae, m.mse, m.pearson_rho,
                m.mrte);
}

DeConfig de_config(const cli::CliConfig& cfg, const ScenarioConfig& skeleton, const FitSpec& spec,
                   std::uint64_t seed) {
    DeConfig de = default_fit_de_config(skeleton, spec, seed);
    if (cfg.de_population > 0) de.population_size = cfg.de_population;
    de.max_generations = cfg.de_generations;
    de.mutation_factor = cfg.de_mutation;
    de.crossover_rate = cfg.de_crossover;
    return de;
}

// Keeps the configured step but samples like the data.
SimOptions sim_for(const cli::CliConfig& cfg, const std::vector<Observation>& data) {
    SimOptions sim = cfg.sim;
    sim.sample_interval = data.front().trajectory.sample_interval();
    sim.dt = std::min(sim.dt, sim.sample_interval);
    sim.validate();
    return sim;
}

// gen-data -------------------------------------------------------------------

struct GenDataArgs {
    std::string family = "single_cough";
    std::size_t count = 45;
    double noise = 0.05;
    std::string room;
    std::string shift;
    std::optional<int> purifier_row;
    bool sensor_csv = false;
};

void cmd_gen_data(const Globals& g, const GenDataArgs& a) {
    const auto cfg = cli::load_config(g.config);
    ScenarioConfig room = a.room.empty() ? make_room(cfg.room, g.seed) : read_scenario(a.room);
    if (!a.shift.empty()) {
        Rng rng(g.seed * 17 + 3);
        room = apply_shift(room, parse_shift(a.shift), rng);
    }
    DatasetOptions opts;
    opts.family = parse_family(a.family);
    opts.count = a.count;
    opts.noise_sigma = a.noise;
    opts.seed = g.seed;
    opts.sim = cfg.sim;
    opts.purifier_row = a.purifier_row;
    const auto data = generate_dataset(room, opts);
    save_dataset(g.out_dir, data);
    write_scenario(out_path(g, "room.json"), room);
    if (a.sensor_csv) {
        const SensorMap map = default_sensor_map(room.grid);
        fs::create_directories(fs::path(g.out_dir) / "sensors");
        write_json(out_path(g, "sensor_map.json"), sensor_map_to_json(map, room.grid));
        for (std::size_t i = 0; i < data.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "sensors/%04zu.csv", i);
            std::ofstream f(out_path(g, name));
            write_sensor_csv(f, data[i].trajectory, map);
        }
    }
    std::printf("wrote %zu %s observations to %s\n", data.size(), a.family.c_str(), g.out_dir.c_str());
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
    std::string scenario;
    std::optional<double> dt, sample_interval;
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const ScenarioConfig s = read_scenario(a.scenario);
    SimOptions sim = cfg.sim;
    if (a.dt) sim.dt = *a.dt;
    if (a.sample_interval) sim.sample_interval = *a.sample_interval;
    const Trajectory t = simulate(s, sim);
    const std::string path = out_path(g, "trajectory.csv");
    write_trajectory_csv(path, t);
    double peak = 0.0;
    for (double v : t.data()) peak = std::max(peak, v);
    std::printf("%zu samples x %zu cells, peak %.3f ug/m^3 -> %s\n", t.size(), t.num_cells(), peak, path.c_str());
}

// analyze --------------------------------------------------------------------

struct AnalyzeArgs {
    std::string trajectory;
    std::string sensor_csv;
    std::string sensor_map;
    std::string scenario;
    std::optional<double> cough_time;
    std::optional<std::size_t> outlet;
    std::optional<std::size_t> cell;
};

void cmd_analyze(const Globals& g, const AnalyzeArgs& a) {
    const auto cfg = cli::load_config(g.config);
    std::optional<ScenarioConfig> scenario;
    if (!a.scenario.empty()) scenario = read_scenario(a.scenario);

    Trajectory traj;
    json extra = json::object();
    if (!a.sensor_csv.empty()) {
        if (!scenario) throw CLI::ValidationError("--sensor-csv needs --scenario for the room grid");
        const SensorMap map = a.sensor_map.empty() ? default_sensor_map(scenario->grid)
                                                   : sensor_map_from_json(read_json(a.sensor_map), scenario->grid);
        std::ifstream in(a.sensor_csv);
        if (!in) throw std::runtime_error("cannot open '" + a.sensor_csv + "'");
        IngestOptions io;
        io.sample_interval = cfg.sim.sample_interval;
        const IngestResult r = ingest_sensor_csv(in, map, scenario->grid, io);
        traj = r.trajectory;
        extra["gaps"] = json::array();
        for (const auto& gap : r.gaps) extra["gaps"].push_back({{"from_s", gap.from}, {"to_s", gap.to}});
        write_trajectory_csv(out_path(g, "ingested.csv"), traj);
    } else if (!a.trajectory.empty()) {
        traj = read_trajectory_csv(a.trajectory);
    } else {
        throw CLI::ValidationError("analyze needs --trajectory or --sensor-csv");
    }

    BaselineReturnOptions opts = cfg.policy.mrt;
    double cough_time = 0.0;
    if (scenario && !scenario->coughs.empty()) {
        const MrtReference ref = mrt_reference(*scenario, opts);
        cough_time = ref.cough_time;
        opts = ref.opts;
    }
    if (a.cough_time) {
        cough_time = *a.cough_time;
        opts.search_from.reset();
    }
    opts.cell = a.cell;
    const RtdResult r = analyze_rtd(traj, cough_time, a.outlet, opts);
    json j = rtd_to_json(r);
    j["cough_time_s"] = cough_time;
    j.update(extra);
    write_json(out_path(g, "rtd.json"), j);
    std::printf("MRT (baseline return) %.2f s%s, MRT (moment) %.2f s\n", r.baseline_return.mrt,
                r.baseline_return.censored ? " [censored]" : "", r.mrt_moment);
}

// fit ------------------------------------------------------------------------

struct FitArgs {
    std::string data;
    std::string tying = "symmetric";
    bool no_source_scale = false;
};

void cmd_fit(const Globals& g, const FitArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const auto data = load_dataset(a.data);
    FitSpec spec;
    if (a.tying == "directed")
        spec.tying = ExchangeTying::directed;
    else if (a.tying != "symmetric")
        throw CLI::ValidationError("--tying must be symmetric or directed");
    spec.fit_source_scale = !a.no_source_scale;
    spec.sim = sim_for(cfg, data);
    const DeConfig de = de_config(cfg, data.front().scenario, spec, g.seed);
    const FitResult r = fit_params(data, spec, de);
    write_json(out_path(g, "params.json"), params_to_json(r.best_params, data.front().scenario.grid));
    write_json(out_path(g, "fit.json"), {{"best_fitness", r.best_fitness},
                                         {"generations_run", r.generations_run},
                                         {"fitness_history", r.fitness_history}});
    std::printf("fit MSE %.6g after %zu generations\n", r.best_fitness, r.generations_run);
}

// train ----------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::string variant = "Comp-GC-LSTM-Res";
    std::string base_params;
    std::string meta_rule;
    std::size_t support = 2;
};

void cmd_train(const Globals& g, const TrainArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const auto data = load_dataset(a.data);
    const GridLayout& grid = data.front().scenario.grid;
    const CompartmentParams base = params_from_json(read_json(a.base_params), grid);
    TwinTrainConfig tc = cfg.twin;
    tc.seed = g.seed;
    tc.sim = sim_for(cfg, data);
    const TrainedTwin trained = train_twin(TwinVariant::parse(a.variant), data, base, tc);
    json log{{"loss_history", trained.loss_history}};
    TwinModel model = trained.model;
    if (!a.meta_rule.empty()) {
        const auto episodes = build_episodes(data, parse_partition_rule(a.meta_rule), a.support, g.seed);
        MamlConfig mc = cfg.maml;
        mc.seed = g.seed;
        const MetaTrainedTwin meta = meta_train_twin(model, episodes, mc);
        model = meta.model;
        log["meta_query_loss_history"] = meta.query_loss_history;
        log["episodes"] = episodes.size();
    }
    write_json(out_path(g, "twin.json"), twin_to_json(model));
    write_json(out_path(g, "train.json"), log);
    std::printf("trained %s, final loss %.6g\n", model.variant.name().c_str(),
                trained.loss_history.empty() ? 0.0 : trained.loss_history.back());
}

// evaluate -------------------------------------------------------------------

struct EvaluateArgs {
    std::string data;
    std::string model;
    std::string params;
};

void cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const auto data = load_dataset(a.data);
    if (a.model.empty() == a.params.empty()) throw CLI::ValidationError("evaluate needs exactly one of --model, --params");
    Predictor predictor;
    std::string label;
    if (!a.model.empty()) {
        const TwinModel m = twin_from_json(read_json(a.model));
        predictor = [m](const ScenarioConfig& s) { return predict(m, s); };
        label = m.variant.name();
    } else {
        const CompartmentParams p = params_from_json(read_json(a.params), data.front().scenario.grid);
        const SimOptions sim = sim_for(cfg, data);
        predictor = [p, sim](const ScenarioConfig& s) { return simulate(s, p, sim); };
        label = "Compartment";
    }
    std::vector<MetricsRecord> records;
    json per = json::array();
    for (const auto& o : data) {
        records.push_back(compute_metrics(predictor(o.scenario), o.trajectory, o.scenario));
        per.push_back(metrics_to_json(records.back()));
    }
    const MetricsRecord mean = mean_metrics(records);
    write_json(out_path(g, "metrics.json"), {{"entity", label}, {"mean", metrics_to_json(mean)}, {"per_scenario", per}});
    print_metrics(label, mean);
}

// adapt ----------------------------------------------------------------------

struct AdaptArgs {
    std::string model;
    std::string support;
    std::optional<std::size_t> shots;
    std::optional<std::size_t> steps;
    std::optional<double> lr;
};

void cmd_adapt(const Globals& g, const AdaptArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const TwinModel meta = twin_from_json(read_json(a.model));
    std::vector<Observation> support;
    if (!a.support.empty()) support = load_dataset(a.support);
    if (a.shots) support.resize(std::min(*a.shots, support.size()));
    const std::size_t steps = a.steps.value_or(cfg.maml.inner_steps);
    const double lr = a.lr.value_or(cfg.maml.inner_lr);
    const TwinModel adapted = adapt_twin(meta, support, steps, lr);
    write_json(out_path(g, "twin_adapted.json"), twin_to_json(adapted));
    std::printf("%zu-shot adaptation, %zu steps at lr %g%s\n", support.size(), steps, lr,
                adapted == meta ? " (weights unchanged)" : "");
}

// place ----------------------------------------------------------------------

struct PlaceArgs {
    std::string scenario;
    std::string model;
    bool oracle = false;
    std::string strategy = "optimal";
    std::size_t start_cell = 0;
    bool no_idle = false;
};

void cmd_place(const Globals& g, const PlaceArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const ScenarioConfig s = read_scenario(a.scenario);
    std::unique_ptr<Forecaster> forecaster;
    if (a.oracle)
        forecaster = std::make_unique<SimulatorForecaster>(cfg.sim);
    else if (!a.model.empty())
        forecaster = std::make_unique<TwinForecaster>(twin_from_json(read_json(a.model)));
    EpisodeOptions eo;
    eo.start_cell = a.start_cell;
    eo.idle_management = !a.no_idle;
    eo.sim = cfg.sim;
    eo.seed = g.seed;
    const EpisodeResult r = run_episode(s, parse_strategy(a.strategy), forecaster.get(), cfg.policy, eo);
    write_json(out_path(g, "episode.json"), episode_to_json(r, s.grid));
    write_trajectory_csv(out_path(g, "realized.csv"), r.realized);
    for (const auto& d : r.decisions) {
        const Cell c = s.grid.cell(d.target_cell);
        std::printf("t=%.1f s -> cell [%d,%d] (%s, %zu candidates)\n", d.time, c.row, c.col,
                    std::string(to_string(d.fan_action)).c_str(), d.candidate_set.size());
    }
    std::printf("achieved MRT %.2f s%s, travelled %.0f cells\n", r.mrt, r.censored ? " [censored]" : "",
                r.distance_travelled);
}

// benchmark ------------------------------------------------------------------

struct BenchmarkArgs {
    std::string suite;
    std::vector<std::uint64_t> seeds;
};

void cmd_benchmark(const Globals& g, const BenchmarkArgs& a) {
    const auto cfg = cli::load_config(g.config);
    const json section = cfg.benchmark.contains(a.suite) ? cfg.benchmark[a.suite] : json::object();
    BenchmarkReport rep;
    if (a.suite == "twin_accuracy") {
        auto c = cli::twin_accuracy_config(section);
        if (!a.seeds.empty()) c.seeds = a.seeds;
        rep = run_twin_accuracy(c);
    } else if (a.suite == "few_shot") {
        auto c = cli::few_shot_config(section);
        if (!a.seeds.empty()) c.seeds = a.seeds;
        rep = run_few_shot(c);
    } else if (a.suite == "placement") {
        auto c = cli::placement_config(section);
        if (!a.seeds.empty()) c.seeds = a.seeds;
        rep = run_placement_suite(c);
    } else {
        throw CLI::ValidationError("--suite must be twin_accuracy, few_shot or placement");
    }
    write_json(out_path(g, rep.suite + ".json"), report_to_json(rep));
    std::ofstream csv(out_path(g, rep.suite + ".csv"));
    write_report_csv(csv, rep);
    std::cout << format_report_table(rep);
    if (!rep.passed()) throw OrderingFailure{};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aerosol digital twin: simulation, fitting, hybrid twins and purifier placement"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();

    GenDataArgs gd;
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
    gen->add_option("--family", gd.family, "purifier_free, single_cough or multi_cough")->capture_default_str();
    gen->add_option("--count", gd.count)->capture_default_str();
    gen->add_option("--noise", gd.noise, "Relative log-normal sensor noise")->capture_default_str();
    gen->add_option("--room", gd.room, "Room scenario JSON (default: synthetic room from the seed)")
        ->check(CLI::ExistingFile);
    gen->add_option("--shift", gd.shift, "Apply a setup shift: furniture, ac_location or ac_speed");
    gen->add_option("--purifier-row", gd.purifier_row, "Restrict purifier placements to one grid row");
    gen->add_flag("--sensor-csv", gd.sensor_csv, "Also write sensor logs");
    gen->callback([&] { cmd_gen_data(g, gd); });

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Simulate one scenario");
    sim->add_option("--scenario", sa.scenario)->required()->check(CLI::ExistingFile);
    sim->add_option("--dt", sa.dt);
    sim->add_option("--sample-interval", sa.sample_interval);
    sim->callback([&] { cmd_simulate(g, sa); });

    AnalyzeArgs aa;
    auto* an = app.add_subcommand("analyze", "Residence-time analysis of a trajectory or sensor log");
    an->add_option("--trajectory", aa.trajectory, "Trajectory CSV")->check(CLI::ExistingFile);
    an->add_option("--sensor-csv", aa.sensor_csv, "Sensor log CSV")->check(CLI::ExistingFile);
    an->add_option("--sensor-map", aa.sensor_map, "Sensor map JSON")->check(CLI::ExistingFile);
    an->add_option("--scenario", aa.scenario, "Scenario JSON for grid and cough time")->check(CLI::ExistingFile);
    an->add_option("--cough-time", aa.cough_time);
    an->add_option("--outlet", aa.outlet, "Outlet cell index for the RTD (default: spatial mean)");
    an->add_option("--cell", aa.cell, "Cell index for the baseline-return MRT (default: spatial mean)");
    an->callback([&] { cmd_analyze(g, aa); });

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit compartment parameters by differential evolution");
    fit->add_option("--data", fa.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    fit->add_option("--tying", fa.tying, "symmetric or directed")->capture_default_str();
    fit->add_flag("--no-source-scale", fa.no_source_scale);
    fit->callback([&] { cmd_fit(g, fa); });

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "Train a hybrid twin, optionally meta-trained");
    train->add_option("--data", ta.data)->required()->check(CLI::ExistingDirectory);
    train->add_option("--variant", ta.variant)->capture_default_str();
    train->add_option("--base-params", ta.base_params, "params.json of the compartment base")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--meta-rule", ta.meta_rule,
                      "Meta-train after pretraining; episodes by purifier_row, furniture, ac_location or ac_fan_speed");
    train->add_option("--support", ta.support, "Support scenarios per episode")->capture_default_str();
    train->callback([&] { cmd_train(g, ta); });

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "Score a twin or compartment params on a dataset");
    ev->add_option("--data", ea.data)->required()->check(CLI::ExistingDirectory);
    ev->add_option("--model", ea.model, "twin.json")->check(CLI::ExistingFile);
    ev->add_option("--params", ea.params, "params.json")->check(CLI::ExistingFile);
    ev->callback([&] { cmd_evaluate(g, ea); });

    AdaptArgs ad;
    auto* adapt = app.add_subcommand("adapt", "k-shot adaptation of a (meta-)trained twin");
    adapt->add_option("--model", ad.model)->required()->check(CLI::ExistingFile);
    adapt->add_option("--support", ad.support, "Support dataset directory (omit for 0-shot)")
        ->check(CLI::ExistingDirectory);
    adapt->add_option("--shots", ad.shots, "Use only the first k support scenarios");
    adapt->add_option("--steps", ad.steps);
    adapt->add_option("--lr", ad.lr);
    adapt->callback([&] { cmd_adapt(g, ad); });

    PlaceArgs pa;
    auto* place = app.add_subcommand("place", "Run the purifier agent on a scenario");
    place->add_option("--scenario", pa.scenario)->required()->check(CLI::ExistingFile);
    place->add_option("--model", pa.model, "twin.json forecaster")->check(CLI::ExistingFile);
    place->add_flag("--oracle", pa.oracle, "Forecast with the scenario's own simulator");
    place->add_option("--strategy", pa.strategy, "optimal, random_neighbor, fixed_corner or static_center")
        ->capture_default_str();
    place->add_option("--start-cell", pa.start_cell)->capture_default_str();
    place->add_flag("--no-idle", pa.no_idle, "Disable idle fan management");
    place->callback([&] { cmd_place(g, pa); });

    BenchmarkArgs ba;
    auto* bench = app.add_subcommand("benchmark", "Run a benchmark suite; exits 1 if an ordering fails");
    bench->add_option("--suite", ba.suite, "twin_accuracy, few_shot or placement")->required();
    bench->add_option("--seeds", ba.seeds, "Override the suite's seeds")->delimiter(',');
    bench->callback([&] { cmd_benchmark(g, ba); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const OrderingFailure&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
