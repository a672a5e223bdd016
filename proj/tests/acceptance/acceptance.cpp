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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "aerotwin/core/scenario_io.hpp"
#include "aerotwin/estimation/fit.hpp"
#include "aerotwin/harness/benchmark.hpp"
#include "aerotwin/meta/episodes.hpp"
#include "aerotwin/rtd/rtd.hpp"
#include "aerotwin/sim/compartment.hpp"

#ifndef AEROTWIN_CLI_PATH
#define AEROTWIN_CLI_PATH ""
#endif

using namespace aerotwin;
namespace fs = std::filesystem;

namespace {

// One line of evidence inside a criterion.
struct Check {
    std::string what;
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // 0: none
    std::function<std::vector<Check>(const fs::path&)> run;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string fixed(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// criterion 1 ---------------------------------------------------------------

ScenarioConfig isolated_cell(double volume, double exhaust, double c0, double horizon) {
    ScenarioConfig s;
    s.grid = GridLayout(1, 1, volume);
    s.params = CompartmentParams::zeros(s.grid);
    s.params.exhaust_rate[0] = exhaust;
    s.ac = {0, true, FanLevel::high};
    s.initial = {c0};
    s.horizon = horizon;
    return s;
}

double decay_error(const Trajectory& t, double c0, double rate) {
    double worst = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double exact = c0 * std::exp(-rate * t.time(k));
        worst = std::max(worst, std::abs(t.at(k, 0) - exact) / exact);
    }
    return worst;
}

std::vector<Check> physics(const fs::path&) {
    std::vector<Check> out;
    const double V = 10.0, Q = 0.05, c0 = 100.0;
    const double e = decay_error(simulate(isolated_cell(V, Q, c0, 300.0), {0.1, 1.0}), c0, Q / V);
    out.push_back({"isolated decay vs C0 exp(-Qt/V) at dt=0.1", e < 1e-6, "max rel err " + sci(e) + " < 1e-6"});

    Rng rng(2024);
    double drift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ScenarioConfig s;
        s.params = CompartmentParams::zeros(s.grid);
        for (const auto& [a, b] : s.grid.pairs()) {
            s.params.set_exchange(a, b, rng.uniform(0.0, 0.2));
            s.params.set_exchange(b, a, rng.uniform(0.0, 0.2));
        }
        s.initial.resize(s.grid.num_cells());
        for (double& c : s.initial) c = rng.uniform(0.0, 300.0);
        s.horizon = 100.0;  // 1000 steps
        const Trajectory t = simulate(s, {0.1, 0.1});
        const double m0 = total_mass(s.grid, t.row(0));
        for (std::size_t k = 0; k < t.size(); ++k)
            drift = std::max(drift, std::abs(total_mass(s.grid, t.row(k)) - m0) / m0);
    }
    out.push_back({"mass conservation over 1000 steps (20 rooms)", drift < 1e-9, "max rel drift " + sci(drift) + " < 1e-9"});

    const auto s = isolated_cell(V, Q, c0, 800.0);
    const double e1 = decay_error(simulate(s, {40.0, 40.0}), c0, Q / V);
    const double e2 = decay_error(simulate(s, {20.0, 40.0}), c0, Q / V);
    const double ratio = e1 / e2;
    out.push_back({"RK4 error ratio under dt halving", ratio >= 12.0 && ratio <= 20.0, "ratio " + fixed(ratio) + " in [12, 20]"});

    // two-cell exchange: c0 - c1 relaxes at 2 alpha / V
    ScenarioConfig two;
    two.grid = GridLayout(1, 2, V);
    two.params = CompartmentParams::zeros(two.grid);
    two.params.set_symmetric_exchange(0, 1, 0.2);
    two.initial = {c0, 0.0};
    two.horizon = 200.0;
    auto diff_err = [&](double dt) {
        const Trajectory t = simulate(two, {dt, 20.0});
        double worst = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double exact = c0 * std::exp(-2.0 * 0.2 / V * t.time(k));
            worst = std::max(worst, std::abs((t.at(k, 0) - t.at(k, 1)) - exact) / exact);
        }
        return worst;
    };
    const double r2 = diff_err(4.0) / diff_err(2.0);
    out.push_back({"RK4 ratio on a two-cell exchange", r2 >= 12.0 && r2 <= 20.0, "ratio " + fixed(r2) + " in [12, 20]"});
    return out;
}

// criterion 2 ---------------------------------------------------------------

std::vector<Check> rtd(const fs::path&) {
    std::vector<Check> out;
    const double tau = 60.0;
    std::vector<double> t, c;
    for (int k = 0; k <= 1800; ++k) {
        t.push_back(k * 1.0);
        c.push_back(std::exp(-t.back() / tau));
    }
    const double m = mrt_moment(cumulative_rtd(t, c));
    const double rel = std::abs(m - tau) / tau;
    out.push_back({"exponential outlet, tau0 = 60 s", rel < 0.02, "mrt_moment " + fixed(m, 3) + " s, rel err " + sci(rel) + " < 2%"});

    const double V = 10.0, Q = 0.05;
    ScenarioConfig s = isolated_cell(V, Q, 0.0, 4000.0);
    s.coughs.push_back({100.0, 0, Direction::north, 500.0, 1.0});
    const Trajectory tr = simulate(s, {0.1, 1.0});
    const RtdResult r = analyze_rtd(tr, 100.0, 0);
    const double rel2 = std::abs(r.mrt_moment - V / Q) / (V / Q);
    out.push_back({"CSTR impulse, V/Q = 200 s", rel2 < 0.05, "MRT " + fixed(r.mrt_moment, 3) + " s, rel err " + sci(rel2) + " < 5%"});
    return out;
}

// criterion 3 ---------------------------------------------------------------

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

bool non_increasing(const std::vector<double>& h) {
    for (std::size_t k = 1; k < h.size(); ++k)
        if (h[k] > h[k - 1]) return false;
    return !h.empty();
}

std::vector<Check> de(const fs::path&) {
    std::vector<Check> out;
    std::size_t monotone = 0, runs = 0;

    DeConfig sc;
    sc.bounds.assign(5, Bounds{-5.0, 5.0});
    sc.population_size = 40;
    sc.max_generations = 300;
    sc.tolerance = 0.0;
    sc.seed = 7;
    const DeResult rs = de_minimize(sphere, sc);
    ++runs;
    monotone += non_increasing(rs.history);
    out.push_back({"sphere-5D", rs.best_fitness < 1e-6, "best " + sci(rs.best_fitness) + " < 1e-6"});

    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        DeConfig c;
        c.bounds.assign(2, Bounds{-5.12, 5.12});
        c.population_size = 60;
        c.max_generations = 500;
        c.mutation_factor = 0.5;
        c.crossover_rate = 0.9;
        c.seed = seed;
        const DeResult r = de_minimize(rastrigin, c);
        hits += r.best_fitness < 1e-3;
        ++runs;
        monotone += non_increasing(r.history);
    }
    out.push_back({"Rastrigin-2D over 20 seeds", hits >= 19, std::to_string(hits) + "/20 below 1e-3, need >= 19"});
    out.push_back({"fitness history non-increasing", monotone == runs,
                   std::to_string(monotone) + "/" + std::to_string(runs) + " runs"});
    return out;
}

// criterion 4 ---------------------------------------------------------------

double variance_of(std::span<const Observation> data) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (const auto& o : data)
        for (double v : o.trajectory.data()) {
            sum += v;
            sum2 += v * v;
            ++n;
        }
    const double mean = sum / static_cast<double>(n);
    return sum2 / static_cast<double>(n) - mean * mean;
}

double mse_between(std::span<const Observation> a, std::span<const Observation> b) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].trajectory.data().size(); ++k) {
            const double d = a[i].trajectory.data()[k] - b[i].trajectory.data()[k];
            s += d * d;
            ++n;
        }
    return s / static_cast<double>(n);
}

std::vector<Check> fit_consistency(const fs::path&) {
    std::vector<Check> out;
    const SimOptions sim{1.0, 1.0};
    const ScenarioConfig room = make_room({}, 11);
    Rng rng(5);
    std::vector<Observation> train, held;
    for (std::size_t i = 0; i < 6; ++i) {
        const ScenarioConfig s = sample_scenario(room, ScenarioFamily::purifier_free, i, rng);
        (i < 3 ? train : held).push_back({s, simulate(s, sim)});
    }
    FitSpec spec;
    spec.sim = sim;
    DeConfig dc = default_fit_de_config(room, spec, 3);
    dc.population_size = 60;
    dc.max_generations = 1500;
    dc.mutation_factor = 0.5;
    dc.tolerance = 1e-10;
    dc.stagnation_generations = 100;

    const FitResult clean = fit_params(train, spec, dc);
    const double held_mse = trajectory_mse(held, clean.best_params, sim);
    const double var = variance_of(held);
    out.push_back({"noiseless fit, held-out MSE", held_mse < 1e-4 * var,
                   sci(held_mse) + " < 1e-4 x var " + sci(var) + " (" + std::to_string(clean.generations_run) + " gens)"});

    Rng noise(8);
    std::vector<Observation> ntrain = train, nheld = held;
    for (auto& o : ntrain) o.trajectory = apply_noise(o.trajectory, 0.05, noise);
    for (auto& o : nheld) o.trajectory = apply_noise(o.trajectory, 0.05, noise);
    const double floor_train = mse_between(ntrain, train);
    const double floor_held = mse_between(nheld, held);
    const FitResult noisy = fit_params(ntrain, spec, dc);
    out.push_back({"5% noise, training MSE", noisy.best_fitness <= 2.0 * floor_train,
                   sci(noisy.best_fitness) + " <= 2 x floor " + sci(floor_train)});
    const double nh = trajectory_mse(nheld, noisy.best_params, sim);
    out.push_back({"5% noise, held-out MSE", nh <= 2.0 * floor_held, sci(nh) + " <= 2 x floor " + sci(floor_held)});
    return out;
}

// criterion 5 ---------------------------------------------------------------

std::vector<Check> gradients(const fs::path&) {
    std::vector<Check> out;
    const ScenarioConfig room = make_room({}, 4);
    DatasetOptions dopt;
    dopt.count = 2;
    dopt.seed = 6;
    dopt.sim = {2.0, 10.0};
    ScenarioConfig short_room = room;
    short_room.horizon = 300.0;
    const auto data = generate_dataset(short_room, dopt);

    struct Case {
        std::size_t lstm_layers;
        std::uint64_t seed;
    };
    for (const Case cs : {Case{1, 1}, Case{1, 2}, Case{1, 3}, Case{2, 4}}) {
        TwinTrainConfig tc;
        tc.hidden_size = 6;
        tc.gcn_hidden = 3;
        tc.gcn_layers = 2;
        tc.lstm_layers = cs.lstm_layers;
        tc.seed = cs.seed;
        tc.sim = dopt.sim;
        TwinModel shape = make_twin({MlModule::gc_lstm, true}, room.grid, room.params, {0.0, 100.0}, tc);
        // perturbed base so the residual target is non-trivial
        shape.base_params.source_scale = 0.7;
        const auto samples = twin_samples(shape, data);
        const RowMatrix adj = normalized_adjacency(room.grid);
        ModelWeights w = shape.weights;
        std::vector<double> analytic(w.size());
        loss_and_gradient(w, samples, adj, analytic);
        auto v = w.values();
        const double h = 1e-5;
        double worst = 0.0;
        std::string worst_name;
        for (const auto& t : w.tensors()) {
            for (std::size_t k = t.offset; k < t.offset + t.size(); ++k) {
                const double orig = v[k];
                v[k] = orig + h;
                const double up = mse_loss(w, samples, adj);
                v[k] = orig - h;
                const double down = mse_loss(w, samples, adj);
                v[k] = orig;
                const double numeric = (up - down) / (2.0 * h);
                const double err = std::abs(numeric - analytic[k]) / std::max({std::abs(numeric), std::abs(analytic[k]), 1e-6});
                if (err > worst) {
                    worst = err;
                    worst_name = t.name;
                }
            }
        }
        out.push_back({"seed " + std::to_string(cs.seed) + ", " + std::to_string(cs.lstm_layers) + " LSTM layer(s), " +
                           std::to_string(w.tensors().size()) + " tensors",
                       worst < 1e-4, "worst rel err " + sci(worst) + " (" + worst_name + ") < 1e-4"});
    }
    return out;
}

// criteria 6 to 8 -------------------------------------------------------------

void save_report(const fs::path& dir, const BenchmarkReport& r) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    write_json((dir / (r.suite + ".json")).string(), report_to_json(r));
    std::ofstream csv(dir / (r.suite + ".csv"));
    write_report_csv(csv, r);
}

std::vector<Check> report_checks(const BenchmarkReport& r) {
    std::printf("%s", format_report_table(r).c_str());
    std::vector<Check> out;
    for (const auto& c : r.checks) out.push_back({c.description, c.passed, c.detail});
    return out;
}

std::vector<Check> twin_accuracy(const fs::path& dir) {
    TwinAccuracyConfig c;
    c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const BenchmarkReport r = run_twin_accuracy(c);
    save_report(dir, r);
    return report_checks(r);
}

std::vector<Check> few_shot(const fs::path& dir) {
    FewShotConfig c;
    c.seeds = {1, 2};
    c.draws_per_seed = 5;
    const BenchmarkReport r = run_few_shot(c);
    save_report(dir, r);
    auto out = report_checks(r);
    for (const auto& row : r.rows)
        if (row.entity == "2-shot")
            out.push_back({row.group + ": at least 10 draws", row.per_seed.size() >= 10,
                           std::to_string(row.per_seed.size()) + " draws"});
    return out;
}

// Placement with exhaustive enumeration over accessible cells.
struct Enumerated {
    std::vector<CellIndex> candidates;
    CellIndex target = 0;
};

Enumerated enumerate(const ScenarioConfig& context, const CoughEvent& ev, CellIndex agent, const PolicyConfig& pc,
                     const SimOptions& sim) {
    const GridLayout& g = context.grid;
    std::vector<std::pair<CellIndex, double>> r;
    for (CellIndex c = 0; c < g.num_cells(); ++c) {
        if (!g.accessible(c)) continue;
        ScenarioConfig s = context;
        std::vector<PurifierCommand> kept;
        for (const auto& cmd : s.purifier_schedule)
            if (cmd.time < ev.time) kept.push_back(cmd);
        kept.push_back({ev.time, c, pc.run_fan});
        s.purifier_schedule = kept;
        s.travel_time_per_cell = 0.0;
        BaselineReturnOptions o = pc.mrt;
        o.cell.reset();
        o.search_from = ev.time;
        r.emplace_back(c, mrt_baseline_return(simulate(s, sim), ev.time, o).mrt);
    }
    double best = INFINITY;
    for (const auto& [c, v] : r) best = std::min(best, v);
    Enumerated e;
    int dist = 1 << 30;
    for (const auto& [c, v] : r) {
        if (v > best + pc.tolerance) continue;
        e.candidates.push_back(c);
        const int d = g.manhattan(agent, c);
        if (d < dist) {
            dist = d;
            e.target = c;
        }
    }
    return e;
}

std::vector<Check> placement(const fs::path& dir) {
    PlacementSuiteConfig c;
    c.seeds = {1, 2};
    c.scenarios = 20;
    const BenchmarkReport r = run_placement_suite(c);
    save_report(dir, r);
    auto out = report_checks(r);
    for (const auto& row : r.rows)
        if (row.entity == "optimal") {
            const std::size_t n = c.scenarios * c.seeds.size();
            out.push_back({row.group + ": scenarios per suite", n >= 20, std::to_string(n) + " >= 20"});
        }

    // decide() against brute force with the true simulator as the twin
    const SimOptions sim = c.common.sim;
    const SimulatorForecaster oracle(sim);
    std::size_t agree = 0, total = 0;
    for (ScenarioFamily fam : {ScenarioFamily::single_cough, ScenarioFamily::multi_cough}) {
        for (std::uint64_t seed : {1u, 2u}) {
            const ScenarioConfig room = make_room(c.common.room, seed);
            Rng rng(seed * 1000 + static_cast<std::uint64_t>(fam));
            for (std::size_t i = 0; i < 12; ++i) {
                ScenarioConfig truth = sample_scenario(room, fam, i, rng);
                truth.purifier_schedule = {{0.0, 0, FanLevel::off}};
                CellIndex agent = 0;
                for (std::size_t k = 0; k < truth.coughs.size(); ++k) {
                    ScenarioConfig context = truth;
                    context.coughs.assign(truth.coughs.begin(), truth.coughs.begin() + static_cast<std::ptrdiff_t>(k) + 1);
                    const CoughEvent& ev = truth.coughs[k];
                    const PlacementDecision d = decide(ev, agent, context, oracle, c.policy);
                    const Enumerated e = enumerate(context, ev, agent, c.policy, sim);
                    ++total;
                    agree += d.target_cell == e.target && d.candidate_set == e.candidates;
                    truth.purifier_schedule.push_back({ev.time, d.target_cell, c.policy.run_fan});
                    agent = d.target_cell;
                }
            }
        }
    }
    out.push_back({"decide() == exhaustive enumeration (true simulator)", agree == total,
                   std::to_string(agree) + "/" + std::to_string(total) + " decisions over 48 scenarios"});
    return out;
}

// criterion 9 ---------------------------------------------------------------

std::string trajectory_bytes(const Trajectory& t) {
    std::ostringstream os;
    write_trajectory_csv(os, t);
    return os.str();
}

std::string file_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Byte comparison of every regular file under two directories.
std::pair<bool, std::size_t> same_tree(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const fs::path other = b / fs::relative(e.path(), a);
        if (!fs::exists(other) || file_bytes(e.path()) != file_bytes(other)) return {false, files};
        ++files;
    }
    std::size_t files_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b)) files_b += e.is_regular_file();
    return {files == files_b, files};
}

std::vector<Check> determinism(const fs::path&) {
    std::vector<Check> out;
    auto dataset_bytes = [] {
        const ScenarioConfig room = make_room({}, 21);
        DatasetOptions o;
        o.family = ScenarioFamily::multi_cough;
        o.count = 6;
        o.noise_sigma = 0.05;
        o.seed = 77;
        std::string s;
        for (const auto& ob : generate_dataset(room, o)) s += scenario_to_json(ob.scenario).dump() + trajectory_bytes(ob.trajectory);
        return s;
    };
    const std::string d1 = dataset_bytes();
    out.push_back({"trajectories", d1 == dataset_bytes(), std::to_string(d1.size()) + " bytes"});

    const ScenarioConfig room = make_room({}, 22);
    DatasetOptions fo;
    fo.family = ScenarioFamily::purifier_free;
    fo.count = 2;
    fo.noise_sigma = 0.05;
    fo.seed = 5;
    fo.sim = {2.0, 10.0};
    const auto calib = generate_dataset(room, fo);
    FitSpec spec;
    spec.sim = fo.sim;
    auto fit_bytes = [&](std::size_t threads) {
        DeConfig dc = default_fit_de_config(room, spec, 9);
        dc.population_size = 30;
        dc.max_generations = 40;
        dc.threads = threads;
        const FitResult r = fit_params(calib, spec, dc);
        return params_to_json(r.best_params, room.grid).dump() + nlohmann::json(r.fitness_history).dump();
    };
    const std::string f1 = fit_bytes(1);
    out.push_back({"fit results (1 and 2 threads)", f1 == fit_bytes(1) && f1 == fit_bytes(2), std::to_string(f1.size()) + " bytes"});

    std::vector<Observation> train;
    for (int row = 0; row < 3; ++row) {
        DatasetOptions to = fo;
        to.family = ScenarioFamily::single_cough;
        to.count = 2;
        to.seed = 40 + static_cast<std::uint64_t>(row);
        to.purifier_row = row;
        const auto d = generate_dataset(room, to);
        train.insert(train.end(), d.begin(), d.end());
    }
    TwinTrainConfig tc;
    tc.hidden_size = 8;
    tc.gcn_hidden = 3;
    tc.epochs = 8;
    tc.batch_size = 3;
    tc.sim = fo.sim;
    auto ckpt_bytes = [&] {
        const TwinModel m = train_twin({MlModule::gc_lstm, true}, train, room.params, tc).model;
        const auto eps = build_episodes(train, PartitionRule::purifier_row, 1, 3);
        MamlConfig mc;
        mc.meta_iterations = 4;
        mc.meta_batch = 2;
        const TwinModel meta = meta_train_twin(m, eps, mc).model;
        return twin_to_json(m).dump() + twin_to_json(meta).dump();
    };
    const std::string c1 = ckpt_bytes();
    out.push_back({"checkpoints (trained and meta-trained)", c1 == ckpt_bytes(), std::to_string(c1.size()) + " bytes"});

    auto bench_bytes = [] {
        TwinAccuracyConfig t2;
        t2.seeds = {3};
        t2.scenarios = 10;
        t2.common.de_generations = 20;
        t2.common.twin.epochs = 4;
        PlacementSuiteConfig f6;
        f6.scenarios = 3;
        f6.train_scenarios = 6;
        f6.common.de_generations = 20;
        f6.common.twin.epochs = 4;
        std::string s;
        for (const auto& r : {run_twin_accuracy(t2), run_placement_suite(f6)}) {
            std::ostringstream csv;
            write_report_csv(csv, r);
            s += report_to_json(r).dump() + csv.str() + format_report_table(r);
        }
        return s;
    };
    const std::string b1 = bench_bytes();
    out.push_back({"benchmark tables (twin_accuracy, placement)", b1 == bench_bytes(), std::to_string(b1.size()) + " bytes"});

    const std::string cli = AEROTWIN_CLI_PATH;
    if (!cli.empty()) {
        const fs::path root = fs::temp_directory_path() / "aerotwin_acceptance_c9";
        fs::remove_all(root);
        const fs::path cfg = root / "quick.json";
        fs::create_directories(root);
        std::ofstream(cfg) << R"({"sim": {"dt": 2, "sample_interval": 10},
 "benchmark": {"placement": {"scenarios": 2, "train_scenarios": 4, "de_generations": 10, "twin": {"epochs": 3}}}})";
        bool ran = true;
        for (const char* run : {"a", "b"}) {
            const std::string dir = (root / run).string();
            const std::string base = "\"" + cli + "\" --seed 5 --config \"" + cfg.string() + "\" --out-dir \"" + dir;
            ran = ran && std::system((base + "/data\" gen-data --count 4 --sensor-csv > /dev/null").c_str()) == 0;
            const int rc = std::system((base + "/bench\" benchmark --suite placement > /dev/null").c_str());
            ran = ran && (rc == 0 || WEXITSTATUS(rc) == 1);
        }
        const auto [same, files] = ran ? same_tree(root / "a", root / "b") : std::pair{false, std::size_t{0}};
        out.push_back({"CLI outputs (gen-data, benchmark) byte-identical", ran && same,
                       std::to_string(files) + " files compared"});
        fs::remove_all(root);
    }
    return out;
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "physics oracle", 5.0, physics},
        {2, "RTD oracle", 5.0, rtd},
        {3, "differential evolution", 60.0, de},
        {4, "fit self-consistency", 300.0, fit_consistency},
        {5, "gradient checks", 30.0, gradients},
        {6, "hybrid twins vs stale compartment", 1200.0, twin_accuracy},
        {7, "few-shot adaptation trend", 0.0, few_shot},
        {8, "placement ordering and exhaustive agreement", 0.0, placement},
        {9, "determinism", 0.0, determinism},
    };
    return all;
}

bool run_criterion(const Criterion& c, const fs::path& report_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Check> checks;
    std::string error;
    try {
        checks = c.run(report_dir);
    } catch (const std::exception& e) {
        error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0)
        checks.push_back({"runtime", secs < c.time_limit_s, fixed(secs, 1) + " s < " + fixed(c.time_limit_s, 0) + " s"});
    bool ok = error.empty() && !checks.empty();
    for (const auto& ch : checks) ok = ok && ch.ok;
    for (const auto& ch : checks)
        std::printf("    %s %s: %s\n", ch.ok ? "ok  " : "FAIL", ch.what.c_str(), ch.detail.c_str());
    if (!error.empty()) std::printf("    FAIL exception: %s\n", error.c_str());
    std::printf("criterion %d %s: %s (%.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), secs);
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> which;
    std::string report_dir;
    app.add_option("--criterion", which, "Criterion number(s) 1-9; default all")->check(CLI::Range(1, 9));
    app.add_option("--report-dir", report_dir, "Write benchmark reports here");
    CLI11_PARSE(app, argc, argv);

    bool all_ok = true;
    for (const auto& c : criteria())
        if (which.empty() || std::find(which.begin(), which.end(), c.id) != which.end())
            all_ok = run_criterion(c, report_dir) && all_ok;
    return all_ok ? 0 : 1;
}
