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

#include "aerotwin/twin/twin.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "aerotwin/core/random.hpp"
#include "aerotwin/core/scenario_io.hpp"
#include "aerotwin/nn/optim.hpp"
#include "aerotwin/twin/metrics.hpp"

namespace aerotwin {

std::string TwinVariant::name() const {
    std::string s = module == MlModule::lstm ? "Comp-LSTM" : "Comp-GC-LSTM";
    if (residual) s += "-Res";
    return s;
}

TwinVariant TwinVariant::parse(std::string_view name) {
    for (const auto& v : all_twin_variants())
        if (v.name() == name) return v;
    throw std::invalid_argument("unknown twin variant: " + std::string(name));
}

std::array<TwinVariant, 4> all_twin_variants() {
    return {TwinVariant{MlModule::lstm, false}, TwinVariant{MlModule::lstm, true}, TwinVariant{MlModule::gc_lstm, false},
            TwinVariant{MlModule::gc_lstm, true}};
}

NetDims twin_dims(const TwinVariant& v, const GridLayout& grid, const TwinTrainConfig& cfg) {
    NetDims d;
    d.input_size = frame_width(grid);
    d.hidden_size = cfg.hidden_size;
    d.lstm_layers = cfg.lstm_layers;
    d.num_cells = grid.num_cells();
    if (v.module == MlModule::gc_lstm) {
        d.node_features = node_feature_count;
        d.gcn_hidden = cfg.gcn_hidden;
        d.gcn_layers = cfg.gcn_layers;
    } else {
        d.node_features = 0;
        d.gcn_layers = 0;
    }
    return d;
}

TwinModel make_twin(const TwinVariant& v, const GridLayout& grid, const CompartmentParams& base_params,
                    const Normalization& norm, const TwinTrainConfig& cfg) {
    cfg.sim.validate();
    return {v, grid, init_weights(twin_dims(v, grid, cfg), cfg.seed), norm, base_params, cfg.sim};
}

Trajectory base_trajectory(const TwinModel& m, const ScenarioConfig& s) { return simulate(s, m.base_params, m.sim); }

Trajectory predict_from_base(const TwinModel& m, const ScenarioConfig& s, const Trajectory& base) {
    const SequenceInput in = build_inputs(s, base, m.norm, m.variant.module == MlModule::gc_lstm);
    const RowMatrix adj = normalized_adjacency(s.grid);
    const RowMatrix y = network_forward(m.weights, in, adj).outputs;
    std::vector<double> data(base.data().size());
    const double scale = m.norm.scale();
    const std::size_t n = base.num_cells();
    for (std::size_t k = 0; k < base.size(); ++k)
        for (std::size_t c = 0; c < n; ++c) {
            const double ml = y(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) * scale;
            const double v = m.variant.residual ? base.at(k, c) + ml : m.norm.lo + ml;
            data[k * n + c] = std::max(0.0, v);
        }
    return Trajectory(base.start_time(), base.sample_interval(), n, std::move(data), Provenance::predicted);
}

Trajectory predict(const TwinModel& m, const ScenarioConfig& s) { return predict_from_base(m, s, base_trajectory(m, s)); }

std::vector<TrainingSample> twin_samples(const TwinModel& m, std::span<const Observation> data) {
    std::vector<TrainingSample> out;
    out.reserve(data.size());
    const double inv = 1.0 / m.norm.scale();
    for (const auto& obs : data) {
        const Trajectory base = base_trajectory(m, obs.scenario);
        if (!base.aligned_with(obs.trajectory))
            throw std::invalid_argument("observed trajectory does not match the twin sampling");
        TrainingSample s;
        s.input = build_inputs(obs.scenario, base, m.norm, m.variant.module == MlModule::gc_lstm);
        const auto steps = static_cast<Eigen::Index>(base.size());
        const auto n = static_cast<Eigen::Index>(base.num_cells());
        s.target = RowMatrix(steps, n);
        for (Eigen::Index k = 0; k < steps; ++k)
            for (Eigen::Index c = 0; c < n; ++c) {
                const double o = obs.trajectory.at(static_cast<std::size_t>(k), static_cast<std::size_t>(c));
                const double b = base.at(static_cast<std::size_t>(k), static_cast<std::size_t>(c));
                s.target(k, c) = (m.variant.residual ? o - b : o - m.norm.lo) * inv;
            }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> fit_weights(ModelWeights& w, std::span<const TrainingSample> samples, const RowMatrix& adjacency,
                                const FitOptions& opts) {
    if (samples.empty()) throw std::invalid_argument("no training samples");
    if (opts.batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    Rng rng(opts.seed);
    Adam adam(opts.learning_rate);
    std::vector<double> grad(w.size());
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<TrainingSample> batch;
    std::vector<double> history;
    for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
        rng.shuffle(order);
        double sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t b = 0; b < order.size(); b += opts.batch_size) {
            batch.clear();
            for (std::size_t k = b; k < std::min(order.size(), b + opts.batch_size); ++k)
                batch.push_back(samples[order[k]]);
            sum += loss_and_gradient(w, batch, adjacency, grad);
            ++batches;
            if (opts.clip_norm > 0.0) {
                double norm = 0.0;
                for (double g : grad) norm += g * g;
                norm = std::sqrt(norm);
                if (norm > opts.clip_norm)
                    for (double& g : grad) g *= opts.clip_norm / norm;
            }
            adam.step(w.values(), grad);
        }
        history.push_back(sum / static_cast<double>(batches));
    }
    return history;
}

TrainedTwin train_twin(const TwinVariant& v, std::span<const Observation> train, const CompartmentParams& base_params,
                       const TwinTrainConfig& cfg) {
    if (train.empty()) throw std::invalid_argument("no training data");
    const GridLayout& grid = train.front().scenario.grid;
    std::vector<Trajectory> bases;
    for (const auto& obs : train) bases.push_back(simulate(obs.scenario, base_params, cfg.sim));
    TrainedTwin out{make_twin(v, grid, base_params, fit_normalization(train, bases), cfg), {}};
    const auto samples = twin_samples(out.model, train);
    out.loss_history = fit_weights(out.model.weights, samples, normalized_adjacency(grid),
                                   {cfg.epochs, cfg.batch_size, cfg.learning_rate, cfg.clip_norm, cfg.seed});
    return out;
}

std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("need at least two folds");
    if (n < folds) throw std::invalid_argument("fewer scenarios than folds");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<std::size_t> fold(n);
    for (std::size_t k = 0; k < n; ++k) fold[perm[k]] = k % folds;
    return fold;
}

CvResult cross_validate(std::span<const Observation> data, std::size_t folds, std::uint64_t seed,
                        const PredictorFactory& factory) {
    const auto assignment = fold_assignment(data.size(), folds, seed);
    CvResult out;
    std::vector<MetricsRecord> means;
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<Observation> train;
        FoldResult fr;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (assignment[i] == f)
                fr.validation.push_back(i);
            else
                train.push_back(data[i]);
        }
        const Predictor predictor = factory(train, f);
        for (std::size_t i : fr.validation)
            fr.per_scenario.push_back(compute_metrics(predictor(data[i].scenario), data[i].trajectory, data[i].scenario));
        fr.mean = mean_metrics(fr.per_scenario);
        means.push_back(fr.mean);
        out.folds.push_back(std::move(fr));
    }
    out.mean = mean_metrics(means);
    return out;
}

CvResult cross_validate_twin(const TwinVariant& v, std::span<const Observation> data,
                             const CompartmentParams& base_params, const TwinTrainConfig& cfg, std::size_t folds) {
    return cross_validate(data, folds, cfg.seed, [&](std::span<const Observation> train, std::size_t) {
        auto model = std::make_shared<TwinModel>(train_twin(v, train, base_params, cfg).model);
        return Predictor([model](const ScenarioConfig& s) { return predict(*model, s); });
    });
}

nlohmann::json twin_to_json(const TwinModel& m) {
    return {{"format", "aerotwin-twin"},
            {"version", 1},
            {"variant", m.variant.name()},
            {"grid", grid_to_json(m.grid)},
            {"normalization", {{"lo", m.norm.lo}, {"hi", m.norm.hi}}},
            {"base_params", params_to_json(m.base_params, m.grid)},
            {"sim", {{"dt_s", m.sim.dt}, {"sample_interval_s", m.sim.sample_interval}}},
            {"weights", weights_to_json(m.weights)}};
}

TwinModel twin_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "aerotwin-twin") throw std::invalid_argument("not a twin checkpoint");
    TwinModel m;
    m.variant = TwinVariant::parse(j.at("variant").get<std::string>());
    m.grid = grid_from_json(j.at("grid"));
    m.norm = {j.at("normalization").at("lo").get<double>(), j.at("normalization").at("hi").get<double>()};
    m.base_params = params_from_json(j.at("base_params"), m.grid);
    m.sim = {j.at("sim").at("dt_s").get<double>(), j.at("sim").at("sample_interval_s").get<double>()};
    m.sim.validate();
    m.weights = weights_from_json(j.at("weights"));
    if (m.weights.dims().input_size != frame_width(m.grid) || m.weights.dims().num_cells != m.grid.num_cells())
        throw std::invalid_argument("checkpoint weights do not match its grid");
    return m;
}

}  // namespace aerotwin
