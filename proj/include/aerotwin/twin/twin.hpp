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

#ifndef AEROTWIN_TWIN_TWIN_HPP
#define AEROTWIN_TWIN_TWIN_HPP

#include <array>
#include <functional>
#include <string>
#include <string_view>

#include "aerotwin/nn/network.hpp"
#include "aerotwin/sim/compartment.hpp"
#include "aerotwin/twin/features.hpp"

namespace aerotwin {

enum class MlModule { lstm, gc_lstm };

struct TwinVariant {
    MlModule module = MlModule::gc_lstm;
    bool residual = true;

    /// Comp-LSTM, Comp-LSTM-Res, Comp-GC-LSTM, Comp-GC-LSTM-Res
    std::string name() const;
    static TwinVariant parse(std::string_view name);
    friend bool operator==(const TwinVariant&, const TwinVariant&) = default;
};

std::array<TwinVariant, 4> all_twin_variants();

struct TwinTrainConfig {
    std::size_t hidden_size = 32;
    std::size_t lstm_layers = 1;
    std::size_t gcn_hidden = 8;
    std::size_t gcn_layers = 2;
    std::size_t epochs = 200;
    std::size_t batch_size = 8;
    double learning_rate = 5e-3;
    double clip_norm = 5.0;  // global gradient norm; 0 disables
    std::uint64_t seed = 1;
    SimOptions sim{1.0, 1.0};
};

/// A trained predictor with everything needed to reproduce its output.
struct TwinModel {
    TwinVariant variant;
    GridLayout grid = default_grid();
    ModelWeights weights;
    Normalization norm;
    CompartmentParams base_params;
    SimOptions sim;
    friend bool operator==(const TwinModel&, const TwinModel&) = default;
};

NetDims twin_dims(const TwinVariant& v, const GridLayout& grid, const TwinTrainConfig& cfg);

/// Freshly initialised model.
TwinModel make_twin(const TwinVariant& v, const GridLayout& grid, const CompartmentParams& base_params,
                    const Normalization& norm, const TwinTrainConfig& cfg);

/// Compartment trajectory under the frozen base params.
Trajectory base_trajectory(const TwinModel& m, const ScenarioConfig& s);
Trajectory predict(const TwinModel& m, const ScenarioConfig& s);
Trajectory predict_from_base(const TwinModel& m, const ScenarioConfig& s, const Trajectory& base);

/// Network inputs and normalized targets for each observation.
std::vector<TrainingSample> twin_samples(const TwinModel& m, std::span<const Observation> data);

struct FitOptions {
    std::size_t epochs = 200;
    std::size_t batch_size = 8;
    double learning_rate = 5e-3;
    double clip_norm = 5.0;
    std::uint64_t seed = 1;
};

/// Adam over shuffled minibatches; returns the mean loss of each epoch.
std::vector<double> fit_weights(ModelWeights& w, std::span<const TrainingSample> samples, const RowMatrix& adjacency,
                                const FitOptions& opts);

struct TrainedTwin {
    TwinModel model;
    std::vector<double> loss_history;
};

/// Normalization from `train`, then minimise MSE.
TrainedTwin train_twin(const TwinVariant& v, std::span<const Observation> train, const CompartmentParams& base_params,
                       const TwinTrainConfig& cfg);

/// Fold index per scenario: seeded permutation dealt round-robin.
std::vector<std::size_t> fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

using Predictor = std::function<Trajectory(const ScenarioConfig&)>;
/// Builds a predictor from the training part of one fold.
using PredictorFactory = std::function<Predictor(std::span<const Observation> train, std::size_t fold)>;

struct FoldResult {
    std::vector<std::size_t> validation;
    std::vector<MetricsRecord> per_scenario;
    MetricsRecord mean;
};

struct CvResult {
    std::vector<FoldResult> folds;
    MetricsRecord mean;  // average of fold means
};

CvResult cross_validate(std::span<const Observation> data, std::size_t folds, std::uint64_t seed,
                        const PredictorFactory& factory);

/// Variant twin trained per fold.
CvResult cross_validate_twin(const TwinVariant& v, std::span<const Observation> data,
                             const CompartmentParams& base_params, const TwinTrainConfig& cfg, std::size_t folds = 5);

nlohmann::json twin_to_json(const TwinModel& m);
TwinModel twin_from_json(const nlohmann::json& j);

}  // namespace aerotwin

#endif
