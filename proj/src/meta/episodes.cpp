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

#include "aerotwin/meta/episodes.hpp"

#include <map>
#include <memory>
#include <stdexcept>

#include "aerotwin/core/random.hpp"

namespace aerotwin {

std::string_view to_string(PartitionRule r) {
    switch (r) {
        case PartitionRule::purifier_row: return "purifier_row";
        case PartitionRule::furniture: return "furniture";
        case PartitionRule::ac_location: return "ac_location";
        case PartitionRule::ac_fan_speed: return "ac_fan_speed";
    }
    return "?";
}

PartitionRule parse_partition_rule(std::string_view s) {
    for (auto r : {PartitionRule::purifier_row, PartitionRule::furniture, PartitionRule::ac_location,
                   PartitionRule::ac_fan_speed})
        if (to_string(r) == s) return r;
    throw std::invalid_argument("unknown partition rule: " + std::string(s));
}

namespace {

std::string task_key(const ScenarioConfig& s, PartitionRule rule) {
    switch (rule) {
        case PartitionRule::purifier_row:
            if (s.purifier_schedule.empty()) throw std::invalid_argument("scenario has no purifier placement");
            return "row" + std::to_string(s.grid.cell(s.purifier_schedule.front().cell).row);
        case PartitionRule::furniture: {
            std::string key = "blocked";
            for (CellIndex c = 0; c < s.grid.num_cells(); ++c)
                if (!s.grid.accessible(c)) key += "_" + std::to_string(c);
            return key;
        }
        case PartitionRule::ac_location: return "ac" + std::to_string(s.ac.cell);
        case PartitionRule::ac_fan_speed: return "fan_" + std::string(to_string(s.ac.fan));
    }
    return {};
}

}  // namespace

std::vector<Episode> build_episodes(std::span<const Observation> data, PartitionRule rule, std::size_t support_size,
                                    std::uint64_t seed) {
    if (support_size == 0) throw std::invalid_argument("support_size must be positive");
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < data.size(); ++i) groups[task_key(data[i].scenario, rule)].push_back(i);
    Rng rng(seed);
    std::vector<Episode> out;
    for (auto& [key, members] : groups) {
        if (members.size() < 2) throw std::invalid_argument("task " + key + " has fewer than two scenarios");
        rng.shuffle(members);
        const std::size_t ns = std::min(support_size, members.size() - 1);
        Episode e;
        e.task_id = key;
        e.descriptor = rule;
        for (std::size_t k = 0; k < members.size(); ++k)
            (k < ns ? e.support : e.query).push_back(data[members[k]]);
        out.push_back(std::move(e));
    }
    return out;
}

LossFn twin_loss(const TwinModel& shape, std::span<const Observation> data) {
    auto samples = std::make_shared<const std::vector<TrainingSample>>(twin_samples(shape, data));
    auto adj = std::make_shared<const RowMatrix>(normalized_adjacency(shape.grid));
    const NetDims dims = shape.weights.dims();
    return [samples, adj, dims](std::span<const double> w, std::span<double> grad) {
        ModelWeights mw(dims);
        if (w.size() != mw.size()) throw std::invalid_argument("weight vector has the wrong size");
        std::copy(w.begin(), w.end(), mw.values().begin());
        return loss_and_gradient(mw, *samples, *adj, grad);
    };
}

MetaTask twin_task(const TwinModel& shape, const Episode& e) {
    return {twin_loss(shape, e.support), twin_loss(shape, e.query)};
}

MetaTrainedTwin meta_train_twin(const TwinModel& init, std::span<const Episode> episodes, const MamlConfig& cfg) {
    std::vector<MetaTask> tasks;
    for (const auto& e : episodes) tasks.push_back(twin_task(init, e));
    const auto v = init.weights.values();
    MamlResult r = meta_train(std::vector<double>(v.begin(), v.end()), tasks, cfg);
    MetaTrainedTwin out{init, std::move(r.query_loss_history)};
    std::copy(r.weights.begin(), r.weights.end(), out.model.weights.values().begin());
    return out;
}

TwinModel adapt_twin(const TwinModel& meta, std::span<const Observation> support, std::size_t steps, double lr) {
    if (support.empty() || steps == 0) return meta;
    TwinModel out = meta;
    const auto w = adapt(meta.weights.values(), twin_loss(meta, support), steps, lr);
    std::copy(w.begin(), w.end(), out.weights.values().begin());
    return out;
}

}  // namespace aerotwin
