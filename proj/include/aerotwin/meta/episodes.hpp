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

#ifndef AEROTWIN_META_EPISODES_HPP
#define AEROTWIN_META_EPISODES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "aerotwin/meta/maml.hpp"
#include "aerotwin/twin/twin.hpp"

namespace aerotwin {

enum class PartitionRule { purifier_row, furniture, ac_location, ac_fan_speed };
std::string_view to_string(PartitionRule r);
PartitionRule parse_partition_rule(std::string_view s);

struct Episode {
    std::string task_id;
    PartitionRule descriptor = PartitionRule::purifier_row;
    std::vector<Observation> support;
    std::vector<Observation> query;
};

/// Groups scenarios by the rule's factor; each group is shuffled (seeded)
/// and split into min(support_size, size - 1) support scenarios, the rest
/// query. Throws if a group has fewer than two scenarios.
std::vector<Episode> build_episodes(std::span<const Observation> data, PartitionRule rule,
                                    std::size_t support_size = 2, std::uint64_t seed = 1);

/// Normalized twin MSE on `data` as a LossFn over the flat weights of `shape`.
LossFn twin_loss(const TwinModel& shape, std::span<const Observation> data);
MetaTask twin_task(const TwinModel& shape, const Episode& e);

struct MetaTrainedTwin {
    TwinModel model;
    std::vector<double> query_loss_history;
};

MetaTrainedTwin meta_train_twin(const TwinModel& init, std::span<const Episode> episodes, const MamlConfig& cfg);

/// k-shot adaptation; an empty support set returns `meta` unchanged.
TwinModel adapt_twin(const TwinModel& meta, std::span<const Observation> support, std::size_t steps, double lr);

}  // namespace aerotwin

#endif
