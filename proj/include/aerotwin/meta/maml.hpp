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

#ifndef AEROTWIN_META_MAML_HPP
#define AEROTWIN_META_MAML_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace aerotwin {

/// Loss at `w`; writes dL/dw into `grad` (same size).
using LossFn = std::function<double(std::span<const double> w, std::span<double> grad)>;

struct MetaTask {
    LossFn support;
    LossFn query;
};

struct MamlConfig {
    double inner_lr = 1e-2;
    double outer_lr = 1e-3;
    std::size_t inner_steps = 5;
    std::size_t meta_batch = 3;  // episodes per meta-iteration
    std::size_t meta_iterations = 100;
    std::uint64_t seed = 1;
    void validate() const;
};

/// `steps` SGD steps on `support`. An empty loss or zero steps returns `w`.
std::vector<double> adapt(std::span<const double> w, const LossFn& support, std::size_t steps, double lr);

struct MetaGradient {
    std::vector<double> gradient;  // mean of query gradients at the adapted weights
    double query_loss = 0.0;       // mean query loss at the adapted weights
};

/// First-order: no derivative flows through the inner updates.
MetaGradient meta_gradient(std::span<const double> w, std::span<const MetaTask* const> batch, std::size_t inner_steps,
                           double inner_lr);

struct MamlResult {
    std::vector<double> weights;
    std::vector<double> query_loss_history;  // one entry per meta-iteration
};

/// Samples meta_batch tasks per iteration (without replacement within a
/// batch), averages first-order meta-gradients, Adam step with outer_lr.
/// Throws DivergenceError on a non-finite loss.
MamlResult meta_train(std::vector<double> w, std::span<const MetaTask> tasks, const MamlConfig& cfg);

}  // namespace aerotwin

#endif
