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

#include "aerotwin/meta/maml.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "aerotwin/core/random.hpp"
#include "aerotwin/nn/network.hpp"
#include "aerotwin/nn/optim.hpp"

namespace aerotwin {

void MamlConfig::validate() const {
    if (!(inner_lr > 0.0) || !(outer_lr > 0.0)) throw std::invalid_argument("learning rates must be positive");
    if (meta_batch == 0 || meta_iterations == 0) throw std::invalid_argument("meta_batch and meta_iterations must be > 0");
}

std::vector<double> adapt(std::span<const double> w, const LossFn& support, std::size_t steps, double lr) {
    std::vector<double> out(w.begin(), w.end());
    if (!support || steps == 0) return out;
    std::vector<double> grad(out.size());
    for (std::size_t k = 0; k < steps; ++k) {
        const double loss = support(out, grad);
        if (!std::isfinite(loss)) throw DivergenceError("non-finite support loss at inner step " + std::to_string(k));
        sgd_step(out, grad, lr);
    }
    return out;
}

MetaGradient meta_gradient(std::span<const double> w, std::span<const MetaTask* const> batch, std::size_t inner_steps,
                           double inner_lr) {
    if (batch.empty()) throw std::invalid_argument("empty meta-batch");
    MetaGradient out;
    out.gradient.assign(w.size(), 0.0);
    std::vector<double> g(w.size());
    for (const MetaTask* task : batch) {
        const std::vector<double> adapted = adapt(w, task->support, inner_steps, inner_lr);
        const double loss = task->query(adapted, g);
        if (!std::isfinite(loss)) throw DivergenceError("non-finite query loss");
        out.query_loss += loss;
        for (std::size_t k = 0; k < g.size(); ++k) out.gradient[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& v : out.gradient) v *= inv;
    out.query_loss *= inv;
    return out;
}

MamlResult meta_train(std::vector<double> w, std::span<const MetaTask> tasks, const MamlConfig& cfg) {
    cfg.validate();
    if (tasks.size() < 2) throw std::invalid_argument("meta-training needs at least two tasks");
    Rng rng(cfg.seed);
    Adam outer(cfg.outer_lr);
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch_size = std::min(cfg.meta_batch, tasks.size());
    std::vector<const MetaTask*> batch;
    MamlResult res;
    for (std::size_t it = 0; it < cfg.meta_iterations; ++it) {
        rng.shuffle(order);
        batch.clear();
        for (std::size_t k = 0; k < batch_size; ++k) batch.push_back(&tasks[order[k]]);
        MetaGradient mg;
        try {
            mg = meta_gradient(w, batch, cfg.inner_steps, cfg.inner_lr);
        } catch (const DivergenceError& e) {
            throw DivergenceError("meta-iteration " + std::to_string(it) + ": " + e.what());
        }
        outer.step(w, mg.gradient);
        res.query_loss_history.push_back(mg.query_loss);
    }
    res.weights = std::move(w);
    return res;
}

}  // namespace aerotwin
