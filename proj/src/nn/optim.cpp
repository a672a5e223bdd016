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

#include "aerotwin/nn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace aerotwin {

void sgd_step(std::span<double> w, std::span<const double> g, double lr) {
    if (w.size() != g.size()) throw std::invalid_argument("gradient size mismatch");
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= lr * g[k];
}

Adam::Adam(double lr, double beta1, double beta2, double eps) : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (!(lr >= 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0))
        throw std::invalid_argument("bad Adam hyperparameters");
}

void Adam::reset() {
    m_.clear();
    v_.clear();
    t_ = 0;
}

void Adam::step(std::span<double> w, std::span<const double> g) {
    if (w.size() != g.size()) throw std::invalid_argument("gradient size mismatch");
    if (m_.size() != w.size()) {
        m_.assign(w.size(), 0.0);
        v_.assign(w.size(), 0.0);
        t_ = 0;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t k = 0; k < w.size(); ++k) {
        m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * g[k];
        v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * g[k] * g[k];
        w[k] -= lr_ * (m_[k] / c1) / (std::sqrt(v_[k] / c2) + eps_);
    }
}

}  // namespace aerotwin
