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

#include "aerotwin/estimation/differential_evolution.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "aerotwin/core/random.hpp"

namespace aerotwin {

void DeConfig::validate() const {
    if (bounds.empty()) throw std::invalid_argument("DE needs at least one dimension");
    if (population_size < 4) throw std::invalid_argument("population_size must be >= 4");
    if (!(mutation_factor > 0.0 && mutation_factor <= 2.0))
        throw std::invalid_argument("mutation_factor must lie in (0, 2]");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
        throw std::invalid_argument("crossover_rate must lie in [0, 1]");
    for (const auto& b : bounds)
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
            throw std::invalid_argument("bounds must be finite with lo < hi");
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
}

DeConfig DeConfig::for_bounds(std::vector<Bounds> bounds, std::uint64_t seed) {
    DeConfig c;
    c.population_size = std::max<std::size_t>(4, 15 * bounds.size());
    c.bounds = std::move(bounds);
    c.seed = seed;
    return c;
}

double reflect_into(double v, const Bounds& b) {
    if (v >= b.lo && v <= b.hi) return v;
    const double w = b.hi - b.lo;
    double d = std::fmod(std::abs(v - b.lo), 2.0 * w);
    return b.lo + (d <= w ? d : 2.0 * w - d);
}

namespace {

void evaluate_all(const Objective& f, const std::vector<std::vector<double>>& xs, std::vector<double>& out,
                  std::size_t threads) {
    out.resize(xs.size());
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = f(xs[i]);
    };
    if (threads <= 1 || xs.size() < 2) {
        run(0, xs.size());
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (xs.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(xs.size(), b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e, t] {
                try {
                    run(b, e);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!std::isfinite(out[i]))
            throw ObjectiveError("objective returned a non-finite value at candidate " + std::to_string(i));
}

}  // namespace

DeResult de_minimize(const Objective& objective, const DeConfig& cfg) {
    cfg.validate();
    const std::size_t dim = cfg.bounds.size();
    const std::size_t np = cfg.population_size;
    Rng rng(cfg.seed);

    std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
    for (auto& x : pop)
        for (std::size_t d = 0; d < dim; ++d) x[d] = rng.uniform(cfg.bounds[d].lo, cfg.bounds[d].hi);
    std::vector<double> fit;
    evaluate_all(objective, pop, fit, cfg.threads);

    DeResult res;
    res.evaluations = np;
    auto best_index = [&] {
        std::size_t b = 0;
        for (std::size_t i = 1; i < np; ++i)
            if (fit[i] < fit[b]) b = i;
        return b;
    };
    res.history.push_back(fit[best_index()]);

    std::vector<std::vector<double>> trials(np, std::vector<double>(dim));
    std::vector<double> trial_fit;
    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do r1 = rng.index(np); while (r1 == i);
            do r2 = rng.index(np); while (r2 == i || r2 == r1);
            do r3 = rng.index(np); while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t forced = rng.index(dim);
            auto& u = trials[i];
            for (std::size_t d = 0; d < dim; ++d) {
                if (d == forced || rng.uniform() < cfg.crossover_rate) {
                    const double v = pop[r1][d] + cfg.mutation_factor * (pop[r2][d] - pop[r3][d]);
                    u[d] = reflect_into(v, cfg.bounds[d]);
                } else {
                    u[d] = pop[i][d];
                }
            }
        }
        evaluate_all(objective, trials, trial_fit, cfg.threads);
        res.evaluations += np;
        for (std::size_t i = 0; i < np; ++i) {
            if (trial_fit[i] <= fit[i]) {
                pop[i].swap(trials[i]);
                fit[i] = trial_fit[i];
            }
        }
        res.history.push_back(fit[best_index()]);
        res.generations_run = gen;

        if (cfg.stagnation_generations > 0 && gen >= cfg.stagnation_generations) {
            const double before = res.history[gen - cfg.stagnation_generations];
            const double now = res.history[gen];
            if (before - now <= cfg.tolerance * std::abs(before)) break;
        }
    }
    const std::size_t b = best_index();
    res.best = pop[b];
    res.best_fitness = fit[b];
    return res;
}

}  // namespace aerotwin
