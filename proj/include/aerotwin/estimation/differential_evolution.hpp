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

#ifndef AEROTWIN_ESTIMATION_DIFFERENTIAL_EVOLUTION_HPP
#define AEROTWIN_ESTIMATION_DIFFERENTIAL_EVOLUTION_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace aerotwin {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// DE/rand/1/bin settings.
struct DeConfig {
    std::size_t population_size = 40;
    double mutation_factor = 0.8;   // F in (0, 2]
    double crossover_rate = 0.9;    // CR in [0, 1]
    std::size_t max_generations = 300;
    /// Stop once the best fitness improved by less than tolerance * |best|
    /// over the last `stagnation_generations` generations.
    double tolerance = 1e-8;
    std::size_t stagnation_generations = 30;
    std::uint64_t seed = 1;
    std::vector<Bounds> bounds;
    /// Worker threads for trial evaluation; results do not depend on it.
    std::size_t threads = 1;

    void validate() const;
    /// Defaults with population 15 x dimension.
    static DeConfig for_bounds(std::vector<Bounds> bounds, std::uint64_t seed = 1);
};

struct DeResult {
    std::vector<double> best;
    double best_fitness = 0.0;
    std::vector<double> history;  // best fitness after initialisation and each generation
    std::size_t generations_run = 0;
    std::size_t evaluations = 0;
};

class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Objective = std::function<double(std::span<const double>)>;

/// Mutant components outside [lo, hi] are folded back by reflection.
double reflect_into(double v, const Bounds& b);

/// Minimizes `objective` over the box in `config.bounds`. Throws
/// ObjectiveError on a non-finite objective value. Must be thread-safe if
/// `config.threads > 1`.
DeResult de_minimize(const Objective& objective, const DeConfig& config);

}  // namespace aerotwin

#endif
