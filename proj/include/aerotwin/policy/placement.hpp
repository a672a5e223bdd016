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

#ifndef AEROTWIN_POLICY_PLACEMENT_HPP
#define AEROTWIN_POLICY_PLACEMENT_HPP

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aerotwin/rtd/rtd.hpp"
#include "aerotwin/sim/compartment.hpp"
#include "aerotwin/twin/twin.hpp"

namespace aerotwin {

/// Predicts the full concentration field of a scenario.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual Trajectory forecast(const ScenarioConfig& s) const = 0;
};

/// Compartment model with fixed params (ground truth when given the scenario's own).
class SimulatorForecaster : public Forecaster {
public:
    /// nullopt params: use each scenario's own physics.
    explicit SimulatorForecaster(SimOptions sim, std::optional<CompartmentParams> params = std::nullopt)
        : sim_(sim), params_(std::move(params)) {}
    Trajectory forecast(const ScenarioConfig& s) const override;

private:
    SimOptions sim_;
    std::optional<CompartmentParams> params_;
};

class TwinForecaster : public Forecaster {
public:
    explicit TwinForecaster(TwinModel model) : model_(std::move(model)) {}
    Trajectory forecast(const ScenarioConfig& s) const override { return predict(model_, s); }
    const TwinModel& model() const { return model_; }

private:
    TwinModel model_;
};

class PredictionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PolicyConfig {
    double tolerance = 15.0;          // s
    double idle_pm_threshold = 1.0;   // ug/m^3, sensor mode
    double fan_low_timeout = 0.0;     // s of slack past the summed residence times, sensorless mode
    FanLevel run_fan = FanLevel::high;
    BaselineReturnOptions mrt;
    void validate() const;
};

enum class FanAction { move_run, hold, lower, off };
std::string_view to_string(FanAction a);

struct PlacementDecision {
    double time = 0.0;
    CellIndex target_cell = 0;
    FanAction fan_action = FanAction::move_run;
    std::map<CellIndex, double> predicted_mrt;  // per accessible cell
    std::vector<CellIndex> candidate_set;
};

/// Forecasts the field with the purifier placed (instantly) at every
/// accessible cell, takes the baseline-return MRT measured from `event`,
/// keeps cells within `tolerance` of the best and moves to the one nearest
/// `agent_cell`; ties go to the lowest index. `context` carries the room,
/// the coughs so far and the purifier commands issued before the event.
PlacementDecision decide(const CoughEvent& event, CellIndex agent_cell, const ScenarioConfig& context,
                         const Forecaster& forecaster, const PolicyConfig& cfg);

/// Fan rule between coughs. With a reading: off below the threshold.
/// Without one: lower once `elapsed` exceeds the summed residence times of
/// past events (plus fan_low_timeout). Otherwise hold.
FanAction idle_update(double elapsed, std::optional<double> local_pm, double residence_sum,
                      const PolicyConfig& cfg);

enum class PlacementStrategy { optimal, random_neighbor, fixed_corner, static_center };
std::string_view to_string(PlacementStrategy s);
PlacementStrategy parse_strategy(std::string_view s);

struct EpisodeOptions {
    CellIndex start_cell = 0;
    /// Apply the sensorless idle rule after the last cough.
    bool idle_management = true;
    SimOptions sim{1.0, 1.0};
    std::uint64_t seed = 1;
};

struct EpisodeResult {
    double mrt = 0.0;              // baseline-return MRT of the realized spatial mean
    bool censored = false;
    double distance_travelled = 0; // grid steps
    Trajectory realized;
    std::vector<PurifierCommand> schedule;
    std::vector<PlacementDecision> decisions;
};

/// Closed loop on `truth`: the strategy reacts to each cough in time order,
/// the purifier travels at the scenario's speed, and the realized trajectory
/// comes from the truth physics. `forecaster` is only used by `optimal`.
/// Purifier commands already in `truth` are replaced.
EpisodeResult run_episode(const ScenarioConfig& truth, PlacementStrategy strategy, const Forecaster* forecaster,
                          const PolicyConfig& cfg, const EpisodeOptions& opts);

/// Exhaustive search fallback used by tests and the CLI: the MRT of every
/// accessible placement, forecast the same way as decide().
std::map<CellIndex, double> placement_mrts(const CoughEvent& event, const ScenarioConfig& context,
                                           const Forecaster& forecaster, const PolicyConfig& cfg);

nlohmann::json decision_to_json(const PlacementDecision& d, const GridLayout& grid);
nlohmann::json episode_to_json(const EpisodeResult& r, const GridLayout& grid);

}  // namespace aerotwin

#endif
