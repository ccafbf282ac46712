/*
 Copyright 2026 The craftddp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "craftddp/experiment.hpp"

#include <algorithm>
#include <cmath>

namespace craftddp {

Experiment make_experiment(const ExperimentConfig& config) {
  config.validate();
  Experiment e;
  e.config = config;
  e.truth = std::make_shared<CraftModel>(config.craft, config.task.dt);
  e.model = std::make_shared<CraftModel>(config.model, config.task.dt);
  e.reference = build_reference(config.task.waypoints, config.task.horizon,
                                config.task.dt, config.task.speed);
  e.cost = make_craft_cost(e.reference, config.task.weights, config.craft);
  e.deck.polylines = config.task.deck;
  e.deck.craft_radius = config.task.craft_radius;
  e.deck.validate();
  if (config.task.initial_state) {
    e.s0 = *config.task.initial_state;
  } else {
    e.s0 = State::Zero(kCraftStateDim);
    e.s0(state_index::kX) = config.task.waypoints.front().x();
    e.s0(state_index::kY) = config.task.waypoints.front().y();
  }
  return e;
}

BaselineRun baseline_controller(const CraftModel& truth,
                                const ReferenceTrajectory& reference,
                                const State& s0, const BaselineGains& g) {
  using namespace state_index;
  const CraftParams& p = *truth.craft_params();
  const int horizon = reference.horizon();
  BaselineRun run;
  run.trajectory.dt = truth.dt();
  run.trajectory.states.push_back(s0);
  for (int k = 0; k < horizon; ++k) {
    const State& x = run.trajectory.states.back();
    const State& r = reference.targets[k];
    const double ax = g.position * (r(kX) - x(kX)) + g.velocity * (r(kVx) - x(kVx));
    const double ay = g.position * (r(kY) - x(kY)) + g.velocity * (r(kVy) - x(kVy)) +
                      p.gravity;
    // Thrust axis (-sin, cos) aligned with the desired acceleration.
    const double theta_des = std::atan2(-ax, ay);
    const double along = -std::sin(x(kTheta)) * ax + std::cos(x(kTheta)) * ay;
    Control u(kCraftControlDim);
    u(control_index::kThrust) = std::clamp(p.mass * along, 0.0, p.thrust_max);
    u(control_index::kTorque) =
        std::clamp(p.inertia * (g.attitude * (theta_des - x(kTheta)) -
                                g.attitude_rate * x(kOmega)),
                   -p.torque_max, p.torque_max);
    run.trajectory.states.push_back(integrate_step(truth, x, u, k));
    run.trajectory.controls.push_back(u);
  }
  run.tape = run.trajectory.controls;
  return run;
}

}  // namespace craftddp
