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

#ifndef CRAFTDDP_EXPERIMENT_HPP
#define CRAFTDDP_EXPERIMENT_HPP

#include <memory>

#include "craftddp/config.hpp"
#include "craftddp/dynamics.hpp"
#include "craftddp/learner.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

/// Everything a subcommand needs, built from an ExperimentConfig.
struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const CraftModel> truth;  // the "real" system
  std::shared_ptr<const CraftModel> model;  // the approximate model
  ReferenceTrajectory reference;
  CostModel cost;
  DeckGeometry deck;
  State s0;
};

Experiment make_experiment(const ExperimentConfig& config);

// Scripted stand-in for a human pilot: a PD waypoint follower that tilts
// the thrust axis toward the desired acceleration. It knows the true craft
// parameters. It is a comparison baseline, not an optimal controller.
struct BaselineGains {
  double position = 1.5;  // 1/s^2
  double velocity = 2.0;  // 1/s
  double attitude = 30.0;
  double attitude_rate = 10.0;
};

struct BaselineRun {
  ControlTape tape;
  Trajectory trajectory;
};

BaselineRun baseline_controller(const CraftModel& truth,
                                const ReferenceTrajectory& reference,
                                const State& s0,
                                const BaselineGains& gains = {});

}  // namespace craftddp

#endif  // CRAFTDDP_EXPERIMENT_HPP
