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

#ifndef CRAFTDDP_CONFIG_HPP
#define CRAFTDDP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "craftddp/ddp.hpp"
#include "craftddp/dynamics.hpp"
#include "craftddp/learner.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

/// Malformed config text; line() is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct TaskConfig {
  std::vector<Point2> waypoints;
  int horizon = 0;
  double dt = 0.0;
  std::optional<double> speed;
  std::optional<State> initial_state;  // default: first waypoint, at rest
  CostWeights weights;
  std::vector<Polyline> deck;  // default: ground line y = 0 under the path
  double craft_radius = 0.5;
};

struct ExperimentConfig {
  CraftParams craft;
  CraftParams model;  // defaults to craft with gravity 0
  TaskConfig task;
  DdpOptions ddp;
  LearnerOptions learner;
  double v_eps = 1e-3;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Sectioned key = value text:
///
///   [craft] [model] [task] [ddp] [learner] [metrics] [output]
///
/// '#' starts a comment. Vectors are comma-separated numbers; point lists
/// are ';'-separated "x,y" pairs; deck polylines are separated by '|'.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace craftddp

#endif  // CRAFTDDP_CONFIG_HPP
