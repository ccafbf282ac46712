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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "craftddp/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"craftddp: trajectory optimization and iterative learning for a planar craft"};
  app.require_subcommand(1);

  std::string config;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config, "experiment config file")->required();
  };

  auto* ddp = app.add_subcommand("ddp-run", "DDP on the approximate model");
  add_config(ddp);

  auto* learn = app.add_subcommand("learn", "iterative learning against the true craft");
  add_config(learn);

  std::string tape, system = "true";
  std::optional<std::string> output;
  auto* rollout = app.add_subcommand("rollout", "replay a control tape open loop");
  add_config(rollout);
  rollout->add_option("tape", tape, "control tape CSV")->required();
  rollout->add_option("--system", system, "true | model")
      ->check(CLI::IsMember({"true", "model"}));
  rollout->add_option("--output", output, "trajectory CSV to write");

  std::string trajectory;
  auto* metrics = app.add_subcommand("metrics", "evaluate one trajectory");
  add_config(metrics);
  metrics->add_option("trajectory", trajectory, "trajectory CSV")->required();

  std::string traj_a, traj_b;
  auto* compare = app.add_subcommand("compare", "compare two trajectories");
  add_config(compare);
  compare->add_option("a", traj_a, "first trajectory CSV")->required();
  compare->add_option("b", traj_b, "second trajectory CSV")->required();

  auto* baseline = app.add_subcommand("baseline", "scripted PD pilot on the true craft");
  add_config(baseline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : craftddp::kExitConfigOrIo;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*ddp) return craftddp::run_ddp(config, out, err);
  if (*learn) return craftddp::run_learn(config, out, err);
  if (*rollout) return craftddp::run_rollout(config, tape, system, output, out, err);
  if (*metrics) return craftddp::run_metrics(config, trajectory, out, err);
  if (*compare) return craftddp::run_compare(config, traj_a, traj_b, out, err);
  return craftddp::run_baseline(config, out, err);
}
