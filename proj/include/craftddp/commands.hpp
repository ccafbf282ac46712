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

#ifndef CRAFTDDP_COMMANDS_HPP
#define CRAFTDDP_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "craftddp/metrics.hpp"

namespace craftddp {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigOrIo = 1,
  kExitNumerical = 2,
  kExitTrajectoryError = 3,
};

std::string format_report(const MetricsReport& report);
std::string format_comparison(const ComparisonReport& report);

// Subcommand bodies. Each writes into the config's output directory,
// prints a human-readable summary to `out`, diagnostics to `err`, and
// returns an ExitCode.
int run_ddp(const std::string& config_path, std::ostream& out, std::ostream& err);
int run_learn(const std::string& config_path, std::ostream& out, std::ostream& err);
int run_rollout(const std::string& config_path, const std::string& tape_path,
                const std::string& system, const std::optional<std::string>& output,
                std::ostream& out, std::ostream& err);
int run_metrics(const std::string& config_path, const std::string& trajectory_path,
                std::ostream& out, std::ostream& err);
int run_compare(const std::string& config_path, const std::string& a_path,
                const std::string& b_path, std::ostream& out, std::ostream& err);
int run_baseline(const std::string& config_path, std::ostream& out,
                 std::ostream& err);

}  // namespace craftddp

#endif  // CRAFTDDP_COMMANDS_HPP
