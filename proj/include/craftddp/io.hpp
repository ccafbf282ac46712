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

#ifndef CRAFTDDP_IO_HPP
#define CRAFTDDP_IO_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "craftddp/dynamics.hpp"
#include "craftddp/learner.hpp"

namespace craftddp {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTrajectoryHeader =
    "t,x,y,theta,vx,vy,omega,thrust,torque";
inline constexpr const char* kTapeHeader = "k,thrust,torque";
inline constexpr const char* kLearnLogHeader =
    "iteration,real_cost,bias_norm,chosen_alpha,trials";

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_number(double v);

// Text forms. Readers throw IoError on malformed input.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);
std::string tape_to_csv(const ControlTape& tape);
ControlTape tape_from_csv(const std::string& text);
std::string learn_log_to_csv(const LearnLog& log);

struct LearnLogRow {
  int iteration = 0;
  double real_cost = 0.0;
  double bias_norm = 0.0;
  std::optional<double> chosen_alpha;
  int trials = 0;
};

std::vector<LearnLogRow> learn_log_from_csv(const std::string& text);

/// Two-column key,value table.
std::string key_values_to_csv(
    const std::vector<std::pair<std::string, std::string>>& rows);
std::map<std::string, std::string> key_values_from_csv(const std::string& text);

// File forms.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

void write_trajectory(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(const std::string& path);
/// Throws IoError for an empty tape.
void export_controls(const std::string& path, const ControlTape& tape);
ControlTape read_controls(const std::string& path);

}  // namespace craftddp

#endif  // CRAFTDDP_IO_HPP
