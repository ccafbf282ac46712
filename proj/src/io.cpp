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

#include "craftddp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace craftddp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_number(const std::string& s, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw IoError("row " + std::to_string(row) + ": non-numeric field '" + s + "'");
  }
  return v;
}

void expect_header(const std::vector<std::string>& lines, const char* header) {
  if (lines.empty() || lines.front() != header) {
    throw IoError(std::string("header mismatch: expected '") + header + "'");
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  traj.validate();
  if (traj.states.front().size() != kCraftStateDim) {
    throw IoError("trajectory CSV holds craft states only");
  }
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out += format_number(static_cast<double>(k) * traj.dt);
    for (Eigen::Index i = 0; i < kCraftStateDim; ++i) {
      out += "," + format_number(traj.states[k](i));
    }
    if (k < traj.controls.size()) {
      out += "," + format_number(traj.controls[k](control_index::kThrust)) + "," +
             format_number(traj.controls[k](control_index::kTorque));
    } else {
      out += ",,";
    }
    out += "\n";
  }
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  expect_header(lines, kTrajectoryHeader);
  const std::size_t rows = lines.size() - 1;
  if (rows < 2) throw IoError("trajectory needs at least 2 rows (H >= 1)");
  Trajectory traj;
  std::vector<double> times;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = split_fields(lines[r]);
    if (f.size() != 9) {
      throw IoError("row " + std::to_string(r) + ": expected 9 fields, got " +
                    std::to_string(f.size()));
    }
    times.push_back(parse_number(f[0], r));
    State s(kCraftStateDim);
    for (int i = 0; i < kCraftStateDim; ++i) s(i) = parse_number(f[i + 1], r);
    traj.states.push_back(std::move(s));
    const bool last = r + 1 == lines.size();
    if (last) {
      if (!f[7].empty() || !f[8].empty()) {
        throw IoError("final row must leave thrust/torque empty");
      }
    } else {
      Control u(kCraftControlDim);
      u << parse_number(f[7], r), parse_number(f[8], r);
      traj.controls.push_back(std::move(u));
    }
  }
  traj.dt = times[1] - times[0];
  if (!(traj.dt > 0.0)) throw IoError("time column must increase");
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = times[0] + static_cast<double>(k) * traj.dt;
    if (std::abs(times[k] - expected) > 1e-9 * (1.0 + std::abs(expected))) {
      throw IoError("row " + std::to_string(k + 1) + ": non-uniform time step");
    }
  }
  return traj;
}

std::string tape_to_csv(const ControlTape& tape) {
  if (tape.empty()) throw IoError("cannot export an empty control tape");
  std::string out = std::string(kTapeHeader) + "\n";
  for (std::size_t k = 0; k < tape.size(); ++k) {
    out += std::to_string(k) + "," +
           format_number(tape[k](control_index::kThrust)) + "," +
           format_number(tape[k](control_index::kTorque)) + "\n";
  }
  return out;
}

ControlTape tape_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  expect_header(lines, kTapeHeader);
  ControlTape tape;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = split_fields(lines[r]);
    if (f.size() != 3) throw IoError("row " + std::to_string(r) + ": expected 3 fields");
    if (parse_number(f[0], r) != static_cast<double>(r - 1)) {
      throw IoError("row " + std::to_string(r) + ": step index out of sequence");
    }
    Control u(kCraftControlDim);
    u << parse_number(f[1], r), parse_number(f[2], r);
    tape.push_back(std::move(u));
  }
  if (tape.empty()) throw IoError("control tape has no rows");
  return tape;
}

std::string learn_log_to_csv(const LearnLog& log) {
  std::string out = std::string(kLearnLogHeader) + "\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.iteration) + "," + format_number(r.real_cost) + "," +
           format_number(r.bias_norm) + "," +
           (r.chosen_alpha ? format_number(*r.chosen_alpha) : std::string()) +
           "," + std::to_string(r.real_trials_used) + "\n";
  }
  return out;
}

std::vector<LearnLogRow> learn_log_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  expect_header(lines, kLearnLogHeader);
  std::vector<LearnLogRow> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = split_fields(lines[r]);
    if (f.size() != 5) throw IoError("row " + std::to_string(r) + ": expected 5 fields");
    LearnLogRow row;
    row.iteration = static_cast<int>(parse_number(f[0], r));
    row.real_cost = parse_number(f[1], r);
    row.bias_norm = parse_number(f[2], r);
    if (!f[3].empty()) row.chosen_alpha = parse_number(f[3], r);
    row.trials = static_cast<int>(parse_number(f[4], r));
    rows.push_back(row);
  }
  return rows;
}

std::string key_values_to_csv(
    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

std::map<std::string, std::string> key_values_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  expect_header(lines, "key,value");
  std::map<std::string, std::string> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = split_fields(lines[r]);
    if (f.size() != 2) throw IoError("row " + std::to_string(r) + ": expected 2 fields");
    out[f[0]] = f[1];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  write_file(path, trajectory_to_csv(traj));
}

Trajectory read_trajectory(const std::string& path) {
  try {
    return trajectory_from_csv(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void export_controls(const std::string& path, const ControlTape& tape) {
  write_file(path, tape_to_csv(tape));
}

ControlTape read_controls(const std::string& path) {
  try {
    return tape_from_csv(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace craftddp
