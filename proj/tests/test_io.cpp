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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "craftddp/io.hpp"

using namespace craftddp;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "craftddp_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Trajectory random_trajectory(std::uint64_t seed, int h, double dt) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 10.0);
  Trajectory t;
  t.dt = dt;
  for (int k = 0; k <= h; ++k) {
    State s(6);
    for (int i = 0; i < 6; ++i) s(i) = n(rng) * std::pow(10.0, (k % 7) - 3);
    t.states.push_back(s);
  }
  for (int k = 0; k < h; ++k) t.controls.push_back(Control{{n(rng), n(rng) * 1e-5}});
  return t;
}

void expect_identical(const Trajectory& a, const Trajectory& b) {
  ASSERT_EQ(a.dt, b.dt);
  ASSERT_EQ(a.states.size(), b.states.size());
  ASSERT_EQ(a.controls.size(), b.controls.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) ASSERT_EQ(a.states[k], b.states[k]);
  for (std::size_t k = 0; k < a.controls.size(); ++k) ASSERT_EQ(a.controls[k], b.controls[k]);
}

}  // namespace

TEST(FormatNumber, RoundTripsExactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 41) - 20);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
  EXPECT_EQ(format_number(0.0), "0");
}

TEST(TrajectoryCsv, HeaderAndShape) {
  const Trajectory t = random_trajectory(3, 4, 0.05);
  const std::string csv = trajectory_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTrajectoryHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  // Final row leaves the control fields empty.
  const std::string body = csv.substr(0, csv.size() - 1);
  const std::string last = body.substr(body.rfind('\n') + 1);
  EXPECT_EQ(last.substr(last.size() - 2), ",,");
}

TEST(TrajectoryCsv, RandomRoundTripBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trajectory t = random_trajectory(seed, 1 + static_cast<int>(seed) * 7, 0.05);
    expect_identical(trajectory_from_csv(trajectory_to_csv(t)), t);
  }
}

TEST(TrajectoryCsv, HandWrittenFixture) {
  const Trajectory t = trajectory_from_csv(
      "t,x,y,theta,vx,vy,omega,thrust,torque\n"
      "0,1,2,0.5,0,0,0,9.8,0\n"
      "0.25,1.5,2,0.5,2,0,0.125,10,-1\n"
      "0.5,2,2.5,0.5,2,2,0.25,,\n");
  EXPECT_EQ(t.dt, 0.25);
  ASSERT_EQ(t.horizon(), 2);
  State s1(6);
  s1 << 1.5, 2, 0.5, 2, 0, 0.125;
  EXPECT_EQ(t.states[1], s1);
  EXPECT_EQ(t.states[2](1), 2.5);
  EXPECT_EQ(t.controls[0], (Control{{9.8, 0.0}}));
  EXPECT_EQ(t.controls[1], (Control{{10.0, -1.0}}));
}

TEST(TrajectoryCsv, MalformedInputRejected) {
  const std::string h = std::string(kTrajectoryHeader) + "\n";
  EXPECT_THROW(trajectory_from_csv(h + "0,0,0,0,0,0,0,,\n"), IoError);  // H = 0
  EXPECT_THROW(trajectory_from_csv("t,x,y\n0,0,0\n0.1,0,0\n"), IoError);
  EXPECT_THROW(trajectory_from_csv(h + "0,0,0,0,0,0,0,1,0\n0.1,0,0,0,0,0\n"), IoError);
  EXPECT_THROW(trajectory_from_csv(h + "0,0,0,0,0,0,0,1,zero\n0.1,0,0,0,0,0,0,,\n"), IoError);
  EXPECT_THROW(trajectory_from_csv(h + "0,0,0,0,0,0,0,1,0\n0.1,0,0,0,0,0,0,1,0\n"), IoError);
  EXPECT_THROW(trajectory_from_csv(h + "0,0,0,0,0,0,0,1,0\n0.1,0,0,0,0,0,0,1,0\n0.3,0,0,0,0,0,0,,\n"),
               IoError);
  EXPECT_THROW(trajectory_from_csv(""), IoError);
}

TEST(TrajectoryFile, WriteReadRoundTrip) {
  const auto path = temp_file("traj.csv");
  const Trajectory t = random_trajectory(77, 50, 0.05);
  write_trajectory(path.string(), t);
  expect_identical(read_trajectory(path.string()), t);
  EXPECT_THROW(read_trajectory((path.parent_path() / "absent.csv").string()), IoError);
}

TEST(ControlTape, ExportShapeAndRoundTrip) {
  const auto path = temp_file("tape.csv");
  const ControlTape tape = {Control{{1.0, 0.1}}, Control{{2.0, -0.2}}, Control{{1.0 / 3.0, 1e-300}}};
  export_controls(path.string(), tape);
  const std::string text = read_file(path.string());
  EXPECT_EQ(text.substr(0, text.find('\n')), kTapeHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  const ControlTape back = read_controls(path.string());
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(back[k], tape[k]);
}

TEST(ControlTape, ExportedTapeReplaysIdentically) {
  const auto path = temp_file("replay.csv");
  const CraftModel model(CraftParams{}, 0.05);
  ControlTape tape;
  for (int k = 0; k < 40; ++k) tape.push_back(Control{{9.8 + std::sin(0.3 * k), 0.05 * std::cos(0.2 * k)}});
  State s0 = State::Zero(6);
  s0(1) = 3.0;
  export_controls(path.string(), tape);
  const Trajectory direct = rollout(model, tape, s0);
  const Trajectory replay = rollout(model, read_controls(path.string()), s0);
  expect_identical(replay, direct);
}

TEST(ControlTape, EmptyAndMalformedRejected) {
  EXPECT_THROW(export_controls(temp_file("empty.csv").string(), {}), IoError);
  EXPECT_THROW(tape_from_csv("k,thrust,torque\n"), IoError);
  EXPECT_THROW(tape_from_csv("k,thrust,torque\n1,0,0\n"), IoError);
  EXPECT_THROW(tape_from_csv("k,thrust,torque\n0,0\n"), IoError);
  EXPECT_THROW(tape_from_csv("k,force,torque\n0,0,0\n"), IoError);
}

TEST(LearnLogCsv, RoundTrip) {
  LearnLog log;
  for (int i = 0; i < 3; ++i) {
    IterationRecord r;
    r.iteration = i;
    r.real_cost = 100.0 / (i + 1.0) + 1.0 / 3.0;
    r.bias_norm = 0.1 * i;
    if (i != 1) r.chosen_alpha = 1.0 / (1 << i);
    r.real_trials_used = 1 + i;
    log.records.push_back(r);
  }
  const std::string csv = learn_log_to_csv(log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kLearnLogHeader);
  const auto rows = learn_log_from_csv(csv);
  ASSERT_EQ(rows.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].iteration, i);
    EXPECT_EQ(rows[i].real_cost, log.records[i].real_cost);
    EXPECT_EQ(rows[i].bias_norm, log.records[i].bias_norm);
    EXPECT_EQ(rows[i].chosen_alpha, log.records[i].chosen_alpha);
    EXPECT_EQ(rows[i].trials, i + 1);
  }
}

TEST(KeyValuesCsv, RoundTrip) {
  const std::vector<std::pair<std::string, std::string>> kv = {{"a", "1"}, {"b", "2.5"}};
  const auto m = key_values_from_csv(key_values_to_csv(kv));
  EXPECT_EQ(m.at("a"), "1");
  EXPECT_EQ(m.at("b"), "2.5");
  EXPECT_THROW(key_values_from_csv("key,value\na,1,2\n"), IoError);
}
