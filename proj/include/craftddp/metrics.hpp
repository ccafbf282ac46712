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

#ifndef CRAFTDDP_METRICS_HPP
#define CRAFTDDP_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "craftddp/dynamics.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

inline constexpr double kDefaultStopVelocity = 1e-3;  // m/s
inline constexpr double kTieResolution = 1e-9;

struct StopErrorResult {
  bool flagged = false;
  std::optional<int> index;
};

struct CollisionResult {
  bool flagged = false;
  std::optional<int> index;
  double min_clearance = 0.0;
};

struct SeriesStats {
  std::vector<double> series;
  double mean = 0.0;
  double max = 0.0;
};

struct WorkResult {
  std::vector<double> thrust_series;  // J, one per control step
  double thrust_total = 0.0;
  std::vector<double> torque_series;
  double torque_total = 0.0;
};

struct RotationStats {
  std::vector<double> theta_series;
  std::vector<double> omega_series;
  double theta_total_variation = 0.0;
  double omega_total_variation = 0.0;
};

struct MetricsReport {
  StopErrorResult stop;
  CollisionResult collision;
  SeriesStats deviation;  // one per state
  SeriesStats jerk;       // one per interior state (1 .. H-1)
  WorkResult work;
  double duration = 0.0;
  double path_length = 0.0;
  RotationStats rotation;

  bool has_error() const { return stop.flagged || collision.flagged; }
  double total_work() const { return work.thrust_total + work.torque_total; }
};

/// Speed below v_eps at any interior state (endpoints exempt).
StopErrorResult stop_error(const Trajectory& traj,
                           double v_eps = kDefaultStopVelocity);

/// Clearance to the deck at or below the craft radius at any state.
CollisionResult collision_error(const Trajectory& traj,
                                const DeckGeometry& deck);

/// Distance from each position to the nearest point of the reference
/// polyline (geometric, not time-indexed).
SeriesStats deviation(const Trajectory& traj, const ReferenceTrajectory& ref);

/// |v_{k+1} - 2 v_k + v_{k-1}| / dt^2 for k = 1 .. H-1. Requires H >= 3.
SeriesStats jerk_metric(const Trajectory& traj);

/// Per step |F (v . b)| dt with b = (-sin(theta), cos(theta)) and
/// |tau omega| dt, evaluated at the state where the step starts.
WorkResult mechanical_work(const Trajectory& traj);

struct DurationLength {
  double duration = 0.0;
  double length = 0.0;
};

DurationLength duration_length(const Trajectory& traj);

RotationStats rotation_stats(const Trajectory& traj);

MetricsReport compute_report(const Trajectory& traj,
                             const ReferenceTrajectory& ref,
                             const DeckGeometry& deck,
                             double v_eps = kDefaultStopVelocity);

enum class Winner { kA, kB, kTie };

const char* to_string(Winner w);

struct CriterionComparison {
  std::string name;
  double value_a = 0.0;
  double value_b = 0.0;
  Winner winner = Winner::kTie;
};

struct ComparisonReport {
  MetricsReport a;
  MetricsReport b;
  std::vector<CriterionComparison> criteria;

  const CriterionComparison& criterion(const std::string& name) const;
};

/// Lower is better for every criterion; errors counts stop + collision flags.
std::vector<CriterionComparison> compare_reports(const MetricsReport& a,
                                                 const MetricsReport& b);

ComparisonReport compare(const Trajectory& traj_a, const Trajectory& traj_b,
                         const ReferenceTrajectory& ref,
                         const DeckGeometry& deck,
                         double v_eps = kDefaultStopVelocity);

}  // namespace craftddp

#endif  // CRAFTDDP_METRICS_HPP
