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

#include "craftddp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace craftddp {

namespace {

using namespace state_index;

Point2 position(const State& s) { return {s(kX), s(kY)}; }

SeriesStats stats_of(std::vector<double> series) {
  SeriesStats st;
  st.series = std::move(series);
  if (!st.series.empty()) {
    st.mean = std::accumulate(st.series.begin(), st.series.end(), 0.0) /
              static_cast<double>(st.series.size());
    st.max = *std::max_element(st.series.begin(), st.series.end());
  }
  return st;
}

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

Winner lower_wins(double a, double b) {
  if (std::abs(a - b) <= kTieResolution) return Winner::kTie;
  return a < b ? Winner::kA : Winner::kB;
}

}  // namespace

StopErrorResult stop_error(const Trajectory& traj, double v_eps) {
  if (traj.states.size() < 3) {
    throw std::invalid_argument("stop_error: need at least 3 states");
  }
  StopErrorResult r;
  for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
    const State& s = traj.states[k];
    if (std::hypot(s(kVx), s(kVy)) < v_eps) {
      r.flagged = true;
      r.index = static_cast<int>(k);
      break;
    }
  }
  return r;
}

CollisionResult collision_error(const Trajectory& traj,
                                const DeckGeometry& deck) {
  deck.validate();
  CollisionResult r;
  r.min_clearance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double d = min_distance_to_deck(position(traj.states[k]), deck);
    r.min_clearance = std::min(r.min_clearance, d);
    if (!r.flagged && d <= deck.craft_radius) {
      r.flagged = true;
      r.index = static_cast<int>(k);
    }
  }
  return r;
}

SeriesStats deviation(const Trajectory& traj, const ReferenceTrajectory& ref) {
  ref.validate();
  std::vector<double> series;
  series.reserve(traj.states.size());
  for (const State& s : traj.states) {
    const Point2 p = position(s);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ref.targets.size(); ++i) {
      best = std::min(best, distance_to_segment(p, position(ref.targets[i - 1]),
                                                position(ref.targets[i])));
    }
    series.push_back(best);
  }
  return stats_of(std::move(series));
}

SeriesStats jerk_metric(const Trajectory& traj) {
  if (traj.horizon() < 3) {
    throw std::invalid_argument("jerk_metric: horizon too short (need H >= 3)");
  }
  const double dt2 = traj.dt * traj.dt;
  std::vector<double> series;
  for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
    const State& prev = traj.states[k - 1];
    const State& cur = traj.states[k];
    const State& next = traj.states[k + 1];
    const double jx = (next(kVx) - 2.0 * cur(kVx) + prev(kVx)) / dt2;
    const double jy = (next(kVy) - 2.0 * cur(kVy) + prev(kVy)) / dt2;
    series.push_back(std::hypot(jx, jy));
  }
  return stats_of(std::move(series));
}

WorkResult mechanical_work(const Trajectory& traj) {
  WorkResult w;
  for (int k = 0; k < traj.horizon(); ++k) {
    const State& s = traj.states[k];
    const Control& u = traj.controls[k];
    const double along_body =
        -std::sin(s(kTheta)) * s(kVx) + std::cos(s(kTheta)) * s(kVy);
    w.thrust_series.push_back(
        std::abs(u(control_index::kThrust) * along_body) * traj.dt);
    w.torque_series.push_back(
        std::abs(u(control_index::kTorque) * s(kOmega)) * traj.dt);
  }
  w.thrust_total = sum(w.thrust_series);
  w.torque_total = sum(w.torque_series);
  return w;
}

DurationLength duration_length(const Trajectory& traj) {
  DurationLength d;
  d.duration = traj.horizon() * traj.dt;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    d.length += (position(traj.states[k]) - position(traj.states[k - 1])).norm();
  }
  return d;
}

RotationStats rotation_stats(const Trajectory& traj) {
  RotationStats r;
  for (const State& s : traj.states) {
    r.theta_series.push_back(s(kTheta));
    r.omega_series.push_back(s(kOmega));
  }
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    r.theta_total_variation += std::abs(r.theta_series[k] - r.theta_series[k - 1]);
    r.omega_total_variation += std::abs(r.omega_series[k] - r.omega_series[k - 1]);
  }
  return r;
}

MetricsReport compute_report(const Trajectory& traj,
                             const ReferenceTrajectory& ref,
                             const DeckGeometry& deck, double v_eps) {
  traj.validate();
  MetricsReport r;
  r.stop = stop_error(traj, v_eps);
  r.collision = collision_error(traj, deck);
  r.deviation = deviation(traj, ref);
  r.jerk = jerk_metric(traj);
  r.work = mechanical_work(traj);
  const DurationLength dl = duration_length(traj);
  r.duration = dl.duration;
  r.path_length = dl.length;
  r.rotation = rotation_stats(traj);
  return r;
}

const char* to_string(Winner w) {
  switch (w) {
    case Winner::kA: return "a";
    case Winner::kB: return "b";
    case Winner::kTie: return "tie";
  }
  return "unknown";
}

const CriterionComparison& ComparisonReport::criterion(
    const std::string& name) const {
  for (const auto& c : criteria) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no criterion named " + name);
}

std::vector<CriterionComparison> compare_reports(const MetricsReport& a,
                                                 const MetricsReport& b) {
  auto errors = [](const MetricsReport& r) {
    return static_cast<double>(r.stop.flagged) +
           static_cast<double>(r.collision.flagged);
  };
  std::vector<CriterionComparison> out = {
      {"errors", errors(a), errors(b), Winner::kTie},
      {"mean_deviation", a.deviation.mean, b.deviation.mean, Winner::kTie},
      {"mean_jerk", a.jerk.mean, b.jerk.mean, Winner::kTie},
      {"total_work", a.total_work(), b.total_work(), Winner::kTie},
      {"duration", a.duration, b.duration, Winner::kTie},
      {"path_length", a.path_length, b.path_length, Winner::kTie},
      {"theta_total_variation", a.rotation.theta_total_variation,
       b.rotation.theta_total_variation, Winner::kTie},
      {"omega_total_variation", a.rotation.omega_total_variation,
       b.rotation.omega_total_variation, Winner::kTie},
  };
  for (auto& c : out) c.winner = lower_wins(c.value_a, c.value_b);
  return out;
}

ComparisonReport compare(const Trajectory& traj_a, const Trajectory& traj_b,
                         const ReferenceTrajectory& ref,
                         const DeckGeometry& deck, double v_eps) {
  ComparisonReport r;
  r.a = compute_report(traj_a, ref, deck, v_eps);
  r.b = compute_report(traj_b, ref, deck, v_eps);
  r.criteria = compare_reports(r.a, r.b);
  return r;
}

}  // namespace craftddp
