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

#ifndef CRAFTDDP_TASK_HPP
#define CRAFTDDP_TASK_HPP

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "craftddp/dynamics.hpp"

namespace craftddp {

using Point2 = Eigen::Vector2d;
using Polyline = std::vector<Point2>;

struct ReferenceTrajectory {
  double dt = 0.0;
  std::vector<State> targets;  // H + 1

  int horizon() const { return static_cast<int>(targets.size()) - 1; }
  void validate() const;
};

struct DeckGeometry {
  std::vector<Polyline> polylines;
  double craft_radius = 0.5;

  void validate() const;
};

/// Quadratic tracking + control effort + smooth soft control-limit penalty:
///
///   l_k(x, u) = (x - r_k)' Q (x - r_k) + u' R u + w * sum_i p_i(u_i)
///   h(x)      = (x - r_H)' Q_f (x - r_H)
///
/// where p_i is the squared softplus of the excess beyond [lower_i, upper_i].
struct CostModel {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  Eigen::MatrixXd q_final;
  ReferenceTrajectory reference;
  double control_limit_weight = 0.0;
  Eigen::VectorXd control_lower;  // may hold -inf
  Eigen::VectorXd control_upper;  // may hold +inf

  int horizon() const { return reference.horizon(); }
  int state_dim() const { return static_cast<int>(q.rows()); }
  int control_dim() const { return static_cast<int>(r.rows()); }
  void validate() const;
};

struct CostExpansion {
  double l = 0.0;
  Eigen::VectorXd l_x;
  Eigen::VectorXd l_u;
  Eigen::MatrixXd l_xx;
  Eigen::MatrixXd l_xu;
  Eigen::MatrixXd l_uu;
};

struct CostWeights {
  double position = 1.0;
  double velocity = 0.1;
  double theta = 0.0;
  double omega = 0.1;
  double thrust = 1e-3;
  double torque = 1e-3;
  double terminal_scale = 10.0;
  double terminal_velocity = -1.0;  // < 0: terminal_scale * velocity
  double control_limit = 1.0;
};

/// Width of the softplus transition in the control-limit penalty.
inline constexpr double kLimitSoftness = 0.25;

/// Squared softplus of the excess of u beyond [lower, upper].
double limit_penalty(double u, double lower, double upper);

/// Craft cost from named weights; limits are thrust in [0, thrust_max] and
/// torque in [-torque_max, torque_max].
CostModel make_craft_cost(const ReferenceTrajectory& reference,
                          const CostWeights& weights,
                          const CraftParams& params);

/// Arc-length resampling of a waypoint polyline into H + 1 craft targets.
/// Without a speed the path is traversed at constant speed in H*dt.
ReferenceTrajectory build_reference(const std::vector<Point2>& waypoints,
                                    int horizon, double dt,
                                    std::optional<double> speed = {});

double running_cost(const CostModel& cost, const State& x, const Control& u,
                    int k);
double terminal_cost(const CostModel& cost, const State& x);
/// Throws std::invalid_argument on horizon mismatch.
double total_cost(const CostModel& cost, const Trajectory& traj);

CostExpansion quadratize(const CostModel& cost, const State& x,
                         const Control& u, int k);
/// l_u, l_xu and l_uu are empty.
CostExpansion quadratize_terminal(const CostModel& cost, const State& x);

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b);
Point2 nearest_point_on_segment(const Point2& p, const Point2& a,
                                const Point2& b);
double min_distance_to_deck(const Point2& p, const DeckGeometry& deck);

}  // namespace craftddp

#endif  // CRAFTDDP_TASK_HPP
