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

#ifndef CRAFTDDP_DDP_HPP
#define CRAFTDDP_DDP_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "craftddp/dynamics.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

/// Quadratic model of l_k + V_{k+1} in (dx, du):
///   Q0 + q_x'dx + q_u'du + 1/2 dx'Q_xx dx + dx'Q_xu du + 1/2 du'Q_uu du.
struct QModel {
  double q0 = 0.0;
  Eigen::VectorXd q_x;
  Eigen::VectorXd q_u;
  Eigen::MatrixXd q_xx;
  Eigen::MatrixXd q_xu;
  Eigen::MatrixXd q_uu;
};

/// V + V_x'dx + 1/2 dx'V_xx dx.
struct ValueModel {
  double v = 0.0;
  Eigen::VectorXd v_x;
  Eigen::MatrixXd v_xx;
};

/// du_k = alpha_k + beta_k dx_k.
struct GainSchedule {
  std::vector<Eigen::VectorXd> alphas;
  std::vector<Eigen::MatrixXd> betas;
  double expected_improvement = 0.0;

  int horizon() const { return static_cast<int>(alphas.size()); }
};

struct AffinePolicy {
  std::vector<State> nominal_states;
  std::vector<Control> nominal_controls;
  GainSchedule gains;
  double dt = 0.0;

  int horizon() const { return static_cast<int>(nominal_controls.size()); }
  /// u_k = u_bar_k + alpha_k + beta_k (x - x_bar_k).
  Control control(int k, const State& x) const;
};

struct DdpOptions {
  int max_iterations = 200;
  double cost_tolerance = 1e-6;  // relative
  double lambda_init = 1e-6;
  double lambda_factor = 10.0;
  double lambda_max = 1e10;
  std::vector<double> step_ladder = default_step_ladder();
  bool second_order = false;

  /// {1, 1/2, ..., 2^-10}.
  static std::vector<double> default_step_ladder();
  void validate() const;
};

/// Q_uu + lambda I failed its Cholesky factorization at `step()`.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  explicit NotPositiveDefiniteError(int step)
      : std::runtime_error("Q_uu not positive definite at step " +
                           std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BackwardResult {
  GainSchedule gains;
  std::vector<ValueModel> values;  // H + 1, values[H] from the terminal cost
  std::vector<QModel> q_models;    // H, with the regularized Q_uu
};

// Building blocks shared with the stochastic sweep.

/// Quadratic model of V_{k+1}(x_bar' + A dx + B du) in (dx, du).
QModel value_substitution(const ValueModel& next, const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& b);
/// Adds the cost expansion to a value-substitution model.
QModel add_cost(const QModel& value_part, const CostExpansion& cost);
/// Factorizes Q_uu (already regularized) and fills alpha/beta. Throws
/// NotPositiveDefiniteError.
void solve_gains(const QModel& q, int step, Eigen::VectorXd& alpha,
                 Eigen::MatrixXd& beta);
ValueModel value_update(const QModel& q, const Eigen::VectorXd& alpha,
                        const Eigen::MatrixXd& beta);

BackwardResult backward_pass(const DynamicsModel& model, const CostModel& cost,
                             const Trajectory& nominal, double lambda,
                             bool second_order);

struct ForwardResult {
  Trajectory trajectory;
  double cost = 0.0;
};

/// Rolls out u_k = u_bar_k + gamma alpha_k + beta_k (x_k - x_bar_k).
ForwardResult forward_pass(const DynamicsModel& model, const CostModel& cost,
                           const Trajectory& nominal, const GainSchedule& gains,
                           double gamma);

enum class DdpTermination { kConverged, kLambdaMax, kMaxIterations };

const char* to_string(DdpTermination t);

struct DdpResult {
  AffinePolicy policy;
  Trajectory trajectory;             // rollout of policy.nominal_controls
  std::vector<double> cost_history;  // initial cost, then each accepted cost
  int iterations = 0;
  double lambda = 0.0;
  DdpTermination termination = DdpTermination::kMaxIterations;

  double final_cost() const { return cost_history.back(); }
};

DdpResult ddp_optimize(const DynamicsModel& model, const CostModel& cost,
                       const std::vector<Control>& initial_controls,
                       const State& s0, const DdpOptions& opts = {});

/// Discrete Riccati recursion for x' = A x + B u with cost
/// sum x'Qx + u'Ru + x_H'Q_f x_H. u_k = -K_k x_k, cost-to-go x'P_k x.
struct LqrSolution {
  std::vector<Eigen::MatrixXd> gains;           // K_0 .. K_{H-1}
  std::vector<Eigen::MatrixXd> value_matrices;  // P_0 .. P_H
};

LqrSolution lqr_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& q_final, int horizon);

}  // namespace craftddp

#endif  // CRAFTDDP_DDP_HPP
