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

#ifndef CRAFTDDP_DYNAMICS_HPP
#define CRAFTDDP_DYNAMICS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace craftddp {

// Craft state layout: x, y, theta (unwrapped), vx, vy, omega.
namespace state_index {
inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kTheta = 2;
inline constexpr int kVx = 3;
inline constexpr int kVy = 4;
inline constexpr int kOmega = 5;
}  // namespace state_index

// Craft control layout: thrust along the body "up" axis, torque.
namespace control_index {
inline constexpr int kThrust = 0;
inline constexpr int kTorque = 1;
}  // namespace control_index

inline constexpr int kCraftStateDim = 6;
inline constexpr int kCraftControlDim = 2;

using State = Eigen::VectorXd;
using Control = Eigen::VectorXd;

/// Raised when an integration step or derivative evaluation produces a
/// non-finite value. Carries the offending step index.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct CraftParams {
  double mass = 1.0;         // kg
  double inertia = 0.1;      // kg m^2
  double gravity = 9.8;      // m/s^2
  double linear_drag = 0.0;  // N s/m
  double thrust_max = 30.0;  // N
  double torque_max = 5.0;   // N m

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<State> states;      // H + 1
  std::vector<Control> controls;  // H

  int horizon() const { return static_cast<int>(controls.size()); }
  /// Throws std::invalid_argument if dt, lengths or entries are inconsistent.
  void validate() const;
};

/// Per-step sensitivities of the discrete map x_{k+1} = f_k(x_k, u_k).
struct JacobianPair {
  Eigen::MatrixXd f_x;  // n x n
  Eigen::MatrixXd f_u;  // n x m
};

/// Second derivatives of the discrete map, one slice per output component i:
/// f_xx[i] = d^2 f_i / dx dx, f_xu[i] = d^2 f_i / dx du, f_uu[i] = d^2 f_i / du du.
struct HessianTensors {
  std::vector<Eigen::MatrixXd> f_xx;
  std::vector<Eigen::MatrixXd> f_xu;
  std::vector<Eigen::MatrixXd> f_uu;
};

/// (v * T)_{jk} = sum_i v_i T_{ijk}.
Eigen::MatrixXd contract(const Eigen::VectorXd& v,
                         const std::vector<Eigen::MatrixXd>& tensor);

/// Time-indexed additive state correction, one entry per step.
struct TimeBias {
  std::vector<Eigen::VectorXd> biases;

  int horizon() const { return static_cast<int>(biases.size()); }
};

/// Steppable discrete-time dynamics. Implementations must be deterministic
/// and immutable after construction.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual double dt() const = 0;
  virtual State step(const State& x, const Control& u, int k) const = 0;

  /// Defaults to central finite differences of step().
  virtual JacobianPair jacobians(const State& x, const Control& u, int k) const;

  /// Non-null for craft-based models.
  virtual const CraftParams* craft_params() const { return nullptr; }
};

using ModelPtr = std::shared_ptr<const DynamicsModel>;

/// Continuous-time craft dynamics; thrust acts along (-sin(theta), cos(theta)).
Eigen::VectorXd craft_derivative(const State& x, const Control& u,
                                 const CraftParams& params);

/// Analytic partials of craft_derivative with respect to state and control.
JacobianPair craft_derivative_jacobians(const State& x, const Control& u,
                                        const CraftParams& params);

/// The 2D thrust craft integrated with one fixed RK4 step per control step.
class CraftModel final : public DynamicsModel {
 public:
  CraftModel(const CraftParams& params, double dt);

  int state_dim() const override { return kCraftStateDim; }
  int control_dim() const override { return kCraftControlDim; }
  double dt() const override { return dt_; }
  State step(const State& x, const Control& u, int k) const override;
  /// Exact derivative of the RK4 map (stage-wise chain rule).
  JacobianPair jacobians(const State& x, const Control& u,
                         int k) const override;
  const CraftParams* craft_params() const override { return &params_; }

 private:
  CraftParams params_;
  double dt_;
};

/// x_{k+1} = A x_k + B u_k.
class LinearModel final : public DynamicsModel {
 public:
  LinearModel(Eigen::MatrixXd a, Eigen::MatrixXd b, double dt);

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int control_dim() const override { return static_cast<int>(b_.cols()); }
  double dt() const override { return dt_; }
  State step(const State& x, const Control& u, int k) const override;
  JacobianPair jacobians(const State& x, const Control& u,
                         int k) const override;

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  double dt_;
};

/// A base model plus a time-indexed additive bias. Steps at or beyond the
/// bias horizon are unbiased. Derivatives are those of the base model.
class BiasedModel final : public DynamicsModel {
 public:
  BiasedModel(ModelPtr base, TimeBias bias);

  int state_dim() const override { return base_->state_dim(); }
  int control_dim() const override { return base_->control_dim(); }
  double dt() const override { return base_->dt(); }
  State step(const State& x, const Control& u, int k) const override;
  JacobianPair jacobians(const State& x, const Control& u,
                         int k) const override;
  const CraftParams* craft_params() const override {
    return base_->craft_params();
  }

  const DynamicsModel& base() const { return *base_; }
  const TimeBias& bias() const { return bias_; }

 private:
  ModelPtr base_;
  TimeBias bias_;
};

/// model.step() with a finiteness check; throws NumericalError on failure.
State integrate_step(const DynamicsModel& model, const State& x,
                     const Control& u, int k);

Trajectory rollout(const DynamicsModel& model,
                   const std::vector<Control>& controls, const State& s0);

/// model.jacobians() with a finiteness check.
JacobianPair jacobians(const DynamicsModel& model, const State& x,
                       const Control& u, int k);

/// Central differences of model.step(), h_i = 1e-6 max(1, |z_i|).
JacobianPair fd_jacobians(const DynamicsModel& model, const State& x,
                          const Control& u, int k);

/// Central differences of model.jacobians(), h_i = 1e-4 max(1, |z_i|),
/// symmetrized per output slice.
HessianTensors hessian_tensors(const DynamicsModel& model, const State& x,
                               const Control& u, int k);

/// biases[t] = real.states[t+1] - step(real.states[t], real.controls[t], t).
TimeBias compute_bias(const DynamicsModel& model, const Trajectory& real);

ModelPtr apply_bias(ModelPtr model, TimeBias bias);

}  // namespace craftddp

#endif  // CRAFTDDP_DYNAMICS_HPP
