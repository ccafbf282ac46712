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

#include "craftddp/dynamics.hpp"

#include <cmath>
#include <utility>

#include "craftddp/numdiff.hpp"

namespace craftddp {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

void require(bool ok, const char* invariant) {
  if (!ok) throw std::invalid_argument(std::string("violated: ") + invariant);
}

Eigen::VectorXd concat(const State& x, const Control& u) {
  Eigen::VectorXd z(x.size() + u.size());
  z << x, u;
  return z;
}

}  // namespace

void CraftParams::validate() const {
  require(mass > 0.0, "mass > 0");
  require(inertia > 0.0, "inertia > 0");
  require(gravity >= 0.0, "gravity >= 0");
  require(linear_drag >= 0.0, "linear_drag >= 0");
  require(thrust_max > 0.0, "thrust_max > 0");
  require(torque_max > 0.0, "torque_max > 0");
}

void Trajectory::validate() const {
  require(dt > 0.0 && std::isfinite(dt), "dt > 0");
  require(states.size() == controls.size() + 1, "|states| = |controls| + 1");
  for (const auto& s : states) require(s.allFinite(), "finite states");
  for (const auto& u : controls) require(u.allFinite(), "finite controls");
}

Eigen::MatrixXd contract(const Eigen::VectorXd& v,
                         const std::vector<Eigen::MatrixXd>& tensor) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(tensor.front().rows(), tensor.front().cols());
  for (std::size_t i = 0; i < tensor.size(); ++i) {
    out += v(static_cast<Eigen::Index>(i)) * tensor[i];
  }
  return out;
}

JacobianPair DynamicsModel::jacobians(const State& x, const Control& u,
                                      int k) const {
  return fd_jacobians(*this, x, u, k);
}

// ---------------------------------------------------------------------------
// Craft

Eigen::VectorXd craft_derivative(const State& x, const Control& u,
                                 const CraftParams& p) {
  using namespace state_index;
  const double thrust = u(control_index::kThrust);
  const double torque = u(control_index::kTorque);
  const double s = std::sin(x(kTheta));
  const double c = std::cos(x(kTheta));
  Eigen::VectorXd dx(kCraftStateDim);
  dx(kX) = x(kVx);
  dx(kY) = x(kVy);
  dx(kTheta) = x(kOmega);
  dx(kVx) = -(thrust / p.mass) * s - (p.linear_drag / p.mass) * x(kVx);
  dx(kVy) = (thrust / p.mass) * c - p.gravity - (p.linear_drag / p.mass) * x(kVy);
  dx(kOmega) = torque / p.inertia;
  return dx;
}

JacobianPair craft_derivative_jacobians(const State& x, const Control& u,
                                        const CraftParams& p) {
  using namespace state_index;
  const double thrust = u(control_index::kThrust);
  const double s = std::sin(x(kTheta));
  const double c = std::cos(x(kTheta));
  JacobianPair d{Eigen::MatrixXd::Zero(kCraftStateDim, kCraftStateDim),
                 Eigen::MatrixXd::Zero(kCraftStateDim, kCraftControlDim)};
  d.f_x(kX, kVx) = 1.0;
  d.f_x(kY, kVy) = 1.0;
  d.f_x(kTheta, kOmega) = 1.0;
  d.f_x(kVx, kTheta) = -(thrust / p.mass) * c;
  d.f_x(kVx, kVx) = -p.linear_drag / p.mass;
  d.f_x(kVy, kTheta) = -(thrust / p.mass) * s;
  d.f_x(kVy, kVy) = -p.linear_drag / p.mass;
  d.f_u(kVx, control_index::kThrust) = -s / p.mass;
  d.f_u(kVy, control_index::kThrust) = c / p.mass;
  d.f_u(kOmega, control_index::kTorque) = 1.0 / p.inertia;
  return d;
}

CraftModel::CraftModel(const CraftParams& params, double dt)
    : params_(params), dt_(dt) {
  params_.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("violated: dt > 0");
}

State CraftModel::step(const State& x, const Control& u, int /*k*/) const {
  const double h = dt_;
  const Eigen::VectorXd k1 = craft_derivative(x, u, params_);
  const Eigen::VectorXd k2 = craft_derivative(x + 0.5 * h * k1, u, params_);
  const Eigen::VectorXd k3 = craft_derivative(x + 0.5 * h * k2, u, params_);
  const Eigen::VectorXd k4 = craft_derivative(x + h * k3, u, params_);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

JacobianPair CraftModel::jacobians(const State& x, const Control& u,
                                   int /*k*/) const {
  const double h = dt_;
  const Eigen::MatrixXd eye =
      Eigen::MatrixXd::Identity(kCraftStateDim, kCraftStateDim);

  // Stage sensitivities dk_i/dx and dk_i/du.
  const Eigen::VectorXd k1 = craft_derivative(x, u, params_);
  const JacobianPair d1 = craft_derivative_jacobians(x, u, params_);
  const Eigen::MatrixXd k1x = d1.f_x;
  const Eigen::MatrixXd k1u = d1.f_u;

  const Eigen::VectorXd x2 = x + 0.5 * h * k1;
  const Eigen::VectorXd k2 = craft_derivative(x2, u, params_);
  const JacobianPair d2 = craft_derivative_jacobians(x2, u, params_);
  const Eigen::MatrixXd k2x = d2.f_x * (eye + 0.5 * h * k1x);
  const Eigen::MatrixXd k2u = d2.f_x * (0.5 * h * k1u) + d2.f_u;

  const Eigen::VectorXd x3 = x + 0.5 * h * k2;
  const JacobianPair d3 = craft_derivative_jacobians(x3, u, params_);
  const Eigen::VectorXd k3 = craft_derivative(x3, u, params_);
  const Eigen::MatrixXd k3x = d3.f_x * (eye + 0.5 * h * k2x);
  const Eigen::MatrixXd k3u = d3.f_x * (0.5 * h * k2u) + d3.f_u;

  const Eigen::VectorXd x4 = x + h * k3;
  const JacobianPair d4 = craft_derivative_jacobians(x4, u, params_);
  const Eigen::MatrixXd k4x = d4.f_x * (eye + h * k3x);
  const Eigen::MatrixXd k4u = d4.f_x * (h * k3u) + d4.f_u;

  return {eye + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
          (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)};
}

// ---------------------------------------------------------------------------
// Linear

LinearModel::LinearModel(Eigen::MatrixXd a, Eigen::MatrixXd b, double dt)
    : a_(std::move(a)), b_(std::move(b)), dt_(dt) {
  if (a_.rows() != a_.cols() || b_.rows() != a_.rows()) {
    throw std::invalid_argument("LinearModel: inconsistent A/B dimensions");
  }
}

State LinearModel::step(const State& x, const Control& u, int /*k*/) const {
  return a_ * x + b_ * u;
}

JacobianPair LinearModel::jacobians(const State&, const Control&, int) const {
  return {a_, b_};
}

// ---------------------------------------------------------------------------
// Bias

BiasedModel::BiasedModel(ModelPtr base, TimeBias bias)
    : base_(std::move(base)), bias_(std::move(bias)) {
  for (const auto& b : bias_.biases) {
    if (b.size() != base_->state_dim() || !b.allFinite()) {
      throw std::invalid_argument("BiasedModel: malformed bias entry");
    }
  }
}

State BiasedModel::step(const State& x, const Control& u, int k) const {
  State next = base_->step(x, u, k);
  if (k >= 0 && k < bias_.horizon()) next += bias_.biases[k];
  return next;
}

JacobianPair BiasedModel::jacobians(const State& x, const Control& u,
                                    int k) const {
  return base_->jacobians(x, u, k);
}

ModelPtr apply_bias(ModelPtr model, TimeBias bias) {
  return std::make_shared<BiasedModel>(std::move(model), std::move(bias));
}

TimeBias compute_bias(const DynamicsModel& model, const Trajectory& real) {
  if (real.horizon() < 1) {
    throw std::invalid_argument("compute_bias: trajectory needs H >= 1");
  }
  TimeBias bias;
  bias.biases.reserve(real.controls.size());
  for (int t = 0; t < real.horizon(); ++t) {
    bias.biases.push_back(real.states[t + 1] -
                          integrate_step(model, real.states[t],
                                         real.controls[t], t));
  }
  return bias;
}

// ---------------------------------------------------------------------------
// Free functions

State integrate_step(const DynamicsModel& model, const State& x,
                     const Control& u, int k) {
  State next = model.step(x, u, k);
  if (!next.allFinite()) throw NumericalError("non-finite state", k);
  return next;
}

Trajectory rollout(const DynamicsModel& model,
                   const std::vector<Control>& controls, const State& s0) {
  if (controls.empty()) {
    throw std::invalid_argument("rollout: empty control sequence");
  }
  Trajectory traj;
  traj.dt = model.dt();
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(s0);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    traj.states.push_back(integrate_step(model, traj.states[k], controls[k],
                                         static_cast<int>(k)));
  }
  return traj;
}

JacobianPair jacobians(const DynamicsModel& model, const State& x,
                       const Control& u, int k) {
  JacobianPair j = model.jacobians(x, u, k);
  if (!all_finite(j.f_x) || !all_finite(j.f_u)) {
    throw NumericalError("non-finite Jacobian", k);
  }
  return j;
}

JacobianPair fd_jacobians(const DynamicsModel& model, const State& x,
                          const Control& u, int k) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = u.size();
  const Eigen::MatrixXd jac = central_jacobian(
      [&](const Eigen::VectorXd& z) {
        return model.step(z.head(n), z.tail(m), k);
      },
      concat(x, u), kJacobianRelStep);
  JacobianPair j{jac.leftCols(n), jac.rightCols(m)};
  if (!all_finite(j.f_x) || !all_finite(j.f_u)) {
    throw NumericalError("non-finite Jacobian", k);
  }
  return j;
}

HessianTensors hessian_tensors(const DynamicsModel& model, const State& x,
                               const Control& u, int k) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = u.size();
  const Eigen::Index nz = n + m;
  // Flatten [f_x | f_u] row-major so that output i occupies a contiguous
  // block of nz entries; d/dz_j of that block is row i of the Hessian.
  const Eigen::MatrixXd d = central_jacobian(
      [&](const Eigen::VectorXd& z) {
        const JacobianPair j = model.jacobians(z.head(n), z.tail(m), k);
        Eigen::MatrixXd full(n, nz);
        full << j.f_x, j.f_u;
        Eigen::VectorXd flat(n * nz);
        for (Eigen::Index i = 0; i < n; ++i) {
          flat.segment(i * nz, nz) = full.row(i).transpose();
        }
        return flat;
      },
      concat(x, u), kHessianRelStep);

  HessianTensors t;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd raw = d.middleRows(i * nz, nz);
    const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
    if (!all_finite(sym)) throw NumericalError("non-finite Hessian", k);
    t.f_xx.push_back(sym.topLeftCorner(n, n));
    t.f_xu.push_back(sym.topRightCorner(n, m));
    t.f_uu.push_back(sym.bottomRightCorner(m, m));
  }
  return t;
}

}  // namespace craftddp
