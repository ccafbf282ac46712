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

#ifndef CRAFTDDP_SDDP_HPP
#define CRAFTDDP_SDDP_HPP

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "craftddp/ddp.hpp"
#include "craftddp/dynamics.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

// Stochastic expansion of dx = f(x, u) dt + F(x, u) dw around a nominal
// (x_bar, u_bar), discretized to
//
//   dx' = A dx + B du + Gamma xi + O_d,
//   A = I + grad_x f dt,  B = grad_u f dt,
//   Gamma = grad_x F . dx + grad_u F . du + F,
//
// with xi ~ N(0, Sigma dt). Expectations of the value substitution over xi
// add a single trace term to the scalar part of the Q-model.

using DriftFunction =
    std::function<Eigen::VectorXd(const State&, const Control&)>;
using DiffusionFunction =
    std::function<Eigen::MatrixXd(const State&, const Control&)>;

struct NoiseModel {
  DiffusionFunction diffusion;  // n x p
  int channels = 1;             // p
  Eigen::MatrixXd sigma;        // p x p, symmetric PSD

  void validate() const;

  /// F == 0.
  static NoiseModel none(int state_dim, int channels = 1);
  /// State- and control-independent F.
  static NoiseModel additive(const Eigen::MatrixXd& diffusion,
                             const Eigen::MatrixXd& sigma);
};

struct StochasticExpansion {
  Eigen::MatrixXd a;      // n x n
  Eigen::MatrixXd b;      // n x m
  Eigen::MatrixXd gamma;  // n x p
  /// Second-order drift terms scaled by dt (zero unless requested).
  HessianTensors remainder;
  /// remainder_ux[j] is the (u, x) block, the transpose of remainder.f_xu[j].
  std::vector<Eigen::MatrixXd> remainder_ux;
  bool has_remainder = false;
};

/// Central-difference (grad_x f, grad_u f) of a continuous drift.
JacobianPair drift_jacobians(const DriftFunction& drift, const State& x,
                             const Control& u);

StochasticExpansion discretize_stochastic(const DriftFunction& drift,
                                          const NoiseModel& noise,
                                          const State& x_bar,
                                          const Control& u_bar,
                                          const Eigen::VectorXd& dx,
                                          const Eigen::VectorXd& du, double dt);

/// discretize_stochastic at dx = du = 0 plus finite-difference second-order
/// drift tensors, symmetrized per output and scaled by dt.
StochasticExpansion expand_dynamics_second_order(const DriftFunction& drift,
                                                 const NoiseModel& noise,
                                                 const State& x_bar,
                                                 const Control& u_bar,
                                                 double dt);

/// 1/2 tr(Gamma' V_xx Gamma Sigma dt).
double noise_trace_term(const Eigen::MatrixXd& v_xx,
                        const Eigen::MatrixXd& gamma,
                        const Eigen::MatrixXd& sigma, double dt);

/// E over xi of V(x_bar' + A dx + B du + Gamma xi) as a quadratic model in
/// (dx, du). Only Q0 differs from the deterministic substitution. The
/// remainder is not fed back.
QModel stochastic_value_backup(const ValueModel& next,
                               const StochasticExpansion& expansion,
                               const Eigen::MatrixXd& sigma, double dt);

/// Explicit-Euler discretization x + f(x, u) dt whose Jacobians are exactly
/// the A and B of discretize_stochastic.
class EulerDriftModel final : public DynamicsModel {
 public:
  EulerDriftModel(DriftFunction drift, int state_dim, int control_dim,
                  double dt);

  int state_dim() const override { return n_; }
  int control_dim() const override { return m_; }
  double dt() const override { return dt_; }
  State step(const State& x, const Control& u, int k) const override;
  JacobianPair jacobians(const State& x, const Control& u,
                         int k) const override;

  const DriftFunction& drift() const { return drift_; }

 private:
  DriftFunction drift_;
  int n_;
  int m_;
  double dt_;
};

/// Backward sweep whose value substitution is stochastic_value_backup.
BackwardResult stochastic_backward_sweep(const DriftFunction& drift,
                                         const NoiseModel& noise,
                                         const CostModel& cost,
                                         const Trajectory& nominal,
                                         double lambda);

}  // namespace craftddp

#endif  // CRAFTDDP_SDDP_HPP
