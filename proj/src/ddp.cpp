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

#include "craftddp/ddp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace craftddp {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

Control AffinePolicy::control(int k, const State& x) const {
  return nominal_controls[k] + gains.alphas[k] +
         gains.betas[k] * (x - nominal_states[k]);
}

std::vector<double> DdpOptions::default_step_ladder() {
  std::vector<double> ladder;
  for (int i = 0; i <= 10; ++i) ladder.push_back(std::ldexp(1.0, -i));
  return ladder;
}

void DdpOptions::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("violated: ddp max_iterations >= 1");
  if (!(cost_tolerance > 0.0)) throw std::invalid_argument("violated: cost_tolerance > 0");
  if (!(lambda_init > 0.0) || !(lambda_max > 0.0) || lambda_max < lambda_init) {
    throw std::invalid_argument("violated: 0 < lambda_init <= lambda_max");
  }
  if (!(lambda_factor > 1.0)) throw std::invalid_argument("violated: lambda_factor > 1");
  if (step_ladder.empty()) throw std::invalid_argument("violated: non-empty step ladder");
  for (std::size_t i = 0; i < step_ladder.size(); ++i) {
    const double g = step_ladder[i];
    if (!(g > 0.0 && g <= 1.0) || (i > 0 && !(g < step_ladder[i - 1]))) {
      throw std::invalid_argument(
          "violated: step ladder strictly decreasing in (0, 1]");
    }
  }
}

QModel value_substitution(const ValueModel& next, const Eigen::MatrixXd& a,
                          const Eigen::MatrixXd& b) {
  QModel q;
  q.q0 = next.v;
  q.q_x = a.transpose() * next.v_x;
  q.q_u = b.transpose() * next.v_x;
  const Eigen::MatrixXd vxx_a = next.v_xx * a;
  const Eigen::MatrixXd vxx_b = next.v_xx * b;
  q.q_xx = symmetrized(a.transpose() * vxx_a);
  q.q_xu = a.transpose() * vxx_b;
  q.q_uu = symmetrized(b.transpose() * vxx_b);
  return q;
}

QModel add_cost(const QModel& value_part, const CostExpansion& cost) {
  QModel q;
  q.q0 = cost.l + value_part.q0;
  q.q_x = cost.l_x + value_part.q_x;
  q.q_u = cost.l_u + value_part.q_u;
  q.q_xx = cost.l_xx + value_part.q_xx;
  q.q_xu = cost.l_xu + value_part.q_xu;
  q.q_uu = cost.l_uu + value_part.q_uu;
  return q;
}

void solve_gains(const QModel& q, int step, Eigen::VectorXd& alpha,
                 Eigen::MatrixXd& beta) {
  const Eigen::LLT<Eigen::MatrixXd> llt(q.q_uu);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError(step);
  alpha = -llt.solve(q.q_u);
  beta = -llt.solve(q.q_xu.transpose());
  if (!alpha.allFinite() || !beta.allFinite()) {
    throw NotPositiveDefiniteError(step);
  }
}

ValueModel value_update(const QModel& q, const Eigen::VectorXd& alpha,
                        const Eigen::MatrixXd& beta) {
  ValueModel v;
  const Eigen::VectorXd quu_alpha = q.q_uu * alpha;
  v.v = q.q0 + alpha.dot(q.q_u) + 0.5 * alpha.dot(quu_alpha);
  v.v_x = q.q_x + q.q_xu * alpha + beta.transpose() * q.q_u +
          beta.transpose() * quu_alpha;
  v.v_xx = symmetrized(q.q_xx + q.q_xu * beta +
                       beta.transpose() * q.q_xu.transpose() +
                       beta.transpose() * q.q_uu * beta);
  return v;
}

BackwardResult backward_pass(const DynamicsModel& model, const CostModel& cost,
                             const Trajectory& nominal, double lambda,
                             bool second_order) {
  const int horizon = nominal.horizon();
  if (horizon != cost.horizon()) {
    throw std::invalid_argument("backward_pass: horizon mismatch");
  }
  BackwardResult out;
  out.values.resize(horizon + 1);
  out.q_models.resize(horizon);
  out.gains.alphas.resize(horizon);
  out.gains.betas.resize(horizon);

  const CostExpansion term = quadratize_terminal(cost, nominal.states.back());
  out.values[horizon] = {term.l, term.l_x, term.l_xx};

  const Eigen::Index m = cost.control_dim();
  const Eigen::MatrixXd reg = lambda * Eigen::MatrixXd::Identity(m, m);
  double expected = 0.0;
  for (int k = horizon - 1; k >= 0; --k) {
    const State& x = nominal.states[k];
    const Control& u = nominal.controls[k];
    const ValueModel& next = out.values[k + 1];
    const JacobianPair jac = jacobians(model, x, u, k);
    QModel value_part = value_substitution(next, jac.f_x, jac.f_u);
    if (second_order) {
      const HessianTensors t = hessian_tensors(model, x, u, k);
      value_part.q_xx += contract(next.v_x, t.f_xx);
      value_part.q_xu += contract(next.v_x, t.f_xu);
      value_part.q_uu += contract(next.v_x, t.f_uu);
    }
    QModel q = add_cost(value_part, quadratize(cost, x, u, k));
    q.q_uu += reg;

    Eigen::VectorXd& alpha = out.gains.alphas[k];
    Eigen::MatrixXd& beta = out.gains.betas[k];
    solve_gains(q, k, alpha, beta);
    expected += alpha.dot(q.q_u) + 0.5 * alpha.dot(q.q_uu * alpha);
    out.values[k] = value_update(q, alpha, beta);
    out.q_models[k] = std::move(q);
  }
  out.gains.expected_improvement = expected;
  return out;
}

ForwardResult forward_pass(const DynamicsModel& model, const CostModel& cost,
                           const Trajectory& nominal, const GainSchedule& gains,
                           double gamma) {
  const int horizon = nominal.horizon();
  ForwardResult out;
  out.trajectory.dt = nominal.dt;
  out.trajectory.states.reserve(horizon + 1);
  out.trajectory.controls.reserve(horizon);
  out.trajectory.states.push_back(nominal.states.front());
  for (int k = 0; k < horizon; ++k) {
    const State& x = out.trajectory.states[k];
    Control u = nominal.controls[k] + gamma * gains.alphas[k] +
                gains.betas[k] * (x - nominal.states[k]);
    out.trajectory.states.push_back(integrate_step(model, x, u, k));
    out.trajectory.controls.push_back(std::move(u));
  }
  out.cost = total_cost(cost, out.trajectory);
  return out;
}

const char* to_string(DdpTermination t) {
  switch (t) {
    case DdpTermination::kConverged: return "converged";
    case DdpTermination::kLambdaMax: return "lambda_max";
    case DdpTermination::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

DdpResult ddp_optimize(const DynamicsModel& model, const CostModel& cost,
                       const std::vector<Control>& initial_controls,
                       const State& s0, const DdpOptions& opts) {
  opts.validate();
  if (static_cast<int>(initial_controls.size()) != cost.horizon()) {
    throw std::invalid_argument("ddp_optimize: horizon mismatch");
  }

  DdpResult res;
  Trajectory nominal = rollout(model, initial_controls, s0);
  double j = total_cost(cost, nominal);
  if (!std::isfinite(j)) throw OptimizationError("non-finite initial cost");
  res.cost_history.push_back(j);

  double lambda = opts.lambda_init;
  BackwardResult back;
  bool gains_current = false;  // gains were computed at `nominal`
  bool done = false;

  while (!done && res.iterations < opts.max_iterations) {
    ++res.iterations;

    try {
      back = backward_pass(model, cost, nominal, lambda, opts.second_order);
    } catch (const NotPositiveDefiniteError&) {
      lambda *= opts.lambda_factor;
      if (lambda > opts.lambda_max) {
        if (res.cost_history.size() == 1) {
          throw OptimizationError("lambda_max exceeded before any accepted step");
        }
        res.termination = DdpTermination::kLambdaMax;
        done = true;
      }
      continue;
    }
    gains_current = true;

    // Quadratic model predicts no meaningful decrease: stationary. Only
    // trusted without extra damping, which shrinks the prediction.
    if (lambda <= opts.lambda_init &&
        -back.gains.expected_improvement <=
        opts.cost_tolerance * std::abs(j) + std::numeric_limits<double>::min()) {
      res.termination = DdpTermination::kConverged;
      break;
    }

    bool accepted = false;
    for (double gamma : opts.step_ladder) {
      ForwardResult fw;
      try {
        fw = forward_pass(model, cost, nominal, back.gains, gamma);
      } catch (const NumericalError&) {
        continue;
      }
      if (std::isfinite(fw.cost) && fw.cost < j) {
        const double rel = (j - fw.cost) / std::max(std::abs(j), 1e-300);
        nominal = std::move(fw.trajectory);
        j = fw.cost;
        res.cost_history.push_back(j);
        gains_current = false;
        accepted = true;
        lambda = std::max(lambda / opts.lambda_factor, opts.lambda_init);
        if (rel < opts.cost_tolerance) {
          res.termination = DdpTermination::kConverged;
          done = true;
        }
        break;
      }
    }
    if (!accepted) {
      lambda *= opts.lambda_factor;
      if (lambda > opts.lambda_max) {
        if (res.cost_history.size() == 1) {
          throw OptimizationError("lambda_max exceeded before any accepted step");
        }
        res.termination = DdpTermination::kLambdaMax;
        done = true;
      }
    }
  }

  // Gains reported with the policy must be linearized at its nominal.
  if (!gains_current) {
    double lam = lambda;
    for (;;) {
      try {
        back = backward_pass(model, cost, nominal, lam, opts.second_order);
        break;
      } catch (const NotPositiveDefiniteError&) {
        lam *= opts.lambda_factor;
        if (!(lam < std::numeric_limits<double>::max() / opts.lambda_factor)) {
          throw OptimizationError("cannot regularize final backward pass");
        }
      }
    }
  }

  res.lambda = lambda;
  res.policy.nominal_states = nominal.states;
  res.policy.nominal_controls = nominal.controls;
  res.policy.gains = std::move(back.gains);
  res.policy.dt = nominal.dt;
  res.trajectory = std::move(nominal);
  return res;
}

LqrSolution lqr_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& q_final, int horizon) {
  if (horizon < 0 || a.rows() != a.cols() || b.rows() != a.rows() ||
      q.rows() != a.rows() || r.rows() != b.cols() ||
      q_final.rows() != a.rows()) {
    throw std::invalid_argument("lqr_oracle: inconsistent dimensions");
  }
  LqrSolution sol;
  sol.gains.resize(horizon);
  sol.value_matrices.resize(horizon + 1);
  sol.value_matrices[horizon] = q_final;
  for (int k = horizon - 1; k >= 0; --k) {
    const Eigen::MatrixXd& p = sol.value_matrices[k + 1];
    const Eigen::MatrixXd s = r + b.transpose() * p * b;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
    if (!lu.isInvertible()) {
      throw std::runtime_error("lqr_oracle: R + B'PB is singular");
    }
    sol.gains[k] = lu.solve(b.transpose() * p * a);
    sol.value_matrices[k] = q + a.transpose() * p * (a - b * sol.gains[k]);
  }
  return sol;
}

}  // namespace craftddp
