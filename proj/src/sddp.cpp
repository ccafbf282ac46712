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

#include "craftddp/sddp.hpp"

#include <stdexcept>
#include <utility>

#include "craftddp/numdiff.hpp"

namespace craftddp {

namespace {

Eigen::VectorXd concat(const State& x, const Control& u) {
  Eigen::VectorXd z(x.size() + u.size());
  z << x, u;
  return z;
}

// Directional derivative sum_j dF/dz_j dz_j by central differences.
Eigen::MatrixXd diffusion_directional(const DiffusionFunction& diffusion,
                                      const State& x, const Control& u,
                                      const Eigen::VectorXd& dz) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd z = concat(x, u);
  Eigen::MatrixXd out;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double zj = z(j);
    const double h = kJacobianRelStep * std::max(1.0, std::abs(zj));
    z(j) = zj + h;
    const Eigen::MatrixXd fp = diffusion(z.head(n), z.tail(u.size()));
    z(j) = zj - h;
    const Eigen::MatrixXd fm = diffusion(z.head(n), z.tail(u.size()));
    z(j) = zj;
    const Eigen::MatrixXd term = ((fp - fm) / ((zj + h) - (zj - h))) * dz(j);
    if (out.size() == 0) {
      out = term;
    } else {
      out += term;
    }
  }
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  if (!diffusion) throw std::invalid_argument("NoiseModel: missing diffusion");
  if (channels < 1 || sigma.rows() != channels || sigma.cols() != channels) {
    throw std::invalid_argument("NoiseModel: Sigma must be p x p");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("violated: Sigma symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("violated: Sigma PSD");
  }
}

NoiseModel NoiseModel::none(int state_dim, int channels) {
  NoiseModel nm;
  nm.channels = channels;
  nm.sigma = Eigen::MatrixXd::Identity(channels, channels);
  nm.diffusion = [state_dim, channels](const State&, const Control&) {
    return Eigen::MatrixXd::Zero(state_dim, channels).eval();
  };
  return nm;
}

NoiseModel NoiseModel::additive(const Eigen::MatrixXd& diffusion,
                                const Eigen::MatrixXd& sigma) {
  NoiseModel nm;
  nm.channels = static_cast<int>(diffusion.cols());
  nm.sigma = sigma;
  nm.diffusion = [diffusion](const State&, const Control&) { return diffusion; };
  nm.validate();
  return nm;
}

JacobianPair drift_jacobians(const DriftFunction& drift, const State& x,
                             const Control& u) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = u.size();
  const Eigen::MatrixXd jac = central_jacobian(
      [&](const Eigen::VectorXd& z) { return drift(z.head(n), z.tail(m)); },
      concat(x, u), kJacobianRelStep);
  return {jac.leftCols(n), jac.rightCols(m)};
}

StochasticExpansion discretize_stochastic(const DriftFunction& drift,
                                          const NoiseModel& noise,
                                          const State& x_bar,
                                          const Control& u_bar,
                                          const Eigen::VectorXd& dx,
                                          const Eigen::VectorXd& du,
                                          double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("violated: dt > 0");
  const Eigen::Index n = x_bar.size();
  const JacobianPair g = drift_jacobians(drift, x_bar, u_bar);

  StochasticExpansion ex;
  ex.a = Eigen::MatrixXd::Identity(n, n) + g.f_x * dt;
  ex.b = g.f_u * dt;
  const Eigen::MatrixXd grad_part =
      diffusion_directional(noise.diffusion, x_bar, u_bar, concat(dx, du));
  ex.gamma = grad_part + noise.diffusion(x_bar, u_bar);
  if (!ex.a.allFinite() || !ex.b.allFinite() || !ex.gamma.allFinite()) {
    throw NumericalError("non-finite stochastic expansion", 0);
  }
  return ex;
}

StochasticExpansion expand_dynamics_second_order(const DriftFunction& drift,
                                                 const NoiseModel& noise,
                                                 const State& x_bar,
                                                 const Control& u_bar,
                                                 double dt) {
  const Eigen::Index n = x_bar.size();
  const Eigen::Index m = u_bar.size();
  const Eigen::Index nz = n + m;
  StochasticExpansion ex = discretize_stochastic(
      drift, noise, x_bar, u_bar, Eigen::VectorXd::Zero(n),
      Eigen::VectorXd::Zero(m), dt);

  const Eigen::MatrixXd d = central_jacobian(
      [&](const Eigen::VectorXd& z) {
        const JacobianPair j = drift_jacobians(drift, z.head(n), z.tail(m));
        Eigen::VectorXd flat(n * nz);
        for (Eigen::Index i = 0; i < n; ++i) {
          flat.segment(i * nz, n) = j.f_x.row(i).transpose();
          flat.segment(i * nz + n, m) = j.f_u.row(i).transpose();
        }
        return flat;
      },
      concat(x_bar, u_bar), kHessianRelStep);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd raw = d.middleRows(i * nz, nz);
    const Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
    if (!sym.allFinite()) throw NumericalError("non-finite drift Hessian", 0);
    ex.remainder.f_xx.push_back(dt * sym.topLeftCorner(n, n));
    ex.remainder.f_xu.push_back(dt * sym.topRightCorner(n, m));
    ex.remainder.f_uu.push_back(dt * sym.bottomRightCorner(m, m));
    ex.remainder_ux.push_back(dt * sym.bottomLeftCorner(m, n));
  }
  ex.has_remainder = true;
  return ex;
}

double noise_trace_term(const Eigen::MatrixXd& v_xx,
                        const Eigen::MatrixXd& gamma,
                        const Eigen::MatrixXd& sigma, double dt) {
  return 0.5 * (gamma.transpose() * v_xx * gamma * sigma * dt).trace();
}

QModel stochastic_value_backup(const ValueModel& next,
                               const StochasticExpansion& expansion,
                               const Eigen::MatrixXd& sigma, double dt) {
  QModel q = value_substitution(next, expansion.a, expansion.b);
  q.q0 += noise_trace_term(next.v_xx, expansion.gamma, sigma, dt);
  return q;
}

EulerDriftModel::EulerDriftModel(DriftFunction drift, int state_dim,
                                 int control_dim, double dt)
    : drift_(std::move(drift)), n_(state_dim), m_(control_dim), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("violated: dt > 0");
}

State EulerDriftModel::step(const State& x, const Control& u, int) const {
  return x + drift_(x, u) * dt_;
}

JacobianPair EulerDriftModel::jacobians(const State& x, const Control& u,
                                        int) const {
  const JacobianPair g = drift_jacobians(drift_, x, u);
  return {Eigen::MatrixXd::Identity(n_, n_) + g.f_x * dt_, g.f_u * dt_};
}

BackwardResult stochastic_backward_sweep(const DriftFunction& drift,
                                         const NoiseModel& noise,
                                         const CostModel& cost,
                                         const Trajectory& nominal,
                                         double lambda) {
  noise.validate();
  const int horizon = nominal.horizon();
  if (horizon != cost.horizon()) {
    throw std::invalid_argument("stochastic_backward_sweep: horizon mismatch");
  }
  const double dt = nominal.dt;
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
    // Gamma is evaluated at dx = du = 0 inside the backup.
    const StochasticExpansion ex = discretize_stochastic(
        drift, noise, x, u, Eigen::VectorXd::Zero(x.size()),
        Eigen::VectorXd::Zero(u.size()), dt);
    QModel q = add_cost(stochastic_value_backup(out.values[k + 1], ex,
                                                noise.sigma, dt),
                        quadratize(cost, x, u, k));
    q.q_uu += reg;
    solve_gains(q, k, out.gains.alphas[k], out.gains.betas[k]);
    const Eigen::VectorXd& alpha = out.gains.alphas[k];
    expected += alpha.dot(q.q_u) + 0.5 * alpha.dot(q.q_uu * alpha);
    out.values[k] = value_update(q, alpha, out.gains.betas[k]);
    out.q_models[k] = std::move(q);
  }
  out.gains.expected_improvement = expected;
  return out;
}

}  // namespace craftddp
