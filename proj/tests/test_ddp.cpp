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

#include <cmath>
#include <limits>
#include <random>

#include "craftddp/ddp.hpp"
#include "craftddp/learner.hpp"

using namespace craftddp;

namespace {

struct Lqr {
  Eigen::MatrixXd a, b, q, r, qf;
  double dt;
};

Lqr double_integrator(double dt = 0.1) {
  Lqr p;
  p.dt = dt;
  p.a.resize(2, 2);
  p.a << 1, dt, 0, 1;
  p.b.resize(2, 1);
  p.b << 0.5 * dt * dt, dt;
  p.q = Eigen::MatrixXd::Identity(2, 2);
  p.r = Eigen::MatrixXd::Identity(1, 1);
  p.qf = Eigen::MatrixXd::Identity(2, 2);
  return p;
}

CostModel regulator_cost(const Lqr& p, int horizon) {
  CostModel c;
  c.q = p.q;
  c.r = p.r;
  c.q_final = p.qf;
  c.reference.dt = p.dt;
  c.reference.targets.assign(horizon + 1, Eigen::VectorXd::Zero(p.a.rows()));
  const auto m = p.b.cols();
  c.control_lower = Eigen::VectorXd::Constant(m, -std::numeric_limits<double>::infinity());
  c.control_upper = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  return c;
}

// Closed-loop rollout of u = -K x.
std::vector<Control> lqr_controls(const Lqr& p, const LqrSolution& s, State x) {
  std::vector<Control> u;
  for (const auto& k : s.gains) {
    u.push_back(-k * x);
    x = p.a * x + p.b * u.back();
  }
  return u;
}

Trajectory nominal_of(const DynamicsModel& m, const std::vector<Control>& u, const State& s0) {
  return rollout(m, u, s0);
}

}  // namespace

TEST(LqrOracle, ZeroInputMatrix) {
  Lqr p = double_integrator();
  p.b.setZero();
  const LqrSolution s = lqr_oracle(p.a, p.b, p.q, p.r, p.qf, 5);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(s.gains[k], Eigen::MatrixXd::Zero(1, 2));
    const Eigen::MatrixXd expected = p.q + p.a.transpose() * s.value_matrices[k + 1] * p.a;
    EXPECT_LT((s.value_matrices[k] - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LqrOracle, ZeroHorizon) {
  const Lqr p = double_integrator();
  const LqrSolution s = lqr_oracle(p.a, p.b, p.q, p.r, p.qf, 0);
  EXPECT_TRUE(s.gains.empty());
  ASSERT_EQ(s.value_matrices.size(), 1u);
  EXPECT_EQ(s.value_matrices[0], p.qf);
}

TEST(LqrOracle, ScalarHandArithmetic) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const LqrSolution s = lqr_oracle(one, one, one, one, one, 1);
  EXPECT_DOUBLE_EQ(s.gains[0](0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s.value_matrices[0](0, 0), 1.5);
}

TEST(LqrOracle, SingularSystemRejected) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_THROW(lqr_oracle(one, one, one, zero, zero, 1), std::runtime_error);
}

TEST(SolveGains, ScalarStationaryPoint) {
  QModel q;
  q.q_x = Eigen::VectorXd::Zero(1);
  q.q_u = Eigen::VectorXd::Constant(1, 4.0);
  q.q_xx = Eigen::MatrixXd::Zero(1, 1);
  q.q_xu = Eigen::MatrixXd::Zero(1, 1);
  q.q_uu = Eigen::MatrixXd::Constant(1, 1, 2.0);
  Eigen::VectorXd alpha;
  Eigen::MatrixXd beta;
  solve_gains(q, 0, alpha, beta);
  EXPECT_DOUBLE_EQ(alpha(0), -2.0);
}

TEST(SolveGains, IndefiniteReportsStep) {
  QModel q;
  q.q_x = Eigen::VectorXd::Zero(1);
  q.q_u = Eigen::VectorXd::Constant(1, 1.0);
  q.q_xx = Eigen::MatrixXd::Zero(1, 1);
  q.q_xu = Eigen::MatrixXd::Zero(1, 1);
  q.q_uu = Eigen::MatrixXd::Constant(1, 1, -1.0);
  Eigen::VectorXd alpha;
  Eigen::MatrixXd beta;
  try {
    solve_gains(q, 12, alpha, beta);
    FAIL() << "expected NotPositiveDefiniteError";
  } catch (const NotPositiveDefiniteError& e) {
    EXPECT_EQ(e.step(), 12);
  }
}

TEST(BackwardPass, SingleStepScalarGain) {
  // l = u^2 (R = 1, so Q_uu = 2), terminal weight 0, nominal u = 2 gives q_u = 4.
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  LinearModel model(one, one, 1.0);
  Lqr p{one, one, Eigen::MatrixXd::Zero(1, 1), one, Eigen::MatrixXd::Zero(1, 1), 1.0};
  const CostModel c = regulator_cost(p, 1);
  const Trajectory nom = nominal_of(model, {Control::Constant(1, 2.0)}, State::Zero(1));
  const BackwardResult b = backward_pass(model, c, nom, 0.0, false);
  EXPECT_DOUBLE_EQ(b.q_models[0].q_uu(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(b.q_models[0].q_u(0), 4.0);
  EXPECT_DOUBLE_EQ(b.gains.alphas[0](0), -2.0);
}

TEST(BackwardPass, StationaryAtOptimum) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const CostModel c = regulator_cost(p, 20);
  const Trajectory nom =
      nominal_of(model, std::vector<Control>(20, Control::Zero(1)), State::Zero(2));
  const BackwardResult b = backward_pass(model, c, nom, 0.0, false);
  for (const auto& a : b.gains.alphas) EXPECT_EQ(a, Eigen::VectorXd::Zero(1));
  EXPECT_EQ(b.gains.expected_improvement, 0.0);
}

TEST(BackwardPass, MatchesRiccatiRecursion) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const int h = 50;
  const CostModel c = regulator_cost(p, h);
  const LqrSolution s = lqr_oracle(p.a, p.b, p.q, p.r, p.qf, h);
  const Trajectory nom = nominal_of(model, std::vector<Control>(h, Control::Constant(1, 0.3)),
                                    State(Eigen::Vector2d(1.0, 0.0)));
  for (bool second_order : {false, true}) {
    const BackwardResult b = backward_pass(model, c, nom, 0.0, second_order);
    for (int k = 0; k < h; ++k) {
      EXPECT_LT((b.gains.betas[k] + s.gains[k]).cwiseAbs().maxCoeff(), 1e-8) << k;
    }
    // The quadratic model carries a 1/2, the Riccati cost-to-go does not.
    for (int k = 0; k <= h; ++k) {
      EXPECT_LT((b.values[k].v_xx - 2.0 * s.value_matrices[k]).cwiseAbs().maxCoeff(), 1e-8) << k;
    }
  }
}

TEST(BackwardPass, GainsAreQModelStationaryPoints) {
  CraftParams cp;
  CraftModel model(cp, 0.05);
  ReferenceTrajectory ref = build_reference({{0, 5}, {4, 7}, {8, 5}}, 40, 0.05);
  CostWeights w;
  const CostModel c = make_craft_cost(ref, w, cp);
  State s0 = ref.targets[0];
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> f(5, 15), t(-0.2, 0.2);
  std::vector<Control> u;
  for (int k = 0; k < 40; ++k) u.push_back(Control(Eigen::Vector2d(f(rng), t(rng))));
  const Trajectory nom = rollout(model, u, s0);
  for (bool second_order : {false, true}) {
    double lambda = 1e-6;
    BackwardResult b;
    for (;;) {
      try {
        b = backward_pass(model, c, nom, lambda, second_order);
        break;
      } catch (const NotPositiveDefiniteError&) {
        lambda *= 10.0;
      }
    }
    for (int k = 0; k < 40; ++k) {
      const QModel& q = b.q_models[k];
      EXPECT_LT((q.q_u + q.q_uu * b.gains.alphas[k]).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_EQ(q.q_xx, q.q_xx.transpose());
      EXPECT_EQ(q.q_uu, q.q_uu.transpose());
      EXPECT_EQ(b.values[k].v_xx, b.values[k].v_xx.transpose());
    }
    EXPECT_LT(b.gains.expected_improvement, 0.0);
  }
}

TEST(BackwardPass, ExpectedImprovementSign) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const CostModel c = regulator_cost(p, 10);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Control> u;
    for (int k = 0; k < 10; ++k) u.push_back(Control::Constant(1, n(rng)));
    const Trajectory nom = nominal_of(model, u, State(Eigen::Vector2d(n(rng), n(rng))));
    const BackwardResult b = backward_pass(model, c, nom, 0.0, false);
    EXPECT_LE(b.gains.expected_improvement, 0.0);
    double qu = 0.0;
    for (const auto& q : b.q_models) qu = std::max(qu, q.q_u.cwiseAbs().maxCoeff());
    EXPECT_EQ(qu <= 1e-12, std::abs(b.gains.expected_improvement) <= 1e-12);
  }
}

TEST(BackwardPass, HorizonMismatchRejected) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const CostModel c = regulator_cost(p, 10);
  const Trajectory nom = nominal_of(model, std::vector<Control>(5, Control::Zero(1)), State::Zero(2));
  EXPECT_THROW(backward_pass(model, c, nom, 0.0, false), std::invalid_argument);
}

TEST(ForwardPass, ZeroGainsReproduceNominal) {
  CraftModel model(CraftParams{}, 0.05);
  ReferenceTrajectory ref = build_reference({{0, 5}, {4, 7}}, 30, 0.05);
  const CostModel c = make_craft_cost(ref, CostWeights{}, CraftParams{});
  const Trajectory nom =
      rollout(model, std::vector<Control>(30, Control(Eigen::Vector2d(10.5, 0.01))), ref.targets[0]);
  GainSchedule g;
  g.alphas.assign(30, Eigen::VectorXd::Zero(2));
  g.betas.assign(30, Eigen::MatrixXd::Zero(2, 6));
  for (double gamma : {1.0, 0.5, 1e-3}) {
    const ForwardResult f = forward_pass(model, c, nom, g, gamma);
    for (std::size_t k = 0; k < nom.states.size(); ++k) ASSERT_EQ(f.trajectory.states[k], nom.states[k]);
    for (std::size_t k = 0; k < nom.controls.size(); ++k) ASSERT_EQ(f.trajectory.controls[k], nom.controls[k]);
    EXPECT_EQ(f.cost, total_cost(c, nom));
  }
}

TEST(ForwardPass, FeedbackOnlyStartsOnNominal) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const CostModel c = regulator_cost(p, 15);
  const Trajectory nom = nominal_of(model, std::vector<Control>(15, Control::Constant(1, 0.2)),
                                    State(Eigen::Vector2d(1.0, -1.0)));
  const BackwardResult b = backward_pass(model, c, nom, 0.0, false);
  GainSchedule g = b.gains;
  for (auto& a : g.alphas) a.setZero();
  const ForwardResult f = forward_pass(model, c, nom, g, 1.0);
  for (std::size_t k = 0; k < nom.states.size(); ++k) EXPECT_EQ(f.trajectory.states[k], nom.states[k]);
}

TEST(ForwardPass, FullStepReachesRiccatiCost) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const int h = 50;
  const CostModel c = regulator_cost(p, h);
  const State x0 = Eigen::Vector2d(1.0, 0.0);
  const LqrSolution s = lqr_oracle(p.a, p.b, p.q, p.r, p.qf, h);
  const double optimal = x0.dot(s.value_matrices[0] * x0);
  const Trajectory nom = nominal_of(model, std::vector<Control>(h, Control::Zero(1)), x0);
  const BackwardResult b = backward_pass(model, c, nom, 0.0, false);
  const ForwardResult f = forward_pass(model, c, nom, b.gains, 1.0);
  EXPECT_NEAR(f.cost, optimal, 1e-8);
  EXPECT_NEAR(total_cost(c, nom) + b.gains.expected_improvement, optimal, 1e-8);
}

TEST(DdpOptimize, LqrFromZeroControls) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const int h = 50;
  const CostModel c = regulator_cost(p, h);
  const State x0 = Eigen::Vector2d(1.0, 0.0);
  const LqrSolution s = lqr_oracle(p.a, p.b, p.q, p.r, p.qf, h);
  const double optimal = x0.dot(s.value_matrices[0] * x0);
  const DdpResult r = ddp_optimize(model, c, std::vector<Control>(h, Control::Zero(1)), x0);
  EXPECT_LT(std::abs(r.final_cost() - optimal) / optimal, 1e-6);
  const std::vector<Control> u = lqr_controls(p, s, x0);
  for (int k = 0; k < h; ++k) {
    EXPECT_LT(std::abs(r.policy.nominal_controls[k](0) - u[k](0)), 1e-6) << k;
  }
  EXPECT_EQ(r.termination, DdpTermination::kConverged);
}

TEST(DdpOptimize, OptimalStartIsAFixedPoint) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const int h = 30;
  const CostModel c = regulator_cost(p, h);
  const State x0 = Eigen::Vector2d(-0.5, 2.0);
  const std::vector<Control> u = lqr_controls(p, lqr_oracle(p.a, p.b, p.q, p.r, p.qf, h), x0);
  const DdpResult r = ddp_optimize(model, c, u, x0);
  EXPECT_LE(r.iterations, 2);
  for (int k = 0; k < h; ++k) {
    EXPECT_LT(std::abs(r.policy.nominal_controls[k](0) - u[k](0)), 1e-8);
  }
}

TEST(DdpOptimize, CostHistoryStrictlyDecreasing) {
  CraftParams cp;
  CraftModel model(cp, 0.05);
  ReferenceTrajectory ref = build_reference({{0, 5}, {3, 7}, {6, 6}, {9, 8}}, 60, 0.05);
  const CostModel c = make_craft_cost(ref, CostWeights{}, cp);
  for (bool second_order : {false, true}) {
    DdpOptions o;
    o.second_order = second_order;
    const DdpResult r =
        ddp_optimize(model, c, warm_start_controls(model, 60), ref.targets[0], o);
    ASSERT_GE(r.cost_history.size(), 2u);
    for (std::size_t i = 1; i < r.cost_history.size(); ++i) {
      EXPECT_LT(r.cost_history[i], r.cost_history[i - 1]);
    }
    EXPECT_EQ(r.final_cost(), total_cost(c, r.trajectory));
    // The nominal is a valid rollout of the nominal controls.
    const Trajectory again = rollout(model, r.policy.nominal_controls, ref.targets[0]);
    for (std::size_t k = 0; k < again.states.size(); ++k) {
      ASSERT_EQ(again.states[k], r.policy.nominal_states[k]);
    }
    EXPECT_EQ(r.policy.gains.horizon(), 60);
  }
}

TEST(DdpOptimize, HoverHoldsPosition) {
  CraftParams cp;
  CraftModel model(cp, 0.05);
  const int h = 100;
  ReferenceTrajectory ref;
  ref.dt = 0.05;
  State start = State::Zero(6);
  start(state_index::kX) = 2.0;
  start(state_index::kY) = 5.0;
  ref.targets.assign(h + 1, start);
  // Penalizing the hover thrust itself would buy a small sag near the end.
  CostWeights w;
  w.thrust = 1e-5;
  const CostModel c = make_craft_cost(ref, w, cp);
  const DdpResult r =
      ddp_optimize(model, c, std::vector<Control>(h, Control::Zero(2)), start);
  for (const auto& s : r.trajectory.states) {
    EXPECT_LT(std::hypot(s(state_index::kX) - 2.0, s(state_index::kY) - 5.0), 1e-3);
  }
}

TEST(DdpOptimize, UnrecoverableFirstIterationFails) {
  // Any control other than zero blows up.
  struct Fragile final : DynamicsModel {
    int state_dim() const override { return 1; }
    int control_dim() const override { return 1; }
    double dt() const override { return 1.0; }
    State step(const State& x, const Control& u, int) const override {
      if (u(0) != 0.0) return State::Constant(1, std::nan(""));
      return x;
    }
    JacobianPair jacobians(const State&, const Control&, int) const override {
      return {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
    }
  } model;
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const CostModel c = regulator_cost(Lqr{one, one, one, one, one, 1.0}, 3);
  EXPECT_THROW(ddp_optimize(model, c, std::vector<Control>(3, Control::Zero(1)), State::Ones(1)),
               OptimizationError);
}

TEST(DdpOptimize, NonFiniteInitialCostFails) {
  const Lqr p = double_integrator();
  LinearModel model(p.a, p.b, p.dt);
  const CostModel c = regulator_cost(p, 3);
  std::vector<Control> u(3, Control::Constant(1, 1e300));
  EXPECT_THROW(ddp_optimize(model, c, u, State::Zero(2)), std::exception);
}

TEST(DdpOptions, Validation) {
  DdpOptions o;
  EXPECT_NO_THROW(o.validate());
  EXPECT_EQ(o.step_ladder.size(), 11u);
  EXPECT_EQ(o.step_ladder.back(), std::ldexp(1.0, -10));
  o.step_ladder = {1.0, 1.0};
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.step_ladder = {1.5};
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.lambda_init = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.lambda_factor = 1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}
