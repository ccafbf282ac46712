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

#include "craftddp/learner.hpp"

#include <algorithm>
#include <cmath>

namespace craftddp {

void LearnerOptions::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("violated: epsilon > 0");
  if (n_stall < 1) throw std::invalid_argument("violated: n_stall >= 1");
  if (max_iterations < 1) {
    throw std::invalid_argument("violated: learner max_iterations >= 1");
  }
  if (alpha_ladder.empty()) {
    throw std::invalid_argument("violated: non-empty alpha ladder");
  }
  for (std::size_t i = 0; i < alpha_ladder.size(); ++i) {
    const double a = alpha_ladder[i];
    if (!(a > 0.0 && a <= 1.0) || (i > 0 && !(a < alpha_ladder[i - 1]))) {
      throw std::invalid_argument(
          "violated: alpha ladder strictly decreasing in (0, 1]");
    }
  }
  ddp.validate();
}

const char* to_string(LearnTermination t) {
  switch (t) {
    case LearnTermination::kStall: return "stall";
    case LearnTermination::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

ControlTape warm_start_controls(const DynamicsModel& model, int horizon) {
  Control u = Control::Zero(model.control_dim());
  if (const CraftParams* p = model.craft_params()) {
    u(control_index::kThrust) = p->mass * p->gravity;
  }
  return ControlTape(static_cast<std::size_t>(horizon), u);
}

ControlTape clamp_to_limits(const ControlTape& tape, const CostModel& cost) {
  ControlTape out = tape;
  for (auto& u : out) {
    u = u.cwiseMax(cost.control_lower).cwiseMin(cost.control_upper);
  }
  return out;
}

ControlTape initial_policy(const DynamicsModel& model, const CostModel& cost,
                           const State& s0, const DdpOptions& opts) {
  if (cost.horizon() < 1) throw std::invalid_argument("violated: H >= 1");
  return ddp_optimize(model, cost, warm_start_controls(model, cost.horizon()),
                      s0, opts)
      .policy.nominal_controls;
}

ImprovementDirection improvement_direction(const DynamicsModel& biased_model,
                                           const CostModel& cost,
                                           const ControlTape& theta,
                                           const State& s0,
                                           const DdpOptions& opts) {
  ImprovementDirection out;
  out.ddp = ddp_optimize(biased_model, cost, theta, s0, opts);
  out.direction.reserve(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    out.direction.push_back(out.ddp.policy.nominal_controls[k] - theta[k]);
  }
  return out;
}

LineSearchResult line_search_real(RealSystem& real, const CostModel& cost,
                                  const ControlTape& theta,
                                  const std::vector<Eigen::VectorXd>& direction,
                                  const std::vector<double>& ladder,
                                  const State& s0, double current_cost,
                                  double epsilon) {
  if (direction.size() != theta.size()) {
    throw std::invalid_argument("line_search_real: |d| != |theta|");
  }
  const double threshold = epsilon * (1.0 + std::abs(current_cost));
  LineSearchResult best;
  best.tape = theta;
  best.cost = current_cost;

  for (double alpha : ladder) {
    ControlTape candidate(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      candidate[k] = theta[k] + alpha * direction[k];
    }
    candidate = clamp_to_limits(candidate, cost);
    Trajectory traj = real.run(candidate, s0);
    ++best.trials;
    const double j = total_cost(cost, traj);
    if (std::isfinite(j) && j < best.cost) {
      best.tape = std::move(candidate);
      best.trajectory = std::move(traj);
      best.cost = j;
      best.alpha = alpha;
      if (current_cost - j > threshold) break;
    }
  }
  return best;
}

bool should_terminate(const std::vector<double>& improvements, double epsilon,
                      int n_stall, double j_scale) {
  if (n_stall < 1 || static_cast<int>(improvements.size()) < n_stall) {
    return false;
  }
  const double threshold = epsilon * (1.0 + std::abs(j_scale));
  return std::all_of(improvements.end() - n_stall, improvements.end(),
                     [&](double d) { return d < threshold; });
}

LearnResult learn(RealSystem& real, const ModelPtr& approx_model,
                  const CostModel& cost, const State& s0,
                  const LearnerOptions& opts) {
  opts.validate();
  cost.validate();
  if (cost.horizon() < 1) throw std::invalid_argument("violated: H >= 1");

  const long start_trials = real.trial_count();
  LearnResult res;
  LearnLog& log = res.log;
  try {
    ControlTape theta = clamp_to_limits(
        initial_policy(*approx_model, cost, s0, opts.ddp), cost);
    Trajectory traj = real.run(theta, s0);
    double j = total_cost(cost, traj);
    log.initial_real_cost = j;
    int pending_trials = 1;

    std::vector<double> improvements;
    for (int i = 0; i < opts.max_iterations; ++i) {
      IterationRecord rec;
      rec.iteration = i;
      rec.theta = theta;
      rec.real_trajectory = traj;
      rec.real_cost = j;

      const TimeBias bias = compute_bias(*approx_model, traj);
      for (const auto& b : bias.biases) {
        rec.bias_norm = std::max(rec.bias_norm, b.norm());
      }
      const ModelPtr biased = apply_bias(approx_model, bias);
      for (int t = 0; t < traj.horizon(); ++t) {
        const State replay = biased->step(traj.states[t], traj.controls[t], t);
        rec.replay_error = std::max(
            rec.replay_error,
            (replay - traj.states[t + 1]).cwiseAbs().maxCoeff());
      }

      ImprovementDirection dir =
          improvement_direction(*biased, cost, theta, s0, opts.ddp);
      rec.ddp_cost_history = dir.ddp.cost_history;

      LineSearchResult ls = line_search_real(
          real, cost, theta, dir.direction, opts.alpha_ladder, s0, j,
          opts.epsilon);
      rec.real_trials_used = pending_trials + ls.trials;
      pending_trials = 0;

      double improvement = 0.0;
      if (ls.alpha) {
        improvement = j - ls.cost;
        theta = std::move(ls.tape);
        traj = std::move(ls.trajectory);
        j = ls.cost;
        rec.chosen_alpha = ls.alpha;
      }
      rec.accepted_cost = j;
      log.records.push_back(std::move(rec));
      improvements.push_back(improvement);

      if (should_terminate(improvements, opts.epsilon, opts.n_stall, j)) {
        log.terminated_by = LearnTermination::kStall;
        break;
      }
    }

    log.total_real_trials = real.trial_count() - start_trials;
    log.final_real_cost = j;
    res.tape = std::move(theta);
    res.trajectory = std::move(traj);
  } catch (const std::exception& e) {
    log.total_real_trials = real.trial_count() - start_trials;
    throw LearnError(e.what(), log);
  }
  return res;
}

}  // namespace craftddp
