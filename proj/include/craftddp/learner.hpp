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

#ifndef CRAFTDDP_LEARNER_HPP
#define CRAFTDDP_LEARNER_HPP

#include <atomic>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "craftddp/ddp.hpp"
#include "craftddp/dynamics.hpp"
#include "craftddp/task.hpp"

namespace craftddp {

using ControlTape = std::vector<Control>;

/// Executes control tapes on the system being learned. Each run() counts as
/// one real trial.
class RealSystem {
 public:
  virtual ~RealSystem() = default;

  Trajectory run(const ControlTape& controls, const State& s0) {
    ++trials_;
    return execute(controls, s0);
  }
  long trial_count() const { return trials_.load(); }

 protected:
  virtual Trajectory execute(const ControlTape& controls, const State& s0) = 0;

 private:
  std::atomic<long> trials_{0};
};

/// A simulator standing in for the real system.
class SimulatedSystem final : public RealSystem {
 public:
  explicit SimulatedSystem(ModelPtr model) : model_(std::move(model)) {}
  const DynamicsModel& model() const { return *model_; }

 protected:
  Trajectory execute(const ControlTape& controls, const State& s0) override {
    return rollout(*model_, controls, s0);
  }

 private:
  ModelPtr model_;
};

struct LearnerOptions {
  double epsilon = 1e-3;
  int n_stall = 3;
  int max_iterations = 50;
  std::vector<double> alpha_ladder = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  DdpOptions ddp;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  ControlTape theta;            // tape executed at the start of the iteration
  Trajectory real_trajectory;   // its real rollout
  double real_cost = 0.0;
  double bias_norm = 0.0;       // max over t of |bias_t|_2
  double replay_error = 0.0;    // max |biased step - observed next state|
  std::optional<double> chosen_alpha;
  double accepted_cost = 0.0;   // incumbent real cost after the line search
  int real_trials_used = 0;
  std::vector<double> ddp_cost_history;  // biased-model DDP run
};

enum class LearnTermination { kStall, kMaxIterations };

const char* to_string(LearnTermination t);

struct LearnLog {
  std::vector<IterationRecord> records;
  LearnTermination terminated_by = LearnTermination::kMaxIterations;
  long total_real_trials = 0;
  double initial_real_cost = 0.0;  // real cost of theta(0)
  double final_real_cost = 0.0;
};

struct LearnResult {
  ControlTape tape;
  Trajectory trajectory;  // real rollout of `tape`
  LearnLog log;
};

/// An inner failure during learn(); carries the log up to the failure.
class LearnError : public std::runtime_error {
 public:
  LearnError(const std::string& what, LearnLog log)
      : std::runtime_error(what), log_(std::move(log)) {}
  const LearnLog& log() const { return log_; }

 private:
  LearnLog log_;
};

/// Hover thrust (m g) and zero torque for craft models, zeros otherwise.
ControlTape warm_start_controls(const DynamicsModel& model, int horizon);

/// Clamps each control into [cost.control_lower, cost.control_upper].
ControlTape clamp_to_limits(const ControlTape& tape, const CostModel& cost);

/// Nominal controls of DDP on the unbiased model from a hover warm start.
ControlTape initial_policy(const DynamicsModel& model, const CostModel& cost,
                           const State& s0, const DdpOptions& opts);

struct ImprovementDirection {
  std::vector<Eigen::VectorXd> direction;
  DdpResult ddp;
};

/// DDP on the biased model warm-started at theta; direction = u* - theta.
ImprovementDirection improvement_direction(const DynamicsModel& biased_model,
                                           const CostModel& cost,
                                           const ControlTape& theta,
                                           const State& s0,
                                           const DdpOptions& opts);

struct LineSearchResult {
  ControlTape tape;
  Trajectory trajectory;  // real rollout of `tape` (empty if incumbent kept)
  double cost = 0.0;
  std::optional<double> alpha;  // none if the incumbent was kept
  int trials = 0;

  double improvement(double incumbent_cost) const {
    return incumbent_cost - cost;
  }
};

/// Tries theta + alpha d on the real system for alpha in ladder order and
/// stops at the first one that beats current_cost by more than
/// epsilon (1 + |current_cost|). Otherwise the best strictly improving
/// candidate is returned, or the incumbent when none improves.
LineSearchResult line_search_real(RealSystem& real, const CostModel& cost,
                                  const ControlTape& theta,
                                  const std::vector<Eigen::VectorXd>& direction,
                                  const std::vector<double>& ladder,
                                  const State& s0, double current_cost,
                                  double epsilon);

/// True iff the last n_stall improvements are each below
/// epsilon (1 + |j_scale|).
bool should_terminate(const std::vector<double>& improvements, double epsilon,
                      int n_stall, double j_scale);

/// Alternates real rollouts, bias correction of the approximate model, DDP
/// on the corrected model and a real-system line search. Throws LearnError.
LearnResult learn(RealSystem& real, const ModelPtr& approx_model,
                  const CostModel& cost, const State& s0,
                  const LearnerOptions& opts);

}  // namespace craftddp

#endif  // CRAFTDDP_LEARNER_HPP
