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

#include "craftddp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "craftddp/config.hpp"
#include "craftddp/ddp.hpp"
#include "craftddp/experiment.hpp"
#include "craftddp/io.hpp"
#include "craftddp/learner.hpp"

namespace craftddp {

namespace {

namespace fs = std::filesystem;

std::string out_path(const Experiment& e, const std::string& name) {
  return (fs::path(e.config.output_dir) / name).string();
}

// Maps exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigOrIo;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitConfigOrIo;
  } catch (const LearnError& e) {
    err << "learning failed after " << e.log().records.size()
        << " iteration(s), " << e.log().total_real_trials
        << " real trial(s): " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const OptimizationError& e) {
    err << "optimization failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfigOrIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int trajectory_verdict(const MetricsReport& r, std::ostream& err) {
  if (!r.has_error()) return kExitOk;
  if (r.stop.flagged) err << "stop error at step " << *r.stop.index << "\n";
  if (r.collision.flagged) {
    err << "collision error at step " << *r.collision.index
        << " (min clearance " << r.collision.min_clearance << " m)\n";
  }
  return kExitTrajectoryError;
}

// Column-aligned numeric table; shorter columns leave trailing cells empty.
std::string series_table(const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& columns) {
  std::string out = "k";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t k = 0; k < rows; ++k) {
    out += std::to_string(k);
    for (const auto& c : columns) {
      out += ",";
      if (k < c.size()) out += format_number(c[k]);
    }
    out += "\n";
  }
  return out;
}

std::vector<double> component(const Trajectory& t, int i) {
  std::vector<double> v;
  for (const auto& s : t.states) v.push_back(s(i));
  return v;
}

std::vector<double> times(const Trajectory& t) {
  std::vector<double> v;
  for (std::size_t k = 0; k < t.states.size(); ++k) v.push_back(k * t.dt);
  return v;
}

std::vector<double> speeds(const Trajectory& t) {
  std::vector<double> v;
  for (const auto& s : t.states) {
    v.push_back(std::hypot(s(state_index::kVx), s(state_index::kVy)));
  }
  return v;
}

std::vector<std::pair<std::string, std::string>> report_rows(
    const MetricsReport& r) {
  auto n = [](double v) { return format_number(v); };
  return {
      {"stop_error", r.stop.flagged ? "1" : "0"},
      {"stop_index", r.stop.index ? std::to_string(*r.stop.index) : ""},
      {"collision_error", r.collision.flagged ? "1" : "0"},
      {"collision_index", r.collision.index ? std::to_string(*r.collision.index) : ""},
      {"min_clearance", n(r.collision.min_clearance)},
      {"deviation_mean", n(r.deviation.mean)},
      {"deviation_max", n(r.deviation.max)},
      {"jerk_mean", n(r.jerk.mean)},
      {"work_thrust_total", n(r.work.thrust_total)},
      {"work_torque_total", n(r.work.torque_total)},
      {"duration", n(r.duration)},
      {"path_length", n(r.path_length)},
      {"theta_total_variation", n(r.rotation.theta_total_variation)},
      {"omega_total_variation", n(r.rotation.omega_total_variation)},
  };
}

std::string report_series(const Trajectory& t, const MetricsReport& r) {
  std::string table = series_table(
      {"t", "speed", "deviation", "work_thrust", "work_torque", "theta", "omega"},
      {times(t), speeds(t), r.deviation.series, r.work.thrust_series,
       r.work.torque_series, r.rotation.theta_series, r.rotation.omega_series});
  std::string jerk_table = series_table({"jerk"}, {r.jerk.series});
  return table + "\n# jerk series (interior states 1..H-1)\n" + jerk_table;
}

}  // namespace

std::string format_report(const MetricsReport& r) {
  std::ostringstream os;
  os << "stop error:          " << (r.stop.flagged ? "YES" : "no");
  if (r.stop.index) os << " (step " << *r.stop.index << ")";
  os << "\ncollision error:     " << (r.collision.flagged ? "YES" : "no");
  if (r.collision.index) os << " (step " << *r.collision.index << ")";
  os << "\nmin deck clearance:  " << r.collision.min_clearance << " m"
     << "\ndeviation mean/max:  " << r.deviation.mean << " / " << r.deviation.max
     << " m"
     << "\nmean jerk amplitude: " << r.jerk.mean << " m/s^3"
     << "\nthrust work total:   " << r.work.thrust_total << " J (*)"
     << "\ntorque work total:   " << r.work.torque_total << " J (*)"
     << "\nduration:            " << r.duration << " s"
     << "\npath length:         " << r.path_length << " m"
     << "\ntheta total var.:    " << r.rotation.theta_total_variation << " rad"
     << "\nomega total var.:    " << r.rotation.omega_total_variation << " rad/s"
     << "\n(*) per-step |power| x dt at the step's start state\n";
  return os.str();
}

std::string format_comparison(const ComparisonReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "criterion" << std::setw(15) << "a"
     << std::setw(15) << "b" << "winner\n";
  for (const auto& c : report.criteria) {
    os << std::setw(24) << c.name << std::setw(15) << c.value_a << std::setw(15)
       << c.value_b << to_string(c.winner) << "\n";
  }
  return os.str();
}

int run_ddp(const std::string& config_path, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const Experiment e = make_experiment(load_config(config_path));
    const DdpResult res =
        ddp_optimize(*e.model, e.cost,
                     warm_start_controls(*e.model, e.cost.horizon()), e.s0,
                     e.config.ddp);
    export_controls(out_path(e, "ddp_tape.csv"), res.policy.nominal_controls);
    write_trajectory(out_path(e, "ddp_trajectory.csv"), res.trajectory);
    out << "ddp: " << res.iterations << " iterations, " << to_string(res.termination)
        << ", model cost " << format_number(res.final_cost()) << "\n";
    return trajectory_verdict(
        compute_report(res.trajectory, e.reference, e.deck, e.config.v_eps), err);
  });
}

int run_learn(const std::string& config_path, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const Experiment e = make_experiment(load_config(config_path));
    SimulatedSystem real(e.truth);
    LearnResult res;
    try {
      res = learn(real, e.model, e.cost, e.s0, e.config.learner);
    } catch (const LearnError& le) {
      write_file(out_path(e, "learn_log.csv"), learn_log_to_csv(le.log()));
      throw;
    }
    const LearnLog& log = res.log;
    export_controls(out_path(e, "learn_tape.csv"), res.tape);
    write_trajectory(out_path(e, "learn_trajectory.csv"), res.trajectory);
    write_file(out_path(e, "learn_log.csv"), learn_log_to_csv(log));
    write_file(out_path(e, "learn_summary.csv"),
               key_values_to_csv({
                   {"iterations", std::to_string(log.records.size())},
                   {"terminated_by", to_string(log.terminated_by)},
                   {"total_real_trials", std::to_string(log.total_real_trials)},
                   {"initial_real_cost", format_number(log.initial_real_cost)},
                   {"final_real_cost", format_number(log.final_real_cost)},
               }));
    for (const auto& r : log.records) {
      out << "iter " << r.iteration << "  real cost " << format_number(r.real_cost)
          << "  bias " << r.bias_norm << "  alpha "
          << (r.chosen_alpha ? format_number(*r.chosen_alpha) : "-") << "  trials "
          << r.real_trials_used << "\n";
    }
    out << "learn: " << to_string(log.terminated_by) << " after "
        << log.records.size() << " iterations, " << log.total_real_trials
        << " real trials, real cost " << format_number(log.initial_real_cost)
        << " -> " << format_number(log.final_real_cost) << "\n";
    return trajectory_verdict(
        compute_report(res.trajectory, e.reference, e.deck, e.config.v_eps), err);
  });
}

int run_rollout(const std::string& config_path, const std::string& tape_path,
                const std::string& system, const std::optional<std::string>& output,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const Experiment e = make_experiment(load_config(config_path));
    if (system != "true" && system != "model") {
      throw ConfigError("--system must be 'true' or 'model'", 0);
    }
    const DynamicsModel& model =
        system == "true" ? static_cast<const DynamicsModel&>(*e.truth) : *e.model;
    const ControlTape tape = read_controls(tape_path);
    if (static_cast<int>(tape.size()) != e.cost.horizon()) {
      throw IoError("tape length " + std::to_string(tape.size()) +
                    " does not match horizon " + std::to_string(e.cost.horizon()));
    }
    const Trajectory traj = rollout(model, tape, e.s0);
    write_trajectory(output ? *output : out_path(e, "rollout_" + system + ".csv"),
                     traj);
    out << "rollout (" << system << "): cost " << format_number(total_cost(e.cost, traj))
        << "\n";
    return trajectory_verdict(compute_report(traj, e.reference, e.deck, e.config.v_eps),
                              err);
  });
}

int run_metrics(const std::string& config_path, const std::string& trajectory_path,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Experiment e = make_experiment(load_config(config_path));
    const Trajectory traj = read_trajectory(trajectory_path);
    const MetricsReport r = compute_report(traj, e.reference, e.deck, e.config.v_eps);
    const std::string stem = fs::path(trajectory_path).stem().string();
    write_file(out_path(e, "metrics_" + stem + ".csv"),
               key_values_to_csv(report_rows(r)));
    write_file(out_path(e, "metrics_" + stem + "_series.csv"), report_series(traj, r));
    out << format_report(r);
    return trajectory_verdict(r, err);
  });
}

int run_compare(const std::string& config_path, const std::string& a_path,
                const std::string& b_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    using namespace state_index;
    const Experiment e = make_experiment(load_config(config_path));
    const Trajectory a = read_trajectory(a_path);
    const Trajectory b = read_trajectory(b_path);
    const ComparisonReport c = compare(a, b, e.reference, e.deck, e.config.v_eps);

    std::string summary = "criterion,value_a,value_b,winner\n";
    for (const auto& cr : c.criteria) {
      summary += cr.name + "," + format_number(cr.value_a) + "," +
                 format_number(cr.value_b) + "," + to_string(cr.winner) + "\n";
    }
    write_file(out_path(e, "compare_summary.csv"), summary);

    write_file(out_path(e, "fig06_velocity.csv"),
               series_table({"t_a", "vx_a", "vy_a", "speed_a", "t_b", "vx_b", "vy_b",
                             "speed_b"},
                            {times(a), component(a, kVx), component(a, kVy), speeds(a),
                             times(b), component(b, kVx), component(b, kVy),
                             speeds(b)}));
    std::vector<double> ref_x, ref_y;
    for (const auto& t : e.reference.targets) {
      ref_x.push_back(t(kX));
      ref_y.push_back(t(kY));
    }
    write_file(out_path(e, "fig07_paths.csv"),
               series_table({"x_a", "y_a", "x_b", "y_b", "x_ref", "y_ref"},
                            {component(a, kX), component(a, kY), component(b, kX),
                             component(b, kY), ref_x, ref_y}));
    std::string deck = "polyline,x,y\n";
    for (std::size_t i = 0; i < e.deck.polylines.size(); ++i) {
      for (const auto& p : e.deck.polylines[i]) {
        deck += std::to_string(i) + "," + format_number(p.x()) + "," +
                format_number(p.y()) + "\n";
      }
    }
    write_file(out_path(e, "fig07_deck.csv"), deck);
    write_file(out_path(e, "fig08_deviation.csv"),
               series_table({"t_a", "deviation_a", "t_b", "deviation_b"},
                            {times(a), c.a.deviation.series, times(b),
                             c.b.deviation.series}));
    auto interior_times = [](const Trajectory& t) {
      std::vector<double> v;
      for (std::size_t k = 1; k + 1 < t.states.size(); ++k) v.push_back(k * t.dt);
      return v;
    };
    write_file(out_path(e, "fig09_jerk.csv"),
               series_table({"t_a", "jerk_a", "t_b", "jerk_b"},
                            {interior_times(a), c.a.jerk.series, interior_times(b),
                             c.b.jerk.series}));
    write_file(out_path(e, "fig10_work_thrust.csv"),
               series_table({"work_a", "work_b"},
                            {c.a.work.thrust_series, c.b.work.thrust_series}));
    write_file(out_path(e, "fig11_work_torque.csv"),
               series_table({"work_a", "work_b"},
                            {c.a.work.torque_series, c.b.work.torque_series}));
    write_file(out_path(e, "fig12_theta.csv"),
               series_table({"t_a", "theta_a", "t_b", "theta_b"},
                            {times(a), c.a.rotation.theta_series, times(b),
                             c.b.rotation.theta_series}));
    write_file(out_path(e, "fig13_omega.csv"),
               series_table({"t_a", "omega_a", "t_b", "omega_b"},
                            {times(a), c.a.rotation.omega_series, times(b),
                             c.b.rotation.omega_series}));

    out << "a: " << a_path << "\n" << format_report(c.a) << "\nb: " << b_path << "\n"
        << format_report(c.b) << "\n" << format_comparison(c);
    return kExitOk;
  });
}

int run_baseline(const std::string& config_path, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Experiment e = make_experiment(load_config(config_path));
    const BaselineRun run = baseline_controller(*e.truth, e.reference, e.s0);
    export_controls(out_path(e, "baseline_tape.csv"), run.tape);
    write_trajectory(out_path(e, "baseline_trajectory.csv"), run.trajectory);
    out << "baseline: real cost " << format_number(total_cost(e.cost, run.trajectory))
        << "\n";
    return trajectory_verdict(
        compute_report(run.trajectory, e.reference, e.deck, e.config.v_eps), err);
  });
}

}  // namespace craftddp
