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

#include "craftddp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace craftddp {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::vector<std::string> kSections = {"craft", "model",   "task",  "ddp",
                                            "learner", "metrics", "output"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& raw, int line) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError("expected a number, got '" + s + "'", line);
  }
  return v;
}

int to_int(const std::string& raw, int line) {
  const double v = to_number(raw, line);
  if (v != static_cast<double>(static_cast<long long>(v)) ||
      std::abs(v) > std::numeric_limits<int>::max()) {
    throw ConfigError("expected an integer, got '" + trim(raw) + "'", line);
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("expected true or false, got '" + s + "'", line);
}

std::vector<double> to_vector(const std::string& raw, int line) {
  std::vector<double> out;
  for (const auto& item : split(raw, ',')) out.push_back(to_number(item, line));
  return out;
}

std::vector<Point2> to_points(const std::string& raw, int line) {
  std::vector<Point2> out;
  for (const auto& item : split(raw, ';')) {
    if (item.empty()) continue;
    const auto xy = to_vector(item, line);
    if (xy.size() != 2) throw ConfigError("expected an 'x,y' pair, got '" + item + "'", line);
    out.emplace_back(xy[0], xy[1]);
  }
  return out;
}

using Setter = std::function<void(const std::string&, int)>;

void apply(const std::string& name, const Section& section,
           const std::map<std::string, Setter>& setters) {
  for (const auto& [key, entry] : section) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + name + "]", entry.line);
    }
    it->second(entry.value, entry.line);
  }
}

std::map<std::string, Setter> craft_setters(CraftParams& p) {
  auto num = [](double& field) {
    return [&field](const std::string& v, int line) { field = to_number(v, line); };
  };
  return {{"mass", num(p.mass)},
          {"inertia", num(p.inertia)},
          {"gravity", num(p.gravity)},
          {"linear_drag", num(p.linear_drag)},
          {"thrust_max", num(p.thrust_max)},
          {"torque_max", num(p.torque_max)}};
}

template <typename F>
void checked(const std::string& where, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what(), 0);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  checked("craft", [&] { craft.validate(); });
  checked("model", [&] { model.validate(); });
  checked("ddp", [&] { ddp.validate(); });
  checked("learner", [&] { learner.validate(); });
  auto fail = [](const std::string& what) {
    throw ConfigError("task: violated: " + what, 0);
  };
  if (task.waypoints.size() < 2) fail("at least 2 waypoints");
  if (task.horizon < 1) fail("horizon >= 1");
  if (!(task.dt > 0.0)) fail("dt > 0");
  if (task.speed && !(*task.speed > 0.0)) fail("speed > 0");
  if (task.initial_state && task.initial_state->size() != kCraftStateDim) {
    fail("initial_state has 6 components");
  }
  if (!(task.craft_radius > 0.0)) fail("craft_radius > 0");
  for (const auto& pl : task.deck) {
    if (pl.size() < 2) fail("deck polyline has >= 2 points");
  }
  const CostWeights& w = task.weights;
  if (w.position < 0 || w.velocity < 0 || w.theta < 0 || w.omega < 0 ||
      w.terminal_scale < 0 || w.control_limit < 0) {
    fail("state weights >= 0");
  }
  if (!(w.thrust > 0.0) || !(w.torque > 0.0)) fail("control weights > 0");
  if (!(v_eps > 0.0)) throw ConfigError("metrics: violated: v_eps > 0", 0);
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      current = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), current) == kSections.end()) {
        throw ConfigError("unknown section [" + current + "]", line_no);
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    if (current.empty()) throw ConfigError("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    auto& section = sections[current];
    if (const auto it = section.find(key); it != section.end()) {
      throw ConfigError("duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second.line) + ")",
                        line_no);
    }
    section.emplace(key, Entry{value, line_no});
  }

  ExperimentConfig cfg;
  apply("craft", sections["craft"], craft_setters(cfg.craft));
  cfg.model = cfg.craft;
  cfg.model.gravity = 0.0;
  apply("model", sections["model"], craft_setters(cfg.model));

  TaskConfig& t = cfg.task;
  CostWeights& w = t.weights;
  auto num = [](double& field) {
    return [&field](const std::string& v, int line) { field = to_number(v, line); };
  };
  bool have_waypoints = false, have_horizon = false, have_dt = false;
  apply("task", sections["task"],
        {{"waypoints",
          [&](const std::string& v, int line) {
            t.waypoints = to_points(v, line);
            have_waypoints = true;
          }},
         {"horizon",
          [&](const std::string& v, int line) {
            t.horizon = to_int(v, line);
            have_horizon = true;
          }},
         {"dt",
          [&](const std::string& v, int line) {
            t.dt = to_number(v, line);
            have_dt = true;
          }},
         {"speed", [&](const std::string& v, int line) { t.speed = to_number(v, line); }},
         {"initial_state",
          [&](const std::string& v, int line) {
            const auto xs = to_vector(v, line);
            if (xs.size() != kCraftStateDim) {
              throw ConfigError("initial_state needs 6 numbers", line);
            }
            t.initial_state = Eigen::Map<const Eigen::VectorXd>(xs.data(), 6);
          }},
         {"position_weight", num(w.position)},
         {"velocity_weight", num(w.velocity)},
         {"theta_weight", num(w.theta)},
         {"omega_weight", num(w.omega)},
         {"thrust_weight", num(w.thrust)},
         {"torque_weight", num(w.torque)},
         {"terminal_scale", num(w.terminal_scale)},
         {"terminal_velocity_weight", num(w.terminal_velocity)},
         {"control_limit_weight", num(w.control_limit)},
         {"deck",
          [&](const std::string& v, int line) {
            for (const auto& pl : split(v, '|')) t.deck.push_back(to_points(pl, line));
          }},
         {"craft_radius", num(t.craft_radius)}});
  if (!have_waypoints) throw ConfigError("[task] requires 'waypoints'", 0);
  if (!have_horizon) throw ConfigError("[task] requires 'horizon'", 0);
  if (!have_dt) throw ConfigError("[task] requires 'dt'", 0);

  DdpOptions& d = cfg.ddp;
  apply("ddp", sections["ddp"],
        {{"max_iterations",
          [&](const std::string& v, int line) { d.max_iterations = to_int(v, line); }},
         {"cost_tolerance", num(d.cost_tolerance)},
         {"lambda_init", num(d.lambda_init)},
         {"lambda_factor", num(d.lambda_factor)},
         {"lambda_max", num(d.lambda_max)},
         {"step_ladder",
          [&](const std::string& v, int line) { d.step_ladder = to_vector(v, line); }},
         {"second_order",
          [&](const std::string& v, int line) { d.second_order = to_bool(v, line); }}});

  LearnerOptions& l = cfg.learner;
  apply("learner", sections["learner"],
        {{"epsilon", num(l.epsilon)},
         {"n_stall", [&](const std::string& v, int line) { l.n_stall = to_int(v, line); }},
         {"max_iterations",
          [&](const std::string& v, int line) { l.max_iterations = to_int(v, line); }},
         {"alpha_ladder",
          [&](const std::string& v, int line) { l.alpha_ladder = to_vector(v, line); }}});
  l.ddp = cfg.ddp;

  apply("metrics", sections["metrics"], {{"v_eps", num(cfg.v_eps)}});
  apply("output", sections["output"],
        {{"directory", [&](const std::string& v, int) { cfg.output_dir = v; }},
         {"seed", [&](const std::string& v, int line) {
            const int s = to_int(v, line);
            if (s < 0) throw ConfigError("seed must be >= 0", line);
            cfg.seed = static_cast<std::uint64_t>(s);
          }}});

  if (t.deck.empty() && !t.waypoints.empty()) {
    double lo = t.waypoints.front().x(), hi = lo;
    for (const auto& p : t.waypoints) {
      lo = std::min(lo, p.x());
      hi = std::max(hi, p.x());
    }
    t.deck.push_back({Point2(lo - 100.0, 0.0), Point2(hi + 100.0, 0.0)});
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace craftddp
