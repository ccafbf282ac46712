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

#include "craftddp/task.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace craftddp {

namespace {

void require(bool ok, const char* invariant) {
  if (!ok) throw std::invalid_argument(std::string("violated: ") + invariant);
}

bool symmetric(const Eigen::MatrixXd& m) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <=
                                     1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

bool psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().minCoeff() >= -1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

double softplus(double z) {
  const double t = z / kLimitSoftness;
  const double v = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  return kLimitSoftness * v;
}

double sigmoid(double z) {
  const double t = z / kLimitSoftness;
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// g(z) = softplus(z)^2 and its first two derivatives.
struct SquaredSoftplus {
  double value, d1, d2;
};

SquaredSoftplus squared_softplus(double z) {
  const double sp = softplus(z);
  const double sg = sigmoid(z);
  return {sp * sp, 2.0 * sp * sg,
          2.0 * sg * sg + 2.0 * sp * sg * (1.0 - sg) / kLimitSoftness};
}

}  // namespace

void ReferenceTrajectory::validate() const {
  require(dt > 0.0, "dt > 0");
  require(targets.size() >= 2, "reference length >= 2");
  for (const auto& t : targets) {
    require(t.allFinite(), "finite reference");
    require(t.size() == targets.front().size(), "consistent target size");
  }
}

void DeckGeometry::validate() const {
  require(!polylines.empty(), "deck has at least one polyline");
  for (const auto& pl : polylines) {
    require(pl.size() >= 2, "polyline has >= 2 points");
  }
  require(craft_radius > 0.0, "craft_radius > 0");
}

void CostModel::validate() const {
  reference.validate();
  const auto n = q.rows();
  const auto m = r.rows();
  require(q.cols() == n && q_final.rows() == n && q_final.cols() == n &&
              r.cols() == m,
          "cost matrix dimensions");
  require(reference.targets.front().size() == n, "reference dimension");
  require(symmetric(q) && psd(q), "Q symmetric PSD");
  require(symmetric(q_final) && psd(q_final), "Q_f symmetric PSD");
  require(symmetric(r) && Eigen::LLT<Eigen::MatrixXd>(r).info() == Eigen::Success,
          "R symmetric PD");
  require(control_limit_weight >= 0.0, "control_limit_weight >= 0");
  require(control_lower.size() == m && control_upper.size() == m,
          "control limit dimensions");
  require((control_lower.array() <= control_upper.array()).all(),
          "control_lower <= control_upper");
}

double limit_penalty(double u, double lower, double upper) {
  double p = 0.0;
  if (std::isfinite(upper)) p += squared_softplus(u - upper).value;
  if (std::isfinite(lower)) p += squared_softplus(lower - u).value;
  return p;
}

CostModel make_craft_cost(const ReferenceTrajectory& reference,
                          const CostWeights& w, const CraftParams& params) {
  using namespace state_index;
  CostModel c;
  c.q = Eigen::MatrixXd::Zero(kCraftStateDim, kCraftStateDim);
  c.q(kX, kX) = c.q(kY, kY) = w.position;
  c.q(kTheta, kTheta) = w.theta;
  c.q(kVx, kVx) = c.q(kVy, kVy) = w.velocity;
  c.q(kOmega, kOmega) = w.omega;
  c.q_final = w.terminal_scale * c.q;
  if (w.terminal_velocity >= 0.0) {
    c.q_final(kVx, kVx) = c.q_final(kVy, kVy) = w.terminal_velocity;
  }
  c.r = Eigen::Vector2d(w.thrust, w.torque).asDiagonal();
  c.reference = reference;
  c.control_limit_weight = w.control_limit;
  c.control_lower = Eigen::Vector2d(0.0, -params.torque_max);
  c.control_upper = Eigen::Vector2d(params.thrust_max, params.torque_max);
  c.validate();
  return c;
}

ReferenceTrajectory build_reference(const std::vector<Point2>& waypoints,
                                    int horizon, double dt,
                                    std::optional<double> speed) {
  using namespace state_index;
  require(waypoints.size() >= 2, "at least 2 waypoints");
  require(horizon >= 1, "H >= 1");
  require(dt > 0.0, "dt > 0");
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    cum.push_back(cum.back() + (waypoints[i] - waypoints[i - 1]).norm());
  }
  const double length = cum.back();
  if (!(length > 0.0)) {
    throw std::invalid_argument("build_reference: degenerate zero-length path");
  }

  auto point_at = [&](double s) -> Point2 {
    s = std::clamp(s, 0.0, length);
    auto it = std::lower_bound(cum.begin() + 1, cum.end(), s);
    if (it == cum.end()) it = cum.end() - 1;
    const auto seg = static_cast<std::size_t>(it - cum.begin());
    const double seg_len = cum[seg] - cum[seg - 1];
    if (seg_len <= 0.0) return waypoints[seg];
    const double t = (s - cum[seg - 1]) / seg_len;
    return waypoints[seg - 1] + t * (waypoints[seg] - waypoints[seg - 1]);
  };

  std::vector<Point2> pos;
  pos.reserve(static_cast<std::size_t>(horizon) + 1);
  for (int k = 0; k <= horizon; ++k) {
    const double s = speed ? std::min(*speed * k * dt, length)
                           : length * static_cast<double>(k) / horizon;
    pos.push_back(point_at(s));
  }

  ReferenceTrajectory ref;
  ref.dt = dt;
  for (int k = 0; k <= horizon; ++k) {
    const Point2 vel = k < horizon ? Point2((pos[k + 1] - pos[k]) / dt)
                                   : Point2((pos[k] - pos[k - 1]) / dt);
    State t = State::Zero(kCraftStateDim);
    t(kX) = pos[k].x();
    t(kY) = pos[k].y();
    t(kVx) = vel.x();
    t(kVy) = vel.y();
    ref.targets.push_back(std::move(t));
  }
  return ref;
}

double running_cost(const CostModel& cost, const State& x, const Control& u,
                    int k) {
  const Eigen::VectorXd e = x - cost.reference.targets[k];
  double l = e.dot(cost.q * e) + u.dot(cost.r * u);
  if (cost.control_limit_weight > 0.0) {
    double p = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      p += limit_penalty(u(i), cost.control_lower(i), cost.control_upper(i));
    }
    l += cost.control_limit_weight * p;
  }
  return l;
}

double terminal_cost(const CostModel& cost, const State& x) {
  const Eigen::VectorXd e = x - cost.reference.targets.back();
  return e.dot(cost.q_final * e);
}

double total_cost(const CostModel& cost, const Trajectory& traj) {
  if (traj.horizon() != cost.horizon() ||
      traj.states.size() != traj.controls.size() + 1) {
    throw std::invalid_argument("total_cost: horizon mismatch");
  }
  double j = 0.0;
  for (int k = 0; k < traj.horizon(); ++k) {
    j += running_cost(cost, traj.states[k], traj.controls[k], k);
  }
  return j + terminal_cost(cost, traj.states.back());
}

CostExpansion quadratize(const CostModel& cost, const State& x,
                         const Control& u, int k) {
  const Eigen::VectorXd e = x - cost.reference.targets[k];
  CostExpansion ex;
  ex.l = running_cost(cost, x, u, k);
  ex.l_x = 2.0 * cost.q * e;
  ex.l_u = 2.0 * cost.r * u;
  ex.l_xx = 2.0 * cost.q;
  ex.l_xu = Eigen::MatrixXd::Zero(x.size(), u.size());
  ex.l_uu = 2.0 * cost.r;
  if (cost.control_limit_weight > 0.0) {
    const double w = cost.control_limit_weight;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (std::isfinite(cost.control_upper(i))) {
        const auto g = squared_softplus(u(i) - cost.control_upper(i));
        ex.l_u(i) += w * g.d1;
        ex.l_uu(i, i) += w * g.d2;
      }
      if (std::isfinite(cost.control_lower(i))) {
        const auto g = squared_softplus(cost.control_lower(i) - u(i));
        ex.l_u(i) -= w * g.d1;
        ex.l_uu(i, i) += w * g.d2;
      }
    }
  }
  return ex;
}

CostExpansion quadratize_terminal(const CostModel& cost, const State& x) {
  const Eigen::VectorXd e = x - cost.reference.targets.back();
  CostExpansion ex;
  ex.l = e.dot(cost.q_final * e);
  ex.l_x = 2.0 * cost.q_final * e;
  ex.l_xx = 2.0 * cost.q_final;
  return ex;
}

Point2 nearest_point_on_segment(const Point2& p, const Point2& a,
                                const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double distance_to_segment(const Point2& p, const Point2& a, const Point2& b) {
  // Endpoints in a fixed order so reversed polylines give identical results.
  const bool swap = std::make_pair(b.x(), b.y()) < std::make_pair(a.x(), a.y());
  const Point2& s = swap ? b : a;
  const Point2& e = swap ? a : b;
  const Point2 d = e - s;
  const Point2 w = p - s;
  const double len2 = d.squaredNorm();
  const double proj = w.dot(d);
  if (len2 == 0.0 || proj <= 0.0) return w.norm();
  if (proj >= len2) return (p - e).norm();
  return std::abs(d.x() * w.y() - d.y() * w.x()) / std::sqrt(len2);
}

double min_distance_to_deck(const Point2& p, const DeckGeometry& deck) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pl : deck.polylines) {
    for (std::size_t i = 1; i < pl.size(); ++i) {
      best = std::min(best, distance_to_segment(p, pl[i - 1], pl[i]));
    }
  }
  return best;
}

}  // namespace craftddp
