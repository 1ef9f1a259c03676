// Copyright (c) 2026 The HydroSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hydrosim/scenario.hpp"

#include "hydrosim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hydrosim
{

void PipeLayout::validate() const
{
  if (waypoints.size() < 2) {
    throw ConfigError("at least two waypoints are required", "pipe.waypoints");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const std::string field = "pipe.waypoints[" + std::to_string(i) + "]";
    if (!waypoints[i].allFinite()) {
      throw ConfigError("must be finite", field);
    }
    if (i > 0 && (waypoints[i] - waypoints[i - 1]).norm() < 1e-9) {
      throw ConfigError("repeats the previous waypoint", field);
    }
  }
  if (!(radius > 0.0)) {
    throw ConfigError("must be > 0", "pipe.radius");
  }
}

double PipeLayout::length() const
{
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += (waypoints[i] - waypoints[i - 1]).norm();
  }
  return total;
}

Vec3 PipeLayout::point_at(double s) const
{
  if (s <= 0.0) {
    return waypoints.front();
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec3 d = waypoints[i] - waypoints[i - 1];
    const double len = d.norm();
    if (s <= len) {
      return waypoints[i - 1] + d * (s / len);
    }
    s -= len;
  }
  return waypoints.back();
}

CrossTrack pipe_cross_track(const Vec3 & position, const PipeLayout & layout)
{
  CrossTrack best;
  best.e_p = kInfinity;
  double arc = 0.0;
  for (std::size_t i = 1; i < layout.waypoints.size(); ++i) {
    const Vec3 & a = layout.waypoints[i - 1];
    const Vec3 & b = layout.waypoints[i];
    const Vec3 d = b - a;
    const double len = d.norm();
    const Eigen::Vector2d dh = d.head<2>();
    const Eigen::Vector2d rel = (position - a).head<2>();
    const double hh = dh.squaredNorm();
    const double t = hh > 0.0 ? std::clamp(rel.dot(dh) / hh, 0.0, 1.0) : 0.0;
    const double dist = (rel - t * dh).norm();
    if (dist < best.e_p) {
      best.e_p = dist;
      best.direction = d / len;
      best.arc_progress = arc + t * len;
      best.closest = a + t * d;
    }
    arc += len;
  }
  return best;
}

double heading_error(double psi, const Vec3 & pipe_direction)
{
  const double bearing = std::atan2(pipe_direction.y(), pipe_direction.x());
  return std::abs(wrap_angle(psi - bearing));
}

double reward(double e_p, double e_psi)
{
  return 10.0 - 2.0 * e_p * e_p - 2.0 * e_psi;
}

std::string to_string(TerminationReason reason)
{
  switch (reason) {
    case TerminationReason::kNone: return "none";
    case TerminationReason::kPipeLost: return "pipe_lost";
    case TerminationReason::kMaxSteps: return "max_steps";
    case TerminationReason::kGoalReached: return "goal_reached";
  }
  return "none";
}

TerminationReason check_termination(
  double e_p, int step, int max_steps, double arc_progress, double total_length,
  double goal_tolerance)
{
  if (e_p > kPipeLostDistance) {
    return TerminationReason::kPipeLost;
  }
  if (arc_progress >= total_length - goal_tolerance) {
    return TerminationReason::kGoalReached;
  }
  if (step >= max_steps) {
    return TerminationReason::kMaxSteps;
  }
  return TerminationReason::kNone;
}

Action Action::clamped() const
{
  if (!std::isfinite(a1) || !std::isfinite(a2)) {
    throw std::invalid_argument("action components must be finite");
  }
  return {std::clamp(a1, -1.0, 1.0), std::clamp(a2, -1.0, 1.0)};
}

Reference apply_action(
  const VehicleState & state, const Action & action, double target_z, double step_length)
{
  const Action a = action.clamped();
  const double psi = state.pose[5];
  const double bearing = psi + a.a1 * kPi / 2.0;
  Reference ref;
  ref.pose << state.pose[0] + step_length * std::cos(bearing),
    state.pose[1] + step_length * std::sin(bearing),
    target_z, 0.0, 0.0, wrap_angle(psi + a.a2 * kPi / 2.0);
  return ref;
}

Action scripted_follower(const VehicleState & state, const PipeLayout & layout, double lookahead)
{
  const CrossTrack ct = pipe_cross_track(state.position(), layout);
  const Vec3 target = layout.point_at(ct.arc_progress + lookahead);
  const double psi = state.pose[5];
  const double alpha = std::atan2(target.y() - state.pose[1], target.x() - state.pose[0]);
  const double bearing = std::atan2(ct.direction.y(), ct.direction.x());
  return Action{
    wrap_angle(alpha - psi) / (kPi / 2.0),
    wrap_angle(bearing - psi) / (kPi / 2.0)}.clamped();
}

void ScenarioConfig::validate() const
{
  layout.validate();
  if (!initial_pose.allFinite()) {
    throw ConfigError("must be finite", "initial_pose");
  }
  if (!(initial_position_sigma >= 0.0)) {
    throw ConfigError("must be >= 0", "initial_jitter.position_sigma");
  }
  if (!(initial_yaw_sigma >= 0.0)) {
    throw ConfigError("must be >= 0", "initial_jitter.yaw_sigma");
  }
  if (!std::isfinite(altitude)) {
    throw ConfigError("must be finite", "altitude");
  }
  if (max_steps < 1) {
    throw ConfigError("must be >= 1", "max_steps");
  }
  if (!(goal_tolerance >= 0.0)) {
    throw ConfigError("must be >= 0", "goal_tolerance");
  }
  if (!(step_length > 0.0)) {
    throw ConfigError("must be > 0", "step_length");
  }
  if (!(waypoint_tolerance > 0.0)) {
    throw ConfigError("must be > 0", "waypoint_tolerance");
  }
  if (!(waypoint_timeout > 0.0)) {
    throw ConfigError("must be > 0", "waypoint_timeout");
  }
}

Scene build_pipe_scene(const ScenarioConfig & scenario)
{
  Scene scene = scenario.extra;
  const auto & pts = scenario.layout.waypoints;
  double floor_z = -kInfinity;
  for (const auto & p : pts) {
    floor_z = std::max(floor_z, p.z());
  }
  const double r = scenario.layout.radius;
  scene.primitives.insert(
    scene.primitives.begin(), Plane{Vec3(0.0, 0.0, floor_z + r), -Vec3::UnitZ(), scenario.floor_albedo});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    scene.primitives.emplace_back(Cylinder{pts[i - 1], pts[i], r, scenario.pipe_albedo});
  }
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    scene.primitives.emplace_back(Sphere{pts[i], r, scenario.pipe_albedo});
  }
  return scene;
}

}  // namespace hydrosim
