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

/**
 * @file scenario.hpp
 * @brief Pipe-inspection world: cross-track geometry, waypoint actions, reward and
 * termination, plus a pure-pursuit follower used as a baseline agent.
 */

#pragma once

#include "hydrosim/control.hpp"
#include "hydrosim/dynamics.hpp"
#include "hydrosim/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hydrosim
{

/// Pipe centreline as a polyline in NED.
struct PipeLayout
{
  std::vector<Vec3> waypoints;
  double radius{0.15};

  /// Throws ConfigError for fewer than two points or repeated consecutive points.
  void validate() const;
  double length() const;
  /// Point at arclength s, clamped to the ends.
  Vec3 point_at(double s) const;
};

struct CrossTrack
{
  double e_p{0.0};             // horizontal distance to the centreline [m]
  Vec3 direction{Vec3::UnitX()};
  double arc_progress{0.0};    // arclength of the closest point [m]
  Vec3 closest{Vec3::Zero()};
};

CrossTrack pipe_cross_track(const Vec3 & position, const PipeLayout & layout);

/// |shortest angle| between yaw and the horizontal bearing of `pipe_direction`, in [0, pi].
double heading_error(double psi, const Vec3 & pipe_direction);

/// 10 - 2 e_p^2 - 2 e_psi.
double reward(double e_p, double e_psi);

enum class TerminationReason { kNone, kPipeLost, kMaxSteps, kGoalReached };

std::string to_string(TerminationReason reason);

inline constexpr double kPipeLostDistance = 2.5;

/// Precedence when several conditions hold: pipe_lost, goal_reached, max_steps.
TerminationReason check_termination(
  double e_p, int step, int max_steps, double arc_progress, double total_length,
  double goal_tolerance);

struct Action
{
  double a1{0.0};  // direction of the position step
  double a2{0.0};  // heading turn

  /// Clamps both components to [-1, 1]. Throws std::invalid_argument for NaN or inf.
  Action clamped() const;
};

struct EpisodeStatus
{
  int step{0};
  double cumulative_reward{0.0};
  bool terminated{false};
  TerminationReason reason{TerminationReason::kNone};
};

/// Waypoint `step_length` away at bearing psi + a1 pi/2, yaw psi + a2 pi/2, depth `target_z`,
/// level attitude and zero velocity.
Reference apply_action(
  const VehicleState & state, const Action & action, double target_z, double step_length = 1.0);

inline constexpr double kFollowerLookahead = 2.0;

/// Pure pursuit towards the centreline point `lookahead` ahead of the closest point.
Action scripted_follower(
  const VehicleState & state, const PipeLayout & layout, double lookahead = kFollowerLookahead);

struct ScenarioConfig
{
  std::string name{"pipe"};
  PipeLayout layout{{Vec3(0.0, 0.0, 10.0), Vec3(8.0, 0.0, 10.0), Vec3(8.0, 6.0, 10.0), Vec3(14.0, 6.0, 10.0)}, 0.15};
  Vec6 initial_pose{(Vec6() << 0.0, 0.0, 8.0, 0.0, 0.0, 0.0).finished()};
  /// Gaussian jitter of the initial x, y and yaw, drawn from the episode seed.
  double initial_position_sigma{0.0};
  double initial_yaw_sigma{0.0};
  double altitude{2.0};          // above the pipe centreline [m]
  int max_steps{200};
  std::uint64_t seed{0};
  double goal_tolerance{0.5};
  double step_length{1.0};
  double waypoint_tolerance{0.1};
  double waypoint_timeout{10.0};
  Vec3 pipe_albedo{0.85, 0.55, 0.15};
  Vec3 floor_albedo{0.55, 0.5, 0.4};
  DisturbanceModel disturbance;
  /// Extra primitives and lighting merged into the generated pipe scene.
  Scene extra;

  void validate() const;
};

/// Sea floor touching the pipe bottom, one cylinder per segment and a sphere at each joint.
Scene build_pipe_scene(const ScenarioConfig & scenario);

}  // namespace hydrosim
