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

#include "hydrosim/environment.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/scenario.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hydrosim;

namespace
{

SessionConfig straight_pipe(int max_steps = 60)
{
  SessionConfig cfg;
  cfg.render = false;
  cfg.scenario.layout.waypoints = {Vec3(0, 0, 10), Vec3(40, 0, 10)};
  cfg.scenario.max_steps = max_steps;
  return cfg;
}

}  // namespace

TEST(PipeLayout, LengthAndPointAt)
{
  const ScenarioConfig s;
  EXPECT_DOUBLE_EQ(s.layout.length(), 20.0);
  EXPECT_EQ(s.layout.point_at(0.0), Vec3(0, 0, 10));
  EXPECT_EQ(s.layout.point_at(11.0), Vec3(8, 3, 10));
  EXPECT_EQ(s.layout.point_at(-5.0), Vec3(0, 0, 10));
  EXPECT_EQ(s.layout.point_at(50.0), Vec3(14, 6, 10));
}

TEST(PipeLayout, Validation)
{
  PipeLayout p{{Vec3::Zero()}, 0.1};
  EXPECT_THROW(p.validate(), ConfigError);
  p.waypoints = {Vec3::Zero(), Vec3::Zero()};
  EXPECT_THROW(p.validate(), ConfigError);
  p.waypoints = {Vec3::Zero(), Vec3::UnitX()};
  EXPECT_NO_THROW(p.validate());
}

TEST(CrossTrack, Examples)
{
  const PipeLayout straight{{Vec3(0, 0, 10), Vec3(10, 0, 10)}, 0.1};
  CrossTrack ct = pipe_cross_track(Vec3(3, 0, 8), straight);
  EXPECT_EQ(ct.e_p, 0.0);
  EXPECT_NEAR(ct.arc_progress, 3.0, 1e-15);
  ct = pipe_cross_track(Vec3(4, 1, 2), straight);
  EXPECT_NEAR(ct.e_p, 1.0, 1e-15);
  EXPECT_LT((ct.direction - Vec3::UnitX()).norm(), 1e-15);

  const PipeLayout corner{{Vec3(0, 0, 0), Vec3(4, 0, 0), Vec3(4, 4, 0)}, 0.1};
  const Vec3 outside(4.0 + std::sqrt(2.0), -std::sqrt(2.0), 0.0);
  ct = pipe_cross_track(outside, corner);
  EXPECT_NEAR(ct.e_p, 2.0, 1e-12);
  EXPECT_NEAR(ct.arc_progress, 4.0, 1e-12);
}

TEST(CrossTrack, MatchesDenseSampling)
{
  oracle::Random rng(71);
  for (int i = 0; i < 100; ++i) {
    PipeLayout layout;
    const int n = 2 + static_cast<int>(rng.uniform(0, 4));
    for (int k = 0; k < n; ++k) {
      layout.waypoints.push_back(Vec3(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(5, 15)));
    }
    const Vec3 p(rng.uniform(-12, 12), rng.uniform(-12, 12), rng.uniform(0, 10));
    const CrossTrack ct = pipe_cross_track(p, layout);
    EXPECT_NEAR(ct.e_p, oracle::dense_cross_track(p, layout.waypoints, 10000), 1e-3);
    EXPECT_NEAR((ct.closest - layout.point_at(ct.arc_progress)).norm(), 0.0, 1e-9);
    EXPECT_NEAR(std::hypot(p.x() - ct.closest.x(), p.y() - ct.closest.y()), ct.e_p, 1e-9);
    EXPECT_NEAR(ct.direction.norm(), 1.0, 1e-12);
  }
}

TEST(HeadingError, Examples)
{
  EXPECT_NEAR(heading_error(0.3, Vec3(std::cos(0.3), std::sin(0.3), 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(heading_error(0.0, Vec3::UnitY()), kPi / 2.0, 1e-15);
  EXPECT_NEAR(heading_error(3.0, Vec3(std::cos(-3.0), std::sin(-3.0), 0)), 2.0 * kPi - 6.0, 1e-12);
  EXPECT_NEAR(heading_error(0.0, -Vec3::UnitX()), kPi, 1e-15);
}

TEST(Reward, Examples)
{
  EXPECT_EQ(reward(0.0, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(reward(1.0, 0.5), 7.0);
  EXPECT_DOUBLE_EQ(reward(2.5, 0.0), -2.5);
  for (int i = 1; i < 100; ++i) {
    EXPECT_LT(reward(0.05 * i, 0.3), reward(0.05 * (i - 1), 0.3));
    EXPECT_LT(reward(0.4, 0.03 * i), reward(0.4, 0.03 * (i - 1)));
  }
}

TEST(Termination, Boundaries)
{
  EXPECT_EQ(check_termination(2.6, 3, 200, 1.0, 20.0, 0.5), TerminationReason::kPipeLost);
  EXPECT_EQ(check_termination(2.5, 3, 200, 1.0, 20.0, 0.5), TerminationReason::kNone);
  EXPECT_EQ(check_termination(0.1, 200, 200, 1.0, 20.0, 0.5), TerminationReason::kMaxSteps);
  EXPECT_EQ(check_termination(0.1, 199, 200, 1.0, 20.0, 0.5), TerminationReason::kNone);
  EXPECT_EQ(check_termination(0.1, 10, 200, 19.5, 20.0, 0.5), TerminationReason::kGoalReached);
  EXPECT_EQ(check_termination(0.1, 10, 200, 19.4, 20.0, 0.5), TerminationReason::kNone);
  EXPECT_EQ(check_termination(3.0, 200, 200, 20.0, 20.0, 0.5), TerminationReason::kPipeLost);
  EXPECT_EQ(check_termination(0.0, 200, 200, 20.0, 20.0, 0.5), TerminationReason::kGoalReached);
  EXPECT_EQ(to_string(TerminationReason::kPipeLost), "pipe_lost");
  EXPECT_EQ(to_string(TerminationReason::kMaxSteps), "max_steps");
  EXPECT_EQ(to_string(TerminationReason::kGoalReached), "goal_reached");
}

TEST(Action, Clamping)
{
  const Action a = Action{3.0, -7.0}.clamped();
  EXPECT_EQ(a.a1, 1.0);
  EXPECT_EQ(a.a2, -1.0);
  EXPECT_THROW((Action{std::nan(""), 0.0}.clamped()), std::invalid_argument);
  EXPECT_THROW((Action{0.0, INFINITY}.clamped()), std::invalid_argument);
}

TEST(ApplyAction, Examples)
{
  VehicleState s;
  s.pose << 2, 3, 7, 0.1, -0.1, 0.4;
  Reference r = apply_action(s, {0, 0}, 8.0);
  EXPECT_NEAR(r.pose[0], 2 + std::cos(0.4), 1e-15);
  EXPECT_NEAR(r.pose[1], 3 + std::sin(0.4), 1e-15);
  EXPECT_EQ(r.pose[2], 8.0);
  EXPECT_EQ(r.pose[3], 0.0);
  EXPECT_EQ(r.pose[4], 0.0);
  EXPECT_NEAR(r.pose[5], 0.4, 1e-15);
  EXPECT_EQ(r.twist, Vec6::Zero());

  r = apply_action(s, {1, 0}, 8.0);
  EXPECT_NEAR(r.pose[0], 2 + std::cos(0.4 + kPi / 2), 1e-15);
  EXPECT_NEAR(r.pose[1], 3 + std::sin(0.4 + kPi / 2), 1e-15);
  EXPECT_NEAR(r.pose[5], 0.4, 1e-15);

  r = apply_action(s, {0, -1}, 8.0);
  EXPECT_NEAR(wrap_angle(r.pose[5] - (0.4 - kPi / 2)), 0.0, 1e-15);

  oracle::Random rng(72);
  for (int i = 0; i < 100; ++i) {
    const Action a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    r = apply_action(s, a, 8.0);
    EXPECT_NEAR(std::hypot(r.pose[0] - 2.0, r.pose[1] - 3.0), 1.0, 1e-12);
  }
}

TEST(ScriptedFollower, Signs)
{
  const PipeLayout straight{{Vec3(0, 0, 10), Vec3(20, 0, 10)}, 0.1};
  VehicleState s;
  s.pose << 5, 0, 8, 0, 0, 0;
  Action a = scripted_follower(s, straight);
  EXPECT_NEAR(a.a1, 0.0, 1e-12);
  EXPECT_NEAR(a.a2, 0.0, 1e-12);

  s.pose[1] = -1.0;  // left of the pipe when heading north
  a = scripted_follower(s, straight);
  EXPECT_GT(a.a1, 0.0);
  EXPECT_NEAR(a.a2, 0.0, 1e-12);

  s.pose << 5, 0, 8, 0, 0, 0.5;
  a = scripted_follower(s, straight);
  EXPECT_LT(a.a2, 0.0);
  EXPECT_LE(std::abs(a.a1), 1.0);
}

TEST(PipeScene, FloorBelowPipe)
{
  const ScenarioConfig s;
  const Scene scene = build_pipe_scene(s);
  ASSERT_FALSE(scene.primitives.empty());
  ASSERT_TRUE(std::holds_alternative<Plane>(scene.primitives.front()));
  const auto hit = scene.cast(Ray{Vec3(4, 0, 8), Vec3::UnitZ()});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->range, 2.0 - s.layout.radius, 1e-9);
  const auto floor = scene.cast(Ray{Vec3(4, 3, 8), Vec3::UnitZ()});
  ASSERT_TRUE(floor);
  EXPECT_NEAR(floor->range, 2.0 + s.layout.radius, 1e-9);
}

TEST(EpisodeCsv, Format)
{
  std::ostringstream out;
  format_episode_csv(out, {{1, 0.25, 0.5, 8.875}});
  EXPECT_EQ(out.str(), "step,e_p,e_psi,reward\n1,0.25,0.5,8.875\n");
}

TEST(Environment, StepBeforeResetIsStateError)
{
  Environment env(straight_pipe());
  EXPECT_THROW(env.step({0, 0}), StateError);
}

TEST(Environment, StraightAheadTracksPipe)
{
  Environment env(straight_pipe());
  env.reset(3);
  for (int i = 0; i < 12; ++i) {
    const StepResult r = env.step({0, 0});
    EXPECT_LT(r.observation.cross_track.e_p, 0.2);
    EXPECT_GT(r.reward, 0.0);
    EXPECT_TRUE(r.waypoint_reached);
    EXPECT_FALSE(r.status.terminated);
  }
  // each step settles within the waypoint tolerance, short of the full metre
  EXPECT_GT(env.state().pose[0], 12.0 * (1.0 - env.config().scenario.waypoint_tolerance) - 0.05);
  EXPECT_LT(env.state().pose[0], 12.0);
  EXPECT_NEAR(env.state().pose[2], 8.0, 0.1);
}

TEST(Environment, SidestepLosesPipe)
{
  Environment env(straight_pipe());
  env.reset(0);
  StepResult r;
  int steps = 0;
  do {
    r = env.step({1, 0});
    ++steps;
  } while (!r.status.terminated && steps < 10);
  EXPECT_TRUE(r.status.terminated);
  EXPECT_EQ(r.status.reason, TerminationReason::kPipeLost);
  EXPECT_LE(steps, 4);
  EXPECT_THROW(env.step({0, 0}), StateError);
}

TEST(Environment, FullTurnActionCirclesAndStaysBounded)
{
  Environment env(straight_pipe());
  env.reset(0);
  double max_ep = 0.0;
  for (int i = 0; i < 8; ++i) {
    const StepResult r = env.step({1, 1});
    max_ep = std::max(max_ep, r.observation.cross_track.e_p);
    ASSERT_FALSE(r.status.terminated);
  }
  EXPECT_LT(max_ep, 1.5);
  EXPECT_LT(env.state().position().head<2>().norm(), 0.2);
}

TEST(Environment, ResetAndStepsDeterministic)
{
  SessionConfig cfg = straight_pipe();
  cfg.scenario.initial_position_sigma = 0.2;
  cfg.scenario.initial_yaw_sigma = 0.1;
  cfg.vehicle.camera.width = 32;
  cfg.vehicle.camera.height = 18;
  cfg.render = true;
  const auto run = [&](std::uint64_t seed) {
      Environment env(cfg);
      const Observation first = env.reset(seed);
      std::vector<double> out{first.state.pose[0], first.state.pose[1], first.state.pose[5]};
      for (int i = 0; i < 4; ++i) {
        const StepResult r = env.step(scripted_follower(env.state(), cfg.scenario.layout));
        out.push_back(r.reward);
        out.insert(out.end(), r.observation.frame->rgb.data.begin(), r.observation.frame->rgb.data.end());
      }
      return out;
    };
  const auto a = run(7);
  EXPECT_EQ(a, run(7));
  const auto b = run(8);
  EXPECT_NE(a[0], b[0]);
}

TEST(Environment, TrajectoryIsValidTum)
{
  Environment env(straight_pipe());
  env.reset(0);
  env.step({0, 0});
  env.step({0, 0.3});
  std::stringstream tum;
  format_tum(tum, env.trajectory());
  const Trajectory back = parse_tum(tum);
  ASSERT_EQ(back.size(), env.trajectory().size());
  EXPECT_GT(back.size(), 2u);
  EXPECT_EQ(env.log().size(), 2u);
  EXPECT_EQ(env.log()[1].step, 2);
}
