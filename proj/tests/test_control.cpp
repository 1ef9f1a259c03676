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

#include "hydrosim/config.hpp"
#include "hydrosim/control.hpp"
#include "hydrosim/errors.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace hydrosim;

namespace
{

DynamicsParams unit_point_mass()
{
  DynamicsParams p;
  p.rigid_body.mass = 1.0;
  p.rigid_body.inertia = Mat3::Identity();
  return p;
}

Eigen::VectorXd stack(const MpcSolution & s)
{
  Eigen::VectorXd u(6 * static_cast<Eigen::Index>(s.wrenches.size()));
  for (std::size_t k = 0; k < s.wrenches.size(); ++k) {
    u.segment<6>(6 * static_cast<Eigen::Index>(k)) = s.wrenches[k].vector();
  }
  return u;
}

bool within_bounds(const MpcSolution & s, const MpcConfig & cfg)
{
  for (const auto & w : s.wrenches) {
    const Vec6 v = w.vector();
    if ((v.array() < cfg.wrench_min.array()).any() || (v.array() > cfg.wrench_max.array()).any()) {
      return false;
    }
  }
  return true;
}

/// Exhaustive active-set enumeration for a 2-variable box QP.
Eigen::Vector2d brute_force_box_qp(
  const Eigen::Matrix2d & h, const Eigen::Vector2d & g, const Eigen::Vector2d & lo,
  const Eigen::Vector2d & hi)
{
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector2d arg = lo;
  for (int s0 = 0; s0 < 3; ++s0) {
    for (int s1 = 0; s1 < 3; ++s1) {
      const std::array<int, 2> mode{s0, s1};
      Eigen::Vector2d x;
      std::vector<int> free;
      for (int i = 0; i < 2; ++i) {
        const auto m = mode[static_cast<std::size_t>(i)];
        if (m == 0) {x[i] = lo[i];} else if (m == 1) {x[i] = hi[i];} else {free.push_back(i);}
      }
      if (free.size() == 2) {
        x = h.ldlt().solve(-g);
      } else if (free.size() == 1) {
        const int f = free[0];
        const int o = 1 - f;
        x[f] = -(g[f] + h(f, o) * x[o]) / h(f, f);
      }
      if ((x.array() < lo.array() - 1e-12).any() || (x.array() > hi.array() + 1e-12).any()) {
        continue;
      }
      const double c = 0.5 * x.dot(h * x) + g.dot(x);
      if (c < best) {
        best = c;
        arg = x;
      }
    }
  }
  return arg;
}

}  // namespace

TEST(MpcConfig, Validation)
{
  MpcConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.horizon = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.input_weight = Mat6::Zero();
  try {
    cfg.validate();
    FAIL();
  } catch (const ConfigError & e) {
    EXPECT_EQ(e.field().rfind("mpc.", 0), 0u);
  }
  cfg = {};
  cfg.wrench_min[2] = cfg.wrench_max[2];
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(PoseError, WrapsAngles)
{
  const Vec6 e = pose_error((Vec6() << 1, 0, 0, 0, 0, 3.1).finished(),
      (Vec6() << 0, 0, 0, 0, 0, -3.1).finished());
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_NEAR(e[5], 6.2 - 2.0 * kPi, 1e-12);
}

TEST(BoxQp, MatchesEnumeration)
{
  oracle::Random rng(41);
  for (int i = 0; i < 200; ++i) {
    Eigen::Matrix2d a;
    a << rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2);
    MpcProblem p;
    p.hessian = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
    p.gradient = Eigen::Vector2d(rng.uniform(-5, 5), rng.uniform(-5, 5));
    p.lower = Eigen::Vector2d(-1, -0.5);
    p.upper = Eigen::Vector2d(0.7, 1);
    const auto r = solve_box_qp(p, 200, 1e-10);
    ASSERT_TRUE(r.converged);
    const Eigen::Vector2d want = brute_force_box_qp(p.hessian, p.gradient, p.lower, p.upper);
    EXPECT_LT((r.solution - want).norm(), 1e-8) << "case " << i;
  }
}

TEST(SolveWrench, AtTargetIsHoverOnly)
{
  const auto v = bluerov2_heavy();
  DynamicsModel model(v.dynamics);
  VehicleState s;
  s.pose << 2, -1, 5, 0, 0, 0.3;
  Reference ref{s.pose, Vec6::Zero()};
  const MpcSolution sol = solve_wrench(s, ref, MpcConfig{}, model);
  EXPECT_LT(sol.first().vector().cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_FALSE(sol.used_fallback);
}

TEST(SolveWrench, HoverCompensationWhenHeavy)
{
  DynamicsParams p = unit_point_mass();
  p.rigid_body.weight = 3.0;
  p.rigid_body.buoyancy = 1.0;
  DynamicsModel model(p);
  VehicleState s;
  Reference ref{s.pose, Vec6::Zero()};
  MpcConfig cfg;
  cfg.input_weight = 1e-6 * Mat6::Identity();
  const MpcSolution sol = solve_wrench(s, ref, cfg, model);
  EXPECT_NEAR(sol.first().force[2], -2.0, 1e-2);
}

TEST(SolveWrench, DoubleIntegratorMatchesLqr)
{
  DynamicsModel model(unit_point_mass());
  MpcConfig cfg;
  cfg.wrench_min = Vec6::Constant(-1e9);
  cfg.wrench_max = Vec6::Constant(1e9);
  VehicleState s;
  Reference ref;
  ref.pose[0] = 1.0;
  const MpcSolution sol = solve_wrench(s, ref, cfg, model);

  const double dt = cfg.control_period;
  Eigen::Matrix2d a;
  a << 1, dt, 0, 1;
  const Eigen::Vector2d b(0.5 * dt * dt, dt);
  const Eigen::Matrix2d q = Eigen::Vector2d(cfg.pose_weight(0, 0), 0.0).asDiagonal();
  const double u0 = oracle::lqr_first_input(a, b, q, cfg.input_weight(0, 0), cfg.horizon,
      Eigen::Vector2d(-1.0, 0.0));
  EXPECT_GT(sol.first().force[0], 0.0);
  EXPECT_NEAR(sol.first().force[0], u0, 1e-6 * std::abs(u0));
  EXPECT_LT(sol.first().vector().tail<5>().cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SolveWrench, DoubleIntegratorClosedLoopConverges)
{
  DynamicsModel model(unit_point_mass());
  MpcConfig cfg;
  VehicleState s;
  Reference ref;
  ref.pose[0] = 1.0;
  const int substeps = static_cast<int>(std::lround(cfg.control_period / kDefaultPhysicsDt));
  for (int k = 0; k < 200; ++k) {
    const MpcSolution sol = solve_wrench(s, ref, cfg, model);
    ASSERT_TRUE(within_bounds(sol, cfg));
    for (int i = 0; i < substeps; ++i) {
      s = step(s, model, sol.first());
    }
  }
  EXPECT_LT(std::abs(s.pose[0] - 1.0), 0.05);
  EXPECT_LT(std::abs(s.twist[0]), 0.05);
}

TEST(SolveWrench, TightBoundsRespected)
{
  DynamicsModel model(bluerov2_heavy().dynamics);
  MpcConfig cfg;
  cfg.wrench_min = Vec6::Constant(-0.1);
  cfg.wrench_max = Vec6::Constant(0.1);
  VehicleState s;
  Reference ref;
  ref.pose << 50, -30, 20, 0.5, -0.5, 2.0;
  const MpcSolution sol = solve_wrench(s, ref, cfg, model);
  EXPECT_EQ(sol.wrenches.size(), static_cast<std::size_t>(cfg.horizon));
  EXPECT_TRUE(within_bounds(sol, cfg));
}

TEST(SolveWrench, CostNoWorseThanZeroOrFallback)
{
  DynamicsModel model(bluerov2_heavy().dynamics);
  const MpcConfig cfg;
  oracle::Random rng(42);
  for (int i = 0; i < 25; ++i) {
    VehicleState s;
    s.pose << rng.vec3(-2, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-3, 3);
    s.twist = rng.vec6(-0.5, 0.5);
    Reference ref;
    ref.pose << rng.vec3(-2, 2), 0, 0, rng.uniform(-3, 3);
    const MpcProblem p = build_problem(s, ref, cfg, model);
    const MpcSolution sol = solve_wrench(s, ref, cfg, model);
    const Eigen::VectorXd u = stack(sol);
    EXPECT_NEAR(sol.cost, p.cost(u), 1e-9 * std::max(1.0, std::abs(sol.cost)));
    EXPECT_LE(sol.cost, p.cost(Eigen::VectorXd::Zero(u.size())) + 1e-9);
    EXPECT_LE(sol.cost, p.cost(fallback_sequence(s, ref, cfg)) + 1e-9);
    EXPECT_TRUE(within_bounds(sol, cfg));
  }
}

TEST(SolveWrench, IterationCapTriggersFallback)
{
  DynamicsModel model(bluerov2_heavy().dynamics);
  MpcConfig cfg;
  cfg.max_iterations = 1;
  cfg.wrench_min = Vec6::Constant(-0.5);
  cfg.wrench_max = Vec6::Constant(0.5);
  VehicleState s;
  Reference ref;
  ref.pose << 5, 5, 5, 0, 0, 1;
  const MpcSolution sol = solve_wrench(s, ref, cfg, model);
  EXPECT_TRUE(sol.used_fallback);
  EXPECT_TRUE(within_bounds(sol, cfg));
  EXPECT_EQ(stack(sol), fallback_sequence(s, ref, cfg));
}

TEST(Allocator, ZeroWrenchZeroCommands)
{
  const auto v = bluerov2_heavy();
  const Allocator alloc(v.thrusters, v.water);
  EXPECT_EQ(alloc.allocate(Wrench::zero()).commands, Eigen::VectorXd::Zero(8));
}

TEST(Allocator, ReproducesFeasibleWrench)
{
  const auto v = bluerov2_heavy();
  const Allocator alloc(v.thrusters, v.water);
  oracle::Random rng(43);
  for (int i = 0; i < 100; ++i) {
    const Vec6 tau = rng.vec6(-60, 60);
    const AllocationResult r = alloc.allocate(Wrench::from_vector(tau));
    EXPECT_LT((total_wrench(r.unclamped, v.thrusters, v.water).vector() - tau).norm(), 1e-9);
    EXPECT_EQ(r.saturated, r.unclamped.cwiseAbs().maxCoeff() > 1.0);
    EXPECT_LE(r.commands.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Allocator, MinimumNormOverNullSpace)
{
  const auto v = bluerov2_heavy();
  const Allocator alloc(v.thrusters, v.water);
  Eigen::VectorXd fmax(8);
  for (int i = 0; i < 8; ++i) {
    fmax[i] = max_thrust(v.thrusters[static_cast<std::size_t>(i)], v.water);
  }
  const Eigen::MatrixXd scaled = alloc.matrix() * fmax.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::MatrixXd null = svd.matrixV().rightCols(2);
  ASSERT_LT((scaled * null).norm(), 1e-9);

  oracle::Random rng(44);
  for (int i = 0; i < 10; ++i) {
    const Vec6 tau = rng.vec6(-30, 30);
    const Eigen::VectorXd u = alloc.allocate(Wrench::from_vector(tau)).unclamped;
    const double base = u.norm();
    for (int a = -20; a <= 20; ++a) {
      for (int b = -20; b <= 20; ++b) {
        const Eigen::VectorXd alt = u + null * Eigen::Vector2d(0.05 * a, 0.05 * b);
        ASSERT_GE(alt.norm(), base - 1e-12);
      }
    }
  }
}

TEST(Allocator, PureHeaveUsesVerticalsEqually)
{
  const auto v = bluerov2_heavy();
  const Allocator alloc(v.thrusters, v.water);
  const Eigen::VectorXd u = alloc.allocate(Wrench{Vec3(0, 0, -20), Vec3::Zero()}).commands;
  EXPECT_LT(u.head<4>().cwiseAbs().maxCoeff(), 1e-12);
  for (int i = 5; i < 8; ++i) {
    EXPECT_NEAR(u[i], u[4], 1e-12);
  }
  EXPECT_GT(u[4], 0.0);
}

TEST(Allocator, RankDeficientLayoutNamesLostDof)
{
  std::vector<ThrusterSpec> t;
  for (int i = 0; i < 4; ++i) {
    t.push_back(ThrusterSpec{Vec3(i % 2 ? 0.2 : -0.2, i < 2 ? 0.2 : -0.2, 0.0), Vec3::UnitZ(),
        0.0074, 397.94, 0.076, 0.05});
  }
  try {
    Allocator alloc(t, WaterParams{});
    FAIL() << "expected AllocationError";
  } catch (const AllocationError & e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("surge"), std::string::npos) << msg;
    EXPECT_NE(msg.find("sway"), std::string::npos) << msg;
    EXPECT_NE(msg.find("yaw"), std::string::npos) << msg;
  }
}

TEST(ControlStep, AtTargetAllZero)
{
  const auto v = bluerov2_heavy();
  DynamicsModel model(v.dynamics);
  const Allocator alloc(v.thrusters, v.water);
  VehicleState s;
  s.pose[2] = 3.0;
  const ControlOutput out = control_step(s, Reference{s.pose, Vec6::Zero()}, MpcConfig{}, model, alloc);
  EXPECT_LT(out.allocation.commands.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ControlStep, ForwardTargetGivesPositiveSurge)
{
  const auto v = bluerov2_heavy();
  DynamicsModel model(v.dynamics);
  const Allocator alloc(v.thrusters, v.water);
  VehicleState s;
  Reference ref;
  ref.pose[0] = 1.0;
  const ControlOutput out = control_step(s, ref, MpcConfig{}, model, alloc);
  double surge = 0.0;
  for (int i = 0; i < 4; ++i) {
    surge += out.allocation.commands[i] * v.thrusters[static_cast<std::size_t>(i)].direction.x();
  }
  EXPECT_GT(surge, 0.0);
}
