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

#include "hydrosim/actuation.hpp"
#include "hydrosim/config.hpp"
#include "hydrosim/errors.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hydrosim;

namespace
{

ThrusterSpec unit_thruster(Vec3 r = Vec3::Zero(), Vec3 n = Vec3::UnitX())
{
  return ThrusterSpec{r, n, 1.0, 10.0, 0.1, 0.0};
}

const WaterParams kFresh{1000.0};

}  // namespace

TEST(FilterInput, PassthroughWithoutTimeConstant)
{
  EXPECT_EQ(filter_input(0.7, 0.0, 1e-3, 0.0), 0.7);
}

TEST(FilterInput, StepResponseAfterOneTimeConstant)
{
  const double tc = 0.05;
  const double dt = 1e-3;
  double uf = 0.0;
  for (int i = 0; i < 50; ++i) {
    uf = filter_input(1.0, uf, dt, tc);
  }
  EXPECT_NEAR(uf, 1.0 - std::exp(-1.0), 1e-3);
}

TEST(FilterInput, SteadyStateAndContraction)
{
  double uf = -1.0;
  double gap = std::abs(uf - 0.4);
  for (int i = 0; i < 2000; ++i) {
    uf = filter_input(0.4, uf, 1e-3, 0.05);
    const double next = std::abs(uf - 0.4);
    ASSERT_LE(next, gap);
    gap = next;
  }
  EXPECT_NEAR(uf, 0.4, 1e-6);
}

TEST(FilterInput, RejectsOutOfRange)
{
  EXPECT_THROW(filter_input(1.2, 0.0, 1e-3, 0.05), SaturationError);
  EXPECT_THROW(filter_input(std::nan(""), 0.0, 1e-3, 0.05), SaturationError);
}

TEST(FilterInputs, ClampsAndChecksLength)
{
  std::vector<ThrusterSpec> t{unit_thruster(), unit_thruster()};
  const auto s = filter_inputs(ActuatorState::zero(2), Eigen::Vector2d(2.0, -0.5), 1e-3, t);
  EXPECT_EQ(s.filtered[0], 1.0);
  EXPECT_EQ(s.filtered[1], -0.5);
  EXPECT_THROW(filter_inputs(ActuatorState::zero(2), Eigen::Vector3d::Zero(), 1e-3, t), std::invalid_argument);
}

TEST(ThrustForce, Examples)
{
  const ThrusterSpec t = unit_thruster();
  EXPECT_EQ(thrust_force(0.0, t, kFresh), 0.0);
  EXPECT_NEAR(thrust_force(1.0, t, kFresh), 1.0 * 1000.0 * 100.0 * 1e-4, 1e-12);
  EXPECT_NEAR(thrust_force(-0.5, t, kFresh), -5.0, 1e-12);
  EXPECT_NEAR(max_thrust(t, kFresh), 10.0, 1e-12);
}

TEST(ThrustForce, OddAndLinear)
{
  const ThrusterSpec t = bluerov2_heavy().thrusters.front();
  const WaterParams w;
  oracle::Random rng(31);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(-1, 1);
    const double a = rng.uniform(-1, 1);
    EXPECT_DOUBLE_EQ(thrust_force(-u, t, w), -thrust_force(u, t, w));
    EXPECT_NEAR(thrust_force(a * u, t, w), a * thrust_force(u, t, w), 1e-12);
  }
}

TEST(AllocationMatrix, SingleThrusterColumns)
{
  const auto a = allocation_matrix({unit_thruster()});
  EXPECT_EQ(a.col(0), (Vec6() << 1, 0, 0, 0, 0, 0).finished());
  const auto b = allocation_matrix({unit_thruster(Vec3::UnitY())});
  EXPECT_EQ(b.col(0), (Vec6() << 1, 0, 0, 0, 0, -1).finished());
}

TEST(AllocationMatrix, RejectsNonUnitDirection)
{
  EXPECT_THROW(allocation_matrix({unit_thruster(Vec3::Zero(), Vec3(1, 1, 0))}), ConfigError);
  EXPECT_THROW(allocation_matrix({}), ConfigError);
}

TEST(AllocationMatrix, BlueRovFullRankWithUnitForceColumns)
{
  const auto t = bluerov2_heavy().thrusters;
  const auto a = allocation_matrix(t);
  ASSERT_EQ(a.cols(), 8);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto sv = svd.singularValues();
  EXPECT_GT(sv[5], 1e-6 * sv[0]);
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(a.col(i).head<3>().norm(), 1.0, 1e-12);
    const Vec3 m = oracle::cross(t[static_cast<std::size_t>(i)].position, t[static_cast<std::size_t>(i)].direction);
    EXPECT_LT((a.col(i).tail<3>() - m).norm(), 1e-15);
  }
}

TEST(TotalWrench, ZeroInput)
{
  const auto t = bluerov2_heavy().thrusters;
  EXPECT_EQ(total_wrench(Eigen::VectorXd::Zero(8), t, WaterParams{}).vector(), Vec6::Zero());
}

TEST(TotalWrench, OpposingPairGivesPureMoment)
{
  std::vector<ThrusterSpec> t{
    unit_thruster(Vec3(0, 1, 0), Vec3::UnitX()),
    unit_thruster(Vec3(0, -1, 0), -Vec3::UnitX())};
  const Wrench w = total_wrench(Eigen::Vector2d(0.5, 0.5), t, kFresh);
  EXPECT_LT(w.force.norm(), 1e-12);
  EXPECT_NEAR(w.moment[2], -10.0, 1e-12);
}

TEST(TotalWrench, BlueRovVerticalsGivePureHeave)
{
  const auto t = bluerov2_heavy().thrusters;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(8);
  u.tail<4>().setConstant(0.6);
  const WaterParams w;
  const Wrench tau = total_wrench(u, t, w);
  EXPECT_NEAR(tau.force[2], -4.0 * thrust_force(0.6, t.back(), w), 1e-9);
  EXPECT_LT(tau.force.head<2>().norm(), 1e-12);
  EXPECT_LT(tau.moment.norm(), 1e-12);
}

TEST(TotalWrench, MatchesSumOfColumns)
{
  const auto t = bluerov2_heavy().thrusters;
  const WaterParams w;
  oracle::Random rng(32);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd u(8);
    for (int i = 0; i < 8; ++i) {
      u[i] = rng.uniform(-1, 1);
    }
    Vec6 expected = Vec6::Zero();
    for (std::size_t i = 0; i < 8; ++i) {
      const double f = t[i].thrust_coefficient * w.density * std::pow(t[i].max_rotation_speed, 2) *
        std::pow(t[i].propeller_diameter, 4) * u[static_cast<Eigen::Index>(i)];
      expected.head<3>() += f * t[i].direction;
      expected.tail<3>() += f * oracle::cross(t[i].position, t[i].direction);
    }
    EXPECT_LT((total_wrench(u, t, w).vector() - expected).norm(), 1e-10);
  }
  EXPECT_THROW(total_wrench(Eigen::VectorXd::Zero(3), t, w), std::invalid_argument);
}
