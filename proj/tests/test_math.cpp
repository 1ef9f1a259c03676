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

#include "hydrosim/math.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace hydrosim;

namespace
{

double max_abs(const Eigen::MatrixXd & m)
{
  return m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(EulerToRotation, ZeroIsIdentity)
{
  EXPECT_EQ(euler_to_rotation({0.0, 0.0, 0.0}), Mat3::Identity());
}

TEST(EulerToRotation, YawQuarterTurnMapsBodyXToNedY)
{
  const Vec3 x = euler_to_rotation({0.0, 0.0, kPi / 2.0}) * Vec3::UnitX();
  EXPECT_LT((x - Vec3::UnitY()).norm(), 1e-12);
}

TEST(EulerToRotation, RollQuarterTurnMapsBodyYToNedZ)
{
  const Vec3 y = euler_to_rotation({kPi / 2.0, 0.0, 0.0}) * Vec3::UnitY();
  EXPECT_LT((y - Vec3::UnitZ()).norm(), 1e-12);
}

TEST(EulerToRotation, MatchesClosedForm)
{
  oracle::Random rng(11);
  for (int i = 0; i < 200; ++i) {
    const EulerRPY e{rng.uniform(-kPi, kPi), rng.uniform(-1.5, 1.5), rng.uniform(-kPi, kPi)};
    EXPECT_LT(max_abs(euler_to_rotation(e) - oracle::rotation(e.roll, e.pitch, e.yaw)), 1e-14);
  }
}

TEST(RotationToEuler, RoundTripAwayFromGimbalLock)
{
  oracle::Random rng(12);
  for (int i = 0; i < 1000; ++i) {
    const EulerRPY e{
      rng.uniform(-kPi + 1e-6, kPi), rng.uniform(-kPi / 2 + 1e-3, kPi / 2 - 1e-3),
      rng.uniform(-kPi + 1e-6, kPi)};
    const EulerRPY back = rotation_to_euler(euler_to_rotation(e));
    EXPECT_NEAR(back.roll, e.roll, 1e-9);
    EXPECT_NEAR(back.pitch, e.pitch, 1e-9);
    EXPECT_NEAR(back.yaw, e.yaw, 1e-9);
  }
}

TEST(Rotations, AreOrthonormalWithPositiveDeterminant)
{
  oracle::Random rng(13);
  for (int i = 0; i < 500; ++i) {
    const Mat3 r = euler_to_rotation({rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)});
    EXPECT_LT(max_abs(r.transpose() * r - Mat3::Identity()), 1e-9);
    EXPECT_GT(r.determinant(), 0.0);
    EXPECT_TRUE(is_rotation(r));
    const Mat3 q = quaternion_to_rotation(rotation_to_quaternion(r));
    EXPECT_LT(max_abs(q - r), 1e-12);
  }
}

TEST(QuatEulerRoundtrip, Examples)
{
  const auto zero = quat_euler_roundtrip({0.0, 0.0, 0.0});
  ASSERT_TRUE(zero);
  EXPECT_NEAR(zero->roll, 0.0, 1e-15);
  EXPECT_NEAR(zero->pitch, 0.0, 1e-15);
  EXPECT_NEAR(zero->yaw, 0.0, 1e-15);

  const auto e = quat_euler_roundtrip({0.1, -0.2, 0.3});
  ASSERT_TRUE(e);
  EXPECT_NEAR(e->roll, 0.1, 1e-9);
  EXPECT_NEAR(e->pitch, -0.2, 1e-9);
  EXPECT_NEAR(e->yaw, 0.3, 1e-9);

  EXPECT_FALSE(quat_euler_roundtrip({0.0, kPi / 2.0, 0.0}));
  EXPECT_FALSE(quat_euler_roundtrip({0.0, -kPi / 2.0 + 1e-7, 0.0}));
  EXPECT_TRUE(quat_euler_roundtrip({0.0, kPi / 2.0 - 1e-3, 0.0}));
}

TEST(Quaternion, HemisphereAndStorageOrder)
{
  const UnitQuaternion q = canonicalize(UnitQuaternion{0.0, 0.0, 0.0, -2.0});
  EXPECT_DOUBLE_EQ(q.w, 1.0);
  EXPECT_DOUBLE_EQ(q.x, 0.0);
  // yaw pi/2 about z: (0, 0, sin(pi/4), cos(pi/4))
  const UnitQuaternion z = euler_to_quaternion({0.0, 0.0, kPi / 2.0});
  EXPECT_NEAR(z.z, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(z.w, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(z.norm(), 1.0, 1e-15);
}

TEST(WrapAngle, HalfOpenInterval)
{
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
  EXPECT_NEAR(wrap_angle(6.0), 6.0 - 2.0 * kPi, 1e-15);
}

TEST(Canonicalize, PitchBeyondQuarterTurnPreservesRotation)
{
  const EulerRPY e{0.3, 2.0, -0.4};
  const EulerRPY c = canonicalize(e);
  EXPECT_LE(std::abs(c.pitch), kPi / 2.0);
  EXPECT_LT(max_abs(euler_to_rotation(c) - euler_to_rotation(e)), 1e-12);
}

TEST(Sim3, ApplyExamples)
{
  const Vec3 p(0.3, -2.0, 5.0);
  EXPECT_EQ(sim3_apply(Sim3Transform{}, p), p);
  EXPECT_EQ(sim3_apply(Sim3Transform{2.0, Mat3::Identity(), Vec3::Zero()}, Vec3::UnitX()), Vec3(2, 0, 0));
  const Vec3 q = sim3_apply(Sim3Transform{1.0, rot_z(kPi / 2.0), Vec3(1, 1, 0)}, Vec3::UnitX());
  EXPECT_LT((q - Vec3(1, 2, 0)).norm(), 1e-15);
}

TEST(Sim3, ComposeAndInverse)
{
  oracle::Random rng(14);
  for (int i = 0; i < 200; ++i) {
    const Sim3Transform a{rng.uniform(0.1, 3.0), rng.rotation(), rng.vec3(-5, 5)};
    const Sim3Transform b{rng.uniform(0.1, 3.0), rng.rotation(), rng.vec3(-5, 5)};
    const Vec3 p = rng.vec3(-10, 10);
    EXPECT_LT((sim3_apply(b, sim3_apply(a, p)) - sim3_apply(compose(b, a), p)).norm(), 1e-9);
    EXPECT_LT((sim3_apply(inverse(a), sim3_apply(a, p)) - p).norm(), 1e-9);
  }
}

TEST(RotationAngle, MatchesAxisAngle)
{
  oracle::Random rng(15);
  for (int i = 0; i < 200; ++i) {
    const double angle = rng.uniform(0.0, kPi);
    const Vec3 axis = rng.vec3(-1, 1).normalized();
    EXPECT_NEAR(rotation_angle(Eigen::AngleAxisd(angle, axis).toRotationMatrix()), angle, 1e-9);
  }
  EXPECT_EQ(rotation_angle(Mat3::Identity()), 0.0);
  EXPECT_NEAR(rotation_angle(rot_x(1e-9)), 1e-9, 1e-20);
}

TEST(EulerRateMatrix, ZeroAttitudeIsIdentity)
{
  EXPECT_LT(max_abs(euler_rate_matrix({0.0, 0.0, 0.0}) - Mat3::Identity()), 1e-15);
}

TEST(EulerRateMatrix, ConsistentWithRotationDerivative)
{
  // R_dot = R S(omega) must equal d/dt R(e(t)) with e_dot = T(e) omega.
  const EulerRPY e{0.2, -0.4, 1.1};
  const Vec3 w(0.3, -0.2, 0.5);
  const Vec3 ed = euler_rate_matrix(e) * w;
  const double h = 1e-6;
  const Mat3 num = (euler_to_rotation({e.roll + h * ed[0], e.pitch + h * ed[1], e.yaw + h * ed[2]}) -
    euler_to_rotation({e.roll - h * ed[0], e.pitch - h * ed[1], e.yaw - h * ed[2]})) / (2 * h);
  EXPECT_LT(max_abs(num - euler_to_rotation(e) * skew(w)), 1e-8);
}
