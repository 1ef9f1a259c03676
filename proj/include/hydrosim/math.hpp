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
 * @file math.hpp
 * @brief Frame conventions, attitude parameterizations and similarity transforms.
 *
 * World frame is NED (x north, y east, z down). Body frame is x forward, y right,
 * z down. Attitude uses Z-Y-X (yaw-pitch-roll) Euler angles; R maps body vectors
 * into the world frame.
 */

#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <optional>

namespace hydrosim
{

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGravity = 9.81;

/// Roll, pitch, yaw in radians.
struct EulerRPY
{
  double roll{0.0};
  double pitch{0.0};
  double yaw{0.0};

  friend bool operator==(const EulerRPY &, const EulerRPY &) = default;
};

/// Stored in (x, y, z, w) order, same as a TUM trajectory row.
struct UnitQuaternion
{
  double x{0.0};
  double y{0.0};
  double z{0.0};
  double w{1.0};

  Eigen::Quaterniond to_eigen() const {return {w, x, y, z};}
  static UnitQuaternion from_eigen(const Eigen::Quaterniond & q) {return {q.x(), q.y(), q.z(), q.w()};}
  double norm() const;

  friend bool operator==(const UnitQuaternion &, const UnitQuaternion &) = default;
};

/// p -> scale * rotation * p + translation.
struct Sim3Transform
{
  double scale{1.0};
  Mat3 rotation{Mat3::Identity()};
  Vec3 translation{Vec3::Zero()};

  static Sim3Transform identity() {return {};}
};

/// Wraps to (-pi, pi].
double wrap_angle(double angle);

/// Maps roll and yaw into (-pi, pi] and pitch into [-pi/2, pi/2], preserving the rotation.
EulerRPY canonicalize(const EulerRPY & e);

/// Unit norm with w >= 0.
UnitQuaternion canonicalize(const UnitQuaternion & q);

Mat3 skew(const Vec3 & v);
Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Body-to-NED rotation Z(yaw) * Y(pitch) * X(roll).
Mat3 euler_to_rotation(const EulerRPY & e);
/// Inverse of euler_to_rotation; result is canonical.
EulerRPY rotation_to_euler(const Mat3 & r);

UnitQuaternion euler_to_quaternion(const EulerRPY & e);
EulerRPY quaternion_to_euler(const UnitQuaternion & q);
UnitQuaternion rotation_to_quaternion(const Mat3 & r);
Mat3 quaternion_to_rotation(const UnitQuaternion & q);

inline constexpr double kGimbalTolerance = 1e-6;

bool near_gimbal_lock(double pitch, double tolerance = kGimbalTolerance);

/// euler -> quaternion -> euler. Empty when pitch is within 1e-6 of +/-pi/2,
/// where roll and yaw are not separable.
std::optional<EulerRPY> quat_euler_roundtrip(const EulerRPY & e);

/// Maps body angular rates (p, q, r) to Euler angle rates. Singular at pitch = +/-pi/2.
Mat3 euler_rate_matrix(const EulerRPY & e);

/// Geodesic angle of a rotation, in [0, pi].
double rotation_angle(const Mat3 & r);

bool is_rotation(const Mat3 & r, double tolerance = 1e-9);

Vec3 sim3_apply(const Sim3Transform & s, const Vec3 & p);

/// The transform equivalent to applying `second` after `first`.
Sim3Transform compose(const Sim3Transform & second, const Sim3Transform & first);

Sim3Transform inverse(const Sim3Transform & s);

}  // namespace hydrosim
