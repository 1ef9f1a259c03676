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

#include <algorithm>
#include <cmath>

namespace hydrosim
{

double UnitQuaternion::norm() const
{
  return std::sqrt(x * x + y * y + z * z + w * w);
}

double wrap_angle(double angle)
{
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  }
  return a;
}

EulerRPY canonicalize(const EulerRPY & e)
{
  double roll = e.roll;
  double pitch = wrap_angle(e.pitch);
  double yaw = e.yaw;
  // pitch outside [-pi/2, pi/2] is the same rotation as (roll + pi, pi - pitch, yaw + pi)
  if (pitch > kPi / 2.0 || pitch < -kPi / 2.0) {
    pitch = (pitch > 0.0 ? kPi : -kPi) - pitch;
    roll += kPi;
    yaw += kPi;
  }
  return {wrap_angle(roll), pitch, wrap_angle(yaw)};
}

UnitQuaternion canonicalize(const UnitQuaternion & q)
{
  const double n = q.norm();
  UnitQuaternion out{q.x / n, q.y / n, q.z / n, q.w / n};
  if (out.w < 0.0) {
    out = {-out.x, -out.y, -out.z, -out.w};
  }
  return out;
}

Mat3 skew(const Vec3 & v)
{
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
    v.z(), 0.0, -v.x(),
    -v.y(), v.x(), 0.0;
  return s;
}

Mat3 rot_x(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << 1.0, 0.0, 0.0,
    0.0, c, -s,
    0.0, s, c;
  return r;
}

Mat3 rot_y(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, 0.0, s,
    0.0, 1.0, 0.0,
    -s, 0.0, c;
  return r;
}

Mat3 rot_z(double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0.0,
    s, c, 0.0,
    0.0, 0.0, 1.0;
  return r;
}

Mat3 euler_to_rotation(const EulerRPY & e)
{
  return rot_z(e.yaw) * rot_y(e.pitch) * rot_x(e.roll);
}

EulerRPY rotation_to_euler(const Mat3 & r)
{
  const double pitch = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {wrap_angle(roll), pitch, wrap_angle(yaw)};
}

UnitQuaternion rotation_to_quaternion(const Mat3 & r)
{
  return canonicalize(UnitQuaternion::from_eigen(Eigen::Quaterniond(r)));
}

Mat3 quaternion_to_rotation(const UnitQuaternion & q)
{
  return q.to_eigen().normalized().toRotationMatrix();
}

UnitQuaternion euler_to_quaternion(const EulerRPY & e)
{
  const double cr = std::cos(0.5 * e.roll), sr = std::sin(0.5 * e.roll);
  const double cp = std::cos(0.5 * e.pitch), sp = std::sin(0.5 * e.pitch);
  const double cy = std::cos(0.5 * e.yaw), sy = std::sin(0.5 * e.yaw);
  return canonicalize(
    UnitQuaternion{
      sr * cp * cy - cr * sp * sy,
      cr * sp * cy + sr * cp * sy,
      cr * cp * sy - sr * sp * cy,
      cr * cp * cy + sr * sp * sy});
}

EulerRPY quaternion_to_euler(const UnitQuaternion & q)
{
  return rotation_to_euler(quaternion_to_rotation(q));
}

bool near_gimbal_lock(double pitch, double tolerance)
{
  return std::abs(std::abs(pitch) - kPi / 2.0) < tolerance;
}

std::optional<EulerRPY> quat_euler_roundtrip(const EulerRPY & e)
{
  if (near_gimbal_lock(e.pitch)) {
    return std::nullopt;
  }
  return quaternion_to_euler(euler_to_quaternion(e));
}

Mat3 euler_rate_matrix(const EulerRPY & e)
{
  const double sr = std::sin(e.roll), cr = std::cos(e.roll);
  const double cp = std::cos(e.pitch), tp = std::tan(e.pitch);
  Mat3 t;
  t << 1.0, sr * tp, cr * tp,
    0.0, cr, -sr,
    0.0, sr / cp, cr / cp;
  return t;
}

double rotation_angle(const Mat3 & r)
{
  // atan2 form of acos((trace - 1) / 2); keeps precision near zero angle
  const Vec3 axis{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  return std::atan2(0.5 * axis.norm(), c);
}

bool is_rotation(const Mat3 & r, double tolerance)
{
  const double orth = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return r.allFinite() && orth < tolerance && std::abs(r.determinant() - 1.0) < tolerance;
}

Vec3 sim3_apply(const Sim3Transform & s, const Vec3 & p)
{
  return s.scale * (s.rotation * p) + s.translation;
}

Sim3Transform compose(const Sim3Transform & second, const Sim3Transform & first)
{
  return {
    second.scale * first.scale,
    second.rotation * first.rotation,
    second.scale * (second.rotation * first.translation) + second.translation};
}

Sim3Transform inverse(const Sim3Transform & s)
{
  const Mat3 rt = s.rotation.transpose();
  return {1.0 / s.scale, rt, -(rt * s.translation) / s.scale};
}

}  // namespace hydrosim
