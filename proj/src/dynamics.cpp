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

#include "hydrosim/dynamics.hpp"

#include "hydrosim/errors.hpp"

#include <array>
#include <cmath>

namespace hydrosim
{

Vec6 Wrench::vector() const
{
  Vec6 v;
  v << force, moment;
  return v;
}

Wrench Wrench::from_vector(const Vec6 & v)
{
  return {v.head<3>(), v.tail<3>()};
}

Wrench & Wrench::operator+=(const Wrench & other)
{
  force += other.force;
  moment += other.moment;
  return *this;
}

DisturbanceModel DisturbanceModel::constant(const Vec6 & amplitude)
{
  return {Kind::kConstant, {SineComponent{amplitude, Vec6::Zero(), Vec6::Zero()}}};
}

DisturbanceModel DisturbanceModel::sinusoidal(const SineComponent & component)
{
  return {Kind::kSinusoidal, {component}};
}

DisturbanceModel DisturbanceModel::sum_of_sines(std::vector<SineComponent> components)
{
  return {Kind::kSumOfSines, std::move(components)};
}

Mat6 rigid_body_mass_matrix(const RigidBodyParams & rb)
{
  if (!(rb.mass > 0.0)) {
    throw ConfigError("must be > 0", "mass");
  }
  if (!rb.inertia.isApprox(rb.inertia.transpose(), 1e-12) ||
    rb.inertia.llt().info() != Eigen::Success)
  {
    throw ConfigError("must be symmetric positive definite", "inertia");
  }
  const Mat3 s = skew(rb.cg);
  Mat6 m;
  m.topLeftCorner<3, 3>() = rb.mass * Mat3::Identity();
  m.topRightCorner<3, 3>() = -rb.mass * s;
  m.bottomLeftCorner<3, 3>() = rb.mass * s;
  // parallel-axis shift of the CG inertia to the body origin
  m.bottomRightCorner<3, 3>() = rb.inertia - rb.mass * s * s;
  return m;
}

Mat6 coriolis_matrix(const Mat6 & mass, const Vec6 & nu)
{
  const Vec3 nu1 = nu.head<3>();
  const Vec3 nu2 = nu.tail<3>();
  const Vec3 a = mass.topLeftCorner<3, 3>() * nu1 + mass.topRightCorner<3, 3>() * nu2;
  const Vec3 b = mass.bottomLeftCorner<3, 3>() * nu1 + mass.bottomRightCorner<3, 3>() * nu2;
  Mat6 c = Mat6::Zero();
  c.topRightCorner<3, 3>() = -skew(a);
  c.bottomLeftCorner<3, 3>() = -skew(a);
  c.bottomRightCorner<3, 3>() = -skew(b);
  return c;
}

Vec6 damping_wrench(const HydroParams & h, const Vec6 & nu)
{
  return h.linear_damping * nu + h.quadratic_damping * nu.cwiseAbs().cwiseProduct(nu);
}

Vec6 restoring_wrench(const RigidBodyParams & rb, const EulerRPY & attitude)
{
  const Mat3 rt = euler_to_rotation(attitude).transpose();
  const Vec3 f_gravity = rt * Vec3(0.0, 0.0, rb.weight);
  const Vec3 f_buoyancy = -(rt * Vec3(0.0, 0.0, rb.buoyancy));
  Vec6 g;
  g << -(f_gravity + f_buoyancy), -(rb.cg.cross(f_gravity) + rb.cb.cross(f_buoyancy));
  return g;
}

Wrench disturbance_wrench(const DisturbanceModel & model, double t)
{
  using Kind = DisturbanceModel::Kind;
  if (model.kind == Kind::kNone || model.components.empty()) {
    return Wrench::zero();
  }
  if (model.kind == Kind::kConstant) {
    return Wrench::from_vector(model.components.front().amplitude);
  }
  const std::size_t count = model.kind == Kind::kSinusoidal ? 1 : model.components.size();
  Vec6 total = Vec6::Zero();
  for (std::size_t i = 0; i < count; ++i) {
    const auto & c = model.components[i];
    for (int axis = 0; axis < 6; ++axis) {
      total[axis] += c.amplitude[axis] * std::sin(c.frequency[axis] * t + c.phase[axis]);
    }
  }
  return Wrench::from_vector(total);
}

namespace
{

bool is_symmetric(const Mat6 & m)
{
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

void require_nonnegative_diagonal(const Mat6 & m, const std::string & field)
{
  for (int i = 0; i < 6; ++i) {
    if (!(m(i, i) >= 0.0)) {
      throw ConfigError("diagonal entries must be >= 0", field);
    }
  }
}

}  // namespace

DynamicsModel::DynamicsModel(DynamicsParams params)
: params_(std::move(params))
{
  const auto & rb = params_.rigid_body;
  const auto & h = params_.hydro;
  if (!(rb.weight >= 0.0)) {
    throw ConfigError("must be >= 0", "weight");
  }
  if (!(rb.buoyancy >= 0.0)) {
    throw ConfigError("must be >= 0", "buoyancy");
  }
  if (!rb.cg.allFinite() || !rb.cb.allFinite()) {
    throw ConfigError("must be finite", "cg/cb");
  }
  mass_rb_ = rigid_body_mass_matrix(rb);

  if (!h.added_mass.allFinite() || !is_symmetric(h.added_mass)) {
    throw ConfigError("must be symmetric", "added_mass");
  }
  Eigen::SelfAdjointEigenSolver<Mat6> eig(h.added_mass);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw ConfigError("must be positive semidefinite", "added_mass");
  }
  require_nonnegative_diagonal(h.linear_damping, "linear_damping");
  require_nonnegative_diagonal(h.quadratic_damping, "quadratic_damping");

  mass_total_ = mass_rb_ + h.added_mass;
  Eigen::FullPivLU<Mat6> lu(mass_total_);
  if (!lu.isInvertible()) {
    throw ConfigError("M_RB + M_A is singular", "added_mass");
  }
  mass_total_inv_ = lu.inverse();
}

double DynamicsModel::kinetic_energy(const Vec6 & nu) const
{
  return 0.5 * nu.dot(mass_total_ * nu);
}

Vec6 acceleration(const VehicleState & state, const DynamicsModel & model, const Wrench & tau)
{
  const Vec6 & nu = state.twist;
  const auto & p = model.params();
  const Vec6 rhs = tau.vector() -
    coriolis_matrix(model.rigid_body_mass(), nu) * nu -
    coriolis_matrix(model.added_mass(), nu) * nu -
    damping_wrench(p.hydro, nu) -
    restoring_wrench(p.rigid_body, state.attitude());
  return model.total_mass_inverse() * rhs;
}

Vec6 pose_rate(const Vec6 & pose, const Vec6 & nu)
{
  const EulerRPY e{pose[3], pose[4], pose[5]};
  Vec6 rate;
  rate << euler_to_rotation(e) * nu.head<3>(), euler_rate_matrix(e) * nu.tail<3>();
  return rate;
}

std::string state_component_name(int index)
{
  static const std::array<const char *, 12> names{
    "pose.x", "pose.y", "pose.z", "pose.roll", "pose.pitch", "pose.yaw",
    "twist.u", "twist.v", "twist.w", "twist.p", "twist.q", "twist.r"};
  return index >= 0 && index < 12 ? names[static_cast<std::size_t>(index)] : "unknown";
}

VehicleState step(
  const VehicleState & state, const DynamicsModel & model, const Wrench & tau, double dt)
{
  const Vec6 a0 = acceleration(state, model, tau);
  const Vec6 nu_half = state.twist + 0.5 * dt * a0;

  VehicleState next;
  next.time = state.time + dt;
  next.pose = state.pose + dt * pose_rate(state.pose, nu_half);

  // velocity-dependent forces: re-evaluate at the drifted pose with the
  // explicit end-of-step velocity estimate, then close the kick
  next.twist = nu_half + 0.5 * dt * a0;
  const Vec6 a1 = acceleration(next, model, tau);
  next.twist = nu_half + 0.5 * dt * a1;

  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(next.pose[i])) {
      throw DivergenceError(state_component_name(i), next.pose[i]);
    }
    if (!std::isfinite(next.twist[i])) {
      throw DivergenceError(state_component_name(i + 6), next.twist[i]);
    }
  }
  const EulerRPY e = canonicalize(next.attitude());
  next.pose[3] = e.roll;
  next.pose[4] = e.pitch;
  next.pose[5] = e.yaw;
  return next;
}

}  // namespace hydrosim
