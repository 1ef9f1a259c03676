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
 * @file dynamics.hpp
 * @brief Body-frame 6-DOF equation of motion for a submerged rigid vehicle.
 *
 *   (M_RB + M_A) nu_dot = tau - C_RB(nu) nu - C_A(nu) nu - D(nu) nu - g(eta)
 *
 * integrated with a fixed-step velocity Verlet scheme (default 1 kHz).
 */

#pragma once

#include "hydrosim/math.hpp"

#include <string>
#include <vector>

namespace hydrosim
{

/// Body-frame force [N] and moment [N m].
struct Wrench
{
  Vec3 force{Vec3::Zero()};
  Vec3 moment{Vec3::Zero()};

  Vec6 vector() const;
  static Wrench from_vector(const Vec6 & v);
  static Wrench zero() {return {};}

  Wrench & operator+=(const Wrench & other);
  friend Wrench operator+(Wrench a, const Wrench & b) {return a += b;}
};

/// eta = (x, y, z, roll, pitch, yaw) in NED, nu = (u, v, w, p, q, r) in body frame.
struct VehicleState
{
  Vec6 pose{Vec6::Zero()};
  Vec6 twist{Vec6::Zero()};
  double time{0.0};

  Vec3 position() const {return pose.head<3>();}
  EulerRPY attitude() const {return {pose[3], pose[4], pose[5]};}
  Vec3 linear_velocity() const {return twist.head<3>();}
  Vec3 angular_velocity() const {return twist.tail<3>();}
  Mat3 rotation() const {return euler_to_rotation(attitude());}
};

struct RigidBodyParams
{
  double mass{1.0};
  /// Inertia tensor about the centre of gravity.
  Mat3 inertia{Mat3::Identity()};
  /// Centre of gravity relative to the body origin.
  Vec3 cg{Vec3::Zero()};
  /// Centre of buoyancy relative to the body origin.
  Vec3 cb{Vec3::Zero()};
  double weight{0.0};
  double buoyancy{0.0};
};

struct HydroParams
{
  Mat6 added_mass{Mat6::Zero()};
  Mat6 linear_damping{Mat6::Zero()};
  /// Applied as quadratic_damping * diag(|nu|) * nu.
  Mat6 quadratic_damping{Mat6::Zero()};
};

struct SineComponent
{
  Vec6 amplitude{Vec6::Zero()};
  Vec6 frequency{Vec6::Zero()};   // rad/s
  Vec6 phase{Vec6::Zero()};       // rad
};

/// External-flow disturbance applied as a body wrench.
struct DisturbanceModel
{
  enum class Kind { kNone, kConstant, kSinusoidal, kSumOfSines };

  Kind kind{Kind::kNone};
  /// kConstant uses amplitude of the first entry; kSinusoidal uses the first entry only.
  std::vector<SineComponent> components;

  static DisturbanceModel none() {return {};}
  static DisturbanceModel constant(const Vec6 & amplitude);
  static DisturbanceModel sinusoidal(const SineComponent & component);
  static DisturbanceModel sum_of_sines(std::vector<SineComponent> components);
};

struct DynamicsParams
{
  RigidBodyParams rigid_body;
  HydroParams hydro;
};

Mat6 rigid_body_mass_matrix(const RigidBodyParams & rb);

/// C(nu) from the 3x3 blocks of a symmetric mass matrix. Skew-symmetric by construction.
Mat6 coriolis_matrix(const Mat6 & mass, const Vec6 & nu);

/// D(nu) nu = (D_l + D_q diag(|nu|)) nu.
Vec6 damping_wrench(const HydroParams & h, const Vec6 & nu);

/// g(eta): subtracted on the right-hand side of the equation of motion.
Vec6 restoring_wrench(const RigidBodyParams & rb, const EulerRPY & attitude);

Wrench disturbance_wrench(const DisturbanceModel & model, double t);

/// Validated parameters with the mass matrices precomputed.
class DynamicsModel
{
public:
  /// Throws ConfigError for non-physical parameters or a singular total mass matrix.
  explicit DynamicsModel(DynamicsParams params);

  const DynamicsParams & params() const {return params_;}
  const Mat6 & rigid_body_mass() const {return mass_rb_;}
  const Mat6 & added_mass() const {return params_.hydro.added_mass;}
  const Mat6 & total_mass() const {return mass_total_;}
  const Mat6 & total_mass_inverse() const {return mass_total_inv_;}

  /// 1/2 nu^T (M_RB + M_A) nu.
  double kinetic_energy(const Vec6 & nu) const;

private:
  DynamicsParams params_;
  Mat6 mass_rb_;
  Mat6 mass_total_;
  Mat6 mass_total_inv_;
};

/// nu_dot for the given state and total external wrench.
Vec6 acceleration(const VehicleState & state, const DynamicsModel & model, const Wrench & tau);

/// eta_dot = J(eta) nu.
Vec6 pose_rate(const Vec6 & pose, const Vec6 & nu);

inline constexpr double kDefaultPhysicsDt = 1e-3;

/// One velocity Verlet step with tau held constant over the step.
/// Throws DivergenceError naming the first non-finite component.
VehicleState step(
  const VehicleState & state, const DynamicsModel & model, const Wrench & tau,
  double dt = kDefaultPhysicsDt);

/// "pose.x", "twist.q", ... for index 0-11 of (eta, nu).
std::string state_component_name(int index);

}  // namespace hydrosim
