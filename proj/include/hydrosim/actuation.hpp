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
 * @file actuation.hpp
 * @brief Thruster force model, first-order actuator filter and thruster geometry.
 */

#pragma once

#include "hydrosim/dynamics.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace hydrosim
{

struct ThrusterSpec
{
  Vec3 position{Vec3::Zero()};          // body frame [m]
  Vec3 direction{Vec3::UnitX()};        // unit thrust direction
  double thrust_coefficient{0.0};       // C_T
  double max_rotation_speed{0.0};       // omega_max [rad/s]
  double propeller_diameter{0.0};       // [m]
  double time_constant{0.0};            // t_c [s], 0 disables the filter
};

struct WaterParams
{
  double density{1025.0};  // kg/m^3
};

/// Filtered thruster inputs u_f, each in [-1, 1].
struct ActuatorState
{
  Eigen::VectorXd filtered;

  static ActuatorState zero(std::size_t n) {return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};}
};

/// A command outside [-1, 1] was passed where saturation is an error.
class SaturationError : public std::invalid_argument
{
public:
  SaturationError(std::size_t index, double value);
  std::size_t index() const {return index_;}
  double value() const {return value_;}

private:
  std::size_t index_;
  double value_;
};

using AllocationMatrix = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// u_f <- u_f + (1 - exp(-dt / t_c)) (u - u_f). Throws SaturationError for |u| > 1.
double filter_input(double u, double u_f_prev, double dt, double time_constant);

/// Advances every thruster's filter by dt. Commands are clamped to [-1, 1] first.
ActuatorState filter_inputs(
  const ActuatorState & state, const Eigen::VectorXd & commands, double dt,
  const std::vector<ThrusterSpec> & thrusters);

/// C_T rho omega_max^2 D^4, the force at u_f = 1.
double max_thrust(const ThrusterSpec & spec, const WaterParams & water);

/// Signed thrust, linear in u_f.
double thrust_force(double u_f, const ThrusterSpec & spec, const WaterParams & water);

/// Column i is [n_i; r_i x n_i]. Throws ConfigError for an empty list or non-unit n_i.
AllocationMatrix allocation_matrix(const std::vector<ThrusterSpec> & thrusters);

Wrench total_wrench(
  const Eigen::VectorXd & u_f, const std::vector<ThrusterSpec> & thrusters,
  const WaterParams & water);

/// Validates a thruster table; field paths look like "thrusters[3].direction".
void validate_thrusters(const std::vector<ThrusterSpec> & thrusters);

}  // namespace hydrosim
