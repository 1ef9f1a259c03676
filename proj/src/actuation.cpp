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

#include "hydrosim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hydrosim
{

SaturationError::SaturationError(std::size_t index, double value)
: std::invalid_argument(
    "thruster command " + std::to_string(index) + " = " + std::to_string(value) +
    " outside [-1, 1]"),
  index_(index), value_(value)
{}

double filter_input(double u, double u_f_prev, double dt, double time_constant)
{
  if (!(std::abs(u) <= 1.0)) {
    throw SaturationError(0, u);
  }
  if (time_constant <= 0.0) {
    return u;
  }
  const double alpha = -std::expm1(-dt / time_constant);
  return u_f_prev + alpha * (u - u_f_prev);
}

ActuatorState filter_inputs(
  const ActuatorState & state, const Eigen::VectorXd & commands, double dt,
  const std::vector<ThrusterSpec> & thrusters)
{
  const auto n = static_cast<Eigen::Index>(thrusters.size());
  if (commands.size() != n || state.filtered.size() != n) {
    throw std::invalid_argument(
      "expected " + std::to_string(n) + " thruster commands, got " +
      std::to_string(commands.size()));
  }
  ActuatorState next{Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = std::clamp(commands[i], -1.0, 1.0);
    next.filtered[i] = filter_input(
      u, state.filtered[i], dt, thrusters[static_cast<std::size_t>(i)].time_constant);
  }
  return next;
}

double max_thrust(const ThrusterSpec & spec, const WaterParams & water)
{
  const double d2 = spec.propeller_diameter * spec.propeller_diameter;
  return spec.thrust_coefficient * water.density *
         spec.max_rotation_speed * spec.max_rotation_speed * d2 * d2;
}

double thrust_force(double u_f, const ThrusterSpec & spec, const WaterParams & water)
{
  return max_thrust(spec, water) * u_f;
}

void validate_thrusters(const std::vector<ThrusterSpec> & thrusters)
{
  if (thrusters.empty()) {
    throw ConfigError("at least one thruster is required", "thrusters");
  }
  for (std::size_t i = 0; i < thrusters.size(); ++i) {
    const auto & t = thrusters[i];
    const std::string field = "thrusters[" + std::to_string(i) + "]";
    if (!t.position.allFinite()) {
      throw ConfigError("must be finite", field + ".position");
    }
    if (!(std::abs(t.direction.norm() - 1.0) <= 1e-9)) {
      throw ConfigError("must be a unit vector", field + ".direction");
    }
    if (!(t.max_rotation_speed > 0.0)) {
      throw ConfigError("must be > 0", field + ".max_rotation_speed");
    }
    if (!(t.propeller_diameter > 0.0)) {
      throw ConfigError("must be > 0", field + ".propeller_diameter");
    }
    if (!(t.time_constant >= 0.0)) {
      throw ConfigError("must be >= 0", field + ".time_constant");
    }
    if (!std::isfinite(t.thrust_coefficient)) {
      throw ConfigError("must be finite", field + ".thrust_coefficient");
    }
  }
}

AllocationMatrix allocation_matrix(const std::vector<ThrusterSpec> & thrusters)
{
  if (thrusters.empty()) {
    throw ConfigError("at least one thruster is required", "thrusters");
  }
  AllocationMatrix t(6, static_cast<Eigen::Index>(thrusters.size()));
  for (std::size_t i = 0; i < thrusters.size(); ++i) {
    const auto & spec = thrusters[i];
    if (!(std::abs(spec.direction.norm() - 1.0) <= 1e-9)) {
      throw ConfigError(
        "must be a unit vector", "thrusters[" + std::to_string(i) + "].direction");
    }
    const auto col = static_cast<Eigen::Index>(i);
    t.block<3, 1>(0, col) = spec.direction;
    t.block<3, 1>(3, col) = spec.position.cross(spec.direction);
  }
  return t;
}

Wrench total_wrench(
  const Eigen::VectorXd & u_f, const std::vector<ThrusterSpec> & thrusters,
  const WaterParams & water)
{
  if (u_f.size() != static_cast<Eigen::Index>(thrusters.size())) {
    throw std::invalid_argument(
      "expected " + std::to_string(thrusters.size()) + " filtered inputs, got " +
      std::to_string(u_f.size()));
  }
  Wrench w;
  for (std::size_t i = 0; i < thrusters.size(); ++i) {
    const auto & spec = thrusters[i];
    const double f = thrust_force(u_f[static_cast<Eigen::Index>(i)], spec, water);
    w.force += f * spec.direction;
    w.moment += f * spec.position.cross(spec.direction);
  }
  return w;
}

}  // namespace hydrosim
