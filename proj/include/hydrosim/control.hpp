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
 * @file control.hpp
 * @brief Receding-horizon wrench controller and pseudo-inverse thrust allocation.
 *
 * Control runs in two stages. First a condensed box-constrained QP, built on the
 * dynamics linearized at the current state and discretized with a zero-order hold,
 * gives a body wrench sequence. The first wrench is then mapped to per-thruster
 * commands with the Moore-Penrose pseudo-inverse of the allocation matrix.
 */

#pragma once

#include "hydrosim/actuation.hpp"
#include "hydrosim/dynamics.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hydrosim
{

struct MpcConfig
{
  int horizon{20};
  double control_period{0.05};
  Mat6 pose_weight{Vec6(10.0, 10.0, 10.0, 5.0, 5.0, 5.0).asDiagonal()};
  Mat6 velocity_weight{Mat6::Zero()};
  Mat6 input_weight{0.01 * Mat6::Identity()};
  Vec6 wrench_min{-Vec6(50.0, 50.0, 80.0, 10.0, 10.0, 10.0)};
  Vec6 wrench_max{Vec6(50.0, 50.0, 80.0, 10.0, 10.0, 10.0)};
  int max_iterations{200};
  double kkt_tolerance{1e-8};
  /// Proportional and derivative gains of the saturated fallback law, per axis.
  Vec6 fallback_kp{Vec6(40.0, 40.0, 40.0, 8.0, 8.0, 8.0)};
  Vec6 fallback_kd{Vec6(20.0, 20.0, 20.0, 2.0, 2.0, 2.0)};

  /// Throws ConfigError naming the offending field (prefix "mpc.").
  void validate() const;
};

struct Reference
{
  Vec6 pose{Vec6::Zero()};
  Vec6 twist{Vec6::Zero()};
};

/// 1/2 U^T H U + g^T U + c subject to lower <= U <= upper, U = [tau_0; ...; tau_{H-1}].
struct MpcProblem
{
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  double constant{0.0};
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  double cost(const Eigen::VectorXd & u) const;
  double kkt_residual(const Eigen::VectorXd & u) const;
};

struct LinearizedModel
{
  /// delta_x[k+1] = A delta_x[k] + B tau[k] + c, with x = (eta, nu) and delta relative to the current state.
  Eigen::Matrix<double, 12, 12> a;
  Eigen::Matrix<double, 12, 6> b;
  Eigen::Matrix<double, 12, 1> c;
};

struct BoxQpResult
{
  Eigen::VectorXd solution;
  int iterations{0};
  double kkt_residual{0.0};
  bool converged{false};
};

struct MpcSolution
{
  std::vector<Wrench> wrenches;
  double cost{0.0};
  int iterations{0};
  double kkt_residual{0.0};
  bool converged{false};
  bool used_fallback{false};

  const Wrench & first() const {return wrenches.front();}
};

/// Pose error with shortest-angle wrapping on the attitude components.
Vec6 pose_error(const Vec6 & pose, const Vec6 & reference);

LinearizedModel linearize(const VehicleState & state, const DynamicsModel & model, double dt);

MpcProblem build_problem(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model);

/// Projected Newton iteration for a convex box-constrained QP.
BoxQpResult solve_box_qp(
  const MpcProblem & problem, int max_iterations, double tolerance);

/// Saturated PD wrench in the body frame, repeated over the horizon.
Eigen::VectorXd fallback_sequence(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg);

MpcSolution solve_wrench(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model);

struct AllocationResult
{
  Eigen::VectorXd commands;    // clamped to [-1, 1]
  Eigen::VectorXd unclamped;
  bool saturated{false};
};

/// Minimum-norm command allocation through the pseudo-inverse of T diag(f_max).
class Allocator
{
public:
  /// Throws AllocationError when the layout does not span all six DOFs.
  Allocator(std::vector<ThrusterSpec> thrusters, WaterParams water);

  AllocationResult allocate(const Wrench & wrench) const;

  const AllocationMatrix & matrix() const {return matrix_;}
  const Eigen::MatrixXd & pseudo_inverse() const {return pinv_;}
  const std::vector<ThrusterSpec> & thrusters() const {return thrusters_;}
  const WaterParams & water() const {return water_;}

private:
  std::vector<ThrusterSpec> thrusters_;
  WaterParams water_;
  AllocationMatrix matrix_;
  Eigen::MatrixXd pinv_;
};

AllocationResult allocate(
  const Wrench & wrench, const AllocationMatrix & matrix,
  const std::vector<ThrusterSpec> & thrusters, const WaterParams & water);

struct ControlOutput
{
  AllocationResult allocation;
  MpcSolution mpc;
};

ControlOutput control_step(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model, const Allocator & allocator);

/// "surge", "sway", "heave", "roll", "pitch", "yaw".
std::string dof_name(int index);

}  // namespace hydrosim
