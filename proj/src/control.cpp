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

#include "hydrosim/control.hpp"

#include "hydrosim/errors.hpp"
#include "hydrosim/log.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>

namespace hydrosim
{

namespace
{

using Vec12 = Eigen::Matrix<double, 12, 1>;

void require_psd(const Mat6 & m, const std::string & field, bool strict)
{
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("must be symmetric", field);
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Mat6>(m).eigenvalues().minCoeff();
  if (strict ? !(min_eig > 0.0) : min_eig < -1e-12) {
    throw ConfigError(strict ? "must be positive definite" : "must be positive semidefinite", field);
  }
}

Eigen::VectorXd clamp(
  const Eigen::VectorXd & u, const Eigen::VectorXd & lo, const Eigen::VectorXd & hi)
{
  return u.cwiseMax(lo).cwiseMin(hi);
}

Vec12 continuous_rate(const Vec12 & x, const DynamicsModel & model)
{
  VehicleState s;
  s.pose = x.head<6>();
  s.twist = x.tail<6>();
  Vec12 f;
  f << pose_rate(s.pose, s.twist), acceleration(s, model, Wrench::zero());
  return f;
}

}  // namespace

void MpcConfig::validate() const
{
  if (horizon < 1) {
    throw ConfigError("must be >= 1", "mpc.horizon");
  }
  if (!(control_period > 0.0)) {
    throw ConfigError("must be > 0", "mpc.control_period");
  }
  require_psd(pose_weight, "mpc.pose_weight", false);
  require_psd(velocity_weight, "mpc.velocity_weight", false);
  require_psd(input_weight, "mpc.input_weight", true);
  for (int i = 0; i < 6; ++i) {
    if (!(wrench_min[i] < wrench_max[i])) {
      throw ConfigError("wrench_min must be < wrench_max", "mpc.wrench_bounds");
    }
  }
  if (max_iterations < 1) {
    throw ConfigError("must be >= 1", "mpc.max_iterations");
  }
  if (!(kkt_tolerance > 0.0)) {
    throw ConfigError("must be > 0", "mpc.kkt_tolerance");
  }
}

double MpcProblem::cost(const Eigen::VectorXd & u) const
{
  return 0.5 * u.dot(hessian * u) + gradient.dot(u) + constant;
}

double MpcProblem::kkt_residual(const Eigen::VectorXd & u) const
{
  const Eigen::VectorXd grad = hessian * u + gradient;
  return (u - clamp(u - grad, lower, upper)).cwiseAbs().maxCoeff();
}

Vec6 pose_error(const Vec6 & pose, const Vec6 & reference)
{
  Vec6 e = pose - reference;
  for (int i = 3; i < 6; ++i) {
    e[i] = wrap_angle(e[i]);
  }
  return e;
}

LinearizedModel linearize(const VehicleState & state, const DynamicsModel & model, double dt)
{
  Vec12 x0;
  x0 << state.pose, state.twist;

  Eigen::Matrix<double, 12, 12> jac;
  for (int i = 0; i < 12; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x0[i]));
    Vec12 xp = x0;
    Vec12 xm = x0;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (continuous_rate(xp, model) - continuous_rate(xm, model)) / (2.0 * h);
  }
  Eigen::Matrix<double, 12, 6> b_cont = Eigen::Matrix<double, 12, 6>::Zero();
  b_cont.bottomRows<6>() = model.total_mass_inverse();
  const Vec12 c_cont = continuous_rate(x0, model);

  // zero-order hold of the affine system via the augmented exponential
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(19, 19);
  aug.topLeftCorner(12, 12) = jac;
  aug.block(0, 12, 12, 6) = b_cont;
  aug.block(0, 18, 12, 1) = c_cont;
  const Eigen::MatrixXd phi = (aug * dt).exp();

  LinearizedModel lin;
  lin.a = phi.topLeftCorner(12, 12);
  lin.b = phi.block(0, 12, 12, 6);
  lin.c = phi.block(0, 18, 12, 1);
  return lin;
}

MpcProblem build_problem(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model)
{
  const int horizon = cfg.horizon;
  const int nx = 12;
  const int nu = 6;
  const LinearizedModel lin = linearize(state, model, cfg.control_period);

  Eigen::Matrix<double, 12, 12> weight = Eigen::Matrix<double, 12, 12>::Zero();
  weight.topLeftCorner<6, 6>() = cfg.pose_weight;
  weight.bottomRightCorner<6, 6>() = cfg.velocity_weight;

  // gamma(k, j) = A^(k-1-j) B, offsets r_k = z0 + sum_{i<k} A^i c
  std::vector<Eigen::Matrix<double, 12, 6>> a_pow_b(static_cast<std::size_t>(horizon));
  a_pow_b[0] = lin.b;
  for (int k = 1; k < horizon; ++k) {
    a_pow_b[static_cast<std::size_t>(k)] = lin.a * a_pow_b[static_cast<std::size_t>(k - 1)];
  }
  Vec12 z0;
  z0 << pose_error(state.pose, ref.pose), state.twist - ref.twist;

  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(nx * horizon, nu * horizon);
  Eigen::VectorXd offset(nx * horizon);
  Vec12 drift = Vec12::Zero();
  for (int k = 0; k < horizon; ++k) {
    drift = lin.a * drift + lin.c;
    offset.segment<12>(nx * k) = z0 + drift;
    for (int j = 0; j <= k; ++j) {
      gamma.block(nx * k, nu * j, nx, nu) = a_pow_b[static_cast<std::size_t>(k - j)];
    }
  }

  Eigen::MatrixXd weighted_gamma(nx * horizon, nu * horizon);
  Eigen::VectorXd weighted_offset(nx * horizon);
  for (int k = 0; k < horizon; ++k) {
    weighted_gamma.middleRows(nx * k, nx) = weight * gamma.middleRows(nx * k, nx);
    weighted_offset.segment<12>(nx * k) = weight * offset.segment<12>(nx * k);
  }

  MpcProblem p;
  p.hessian = 2.0 * gamma.transpose() * weighted_gamma;
  for (int k = 0; k < horizon; ++k) {
    p.hessian.block(nu * k, nu * k, nu, nu) += 2.0 * cfg.input_weight;
  }
  p.hessian = 0.5 * (p.hessian + p.hessian.transpose()).eval();
  p.gradient = 2.0 * gamma.transpose() * weighted_offset;
  p.constant = offset.dot(weighted_offset);
  p.lower = cfg.wrench_min.replicate(horizon, 1);
  p.upper = cfg.wrench_max.replicate(horizon, 1);
  return p;
}

BoxQpResult solve_box_qp(const MpcProblem & problem, int max_iterations, double tolerance)
{
  const auto n = problem.gradient.size();
  const auto & lo = problem.lower;
  const auto & hi = problem.upper;

  BoxQpResult result;
  result.solution = clamp(problem.hessian.ldlt().solve(-problem.gradient), lo, hi);
  Eigen::VectorXd & u = result.solution;

  const double range = (hi - lo).maxCoeff();
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd grad = problem.hessian * u + problem.gradient;
    result.kkt_residual = (u - clamp(u - grad, lo, hi)).cwiseAbs().maxCoeff();
    if (result.kkt_residual <= tolerance) {
      result.converged = true;
      return result;
    }
    result.iterations = it + 1;

    // epsilon-active set, shrinking with the stationarity residual
    const double eps = std::min(1e-6 * range, result.kkt_residual);
    std::vector<Eigen::Index> free;
    free.reserve(static_cast<std::size_t>(n));
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lower = u[i] <= lo[i] + eps && grad[i] > 0.0;
      const bool at_upper = u[i] >= hi[i] - eps && grad[i] < 0.0;
      if (at_lower || at_upper) {
        dir[i] = -grad[i] / problem.hessian(i, i);
      } else {
        free.push_back(i);
      }
    }
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd h_ff(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        rhs[a] = -grad[free[static_cast<std::size_t>(a)]];
        for (Eigen::Index b = 0; b < nf; ++b) {
          h_ff(a, b) = problem.hessian(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
        }
      }
      const Eigen::VectorXd d_free = h_ff.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < nf; ++a) {
        dir[free[static_cast<std::size_t>(a)]] = d_free[a];
      }
    }

    // Armijo search along the projection arc
    const double f0 = problem.cost(u);
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-12) {
      Eigen::VectorXd trial = clamp(u + step * dir, lo, hi);
      if (problem.cost(trial) <= f0 + 1e-4 * grad.dot(trial - u)) {
        u = std::move(trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;
    }
  }
  result.kkt_residual = problem.kkt_residual(u);
  result.converged = result.kkt_residual <= tolerance;
  return result;
}

Eigen::VectorXd fallback_sequence(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg)
{
  const Vec6 e = pose_error(state.pose, ref.pose);
  const Mat3 rt = state.rotation().transpose();
  Vec6 err_body;
  err_body << rt * e.head<3>(), e.tail<3>();
  const Vec6 dv = state.twist - ref.twist;
  const Vec6 tau = (-cfg.fallback_kp.cwiseProduct(err_body) - cfg.fallback_kd.cwiseProduct(dv))
    .cwiseMax(cfg.wrench_min).cwiseMin(cfg.wrench_max);
  return tau.replicate(cfg.horizon, 1);
}

MpcSolution solve_wrench(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model)
{
  const MpcProblem problem = build_problem(state, ref, cfg, model);
  const BoxQpResult qp = solve_box_qp(problem, cfg.max_iterations, cfg.kkt_tolerance);

  MpcSolution out;
  out.iterations = qp.iterations;
  out.kkt_residual = qp.kkt_residual;
  out.converged = qp.converged;
  Eigen::VectorXd u = qp.solution;
  if (!qp.converged) {
    logger()->warn(
      "MPC did not converge after {} iterations (KKT residual {:.3e}); using fallback wrench",
      qp.iterations, qp.kkt_residual);
    u = fallback_sequence(state, ref, cfg);
    out.used_fallback = true;
  }
  out.cost = problem.cost(u);
  out.wrenches.reserve(static_cast<std::size_t>(cfg.horizon));
  for (int k = 0; k < cfg.horizon; ++k) {
    out.wrenches.push_back(Wrench::from_vector(u.segment<6>(6 * k)));
  }
  return out;
}

std::string dof_name(int index)
{
  static const std::array<const char *, 6> names{"surge", "sway", "heave", "roll", "pitch", "yaw"};
  return index >= 0 && index < 6 ? names[static_cast<std::size_t>(index)] : "unknown";
}

Allocator::Allocator(std::vector<ThrusterSpec> thrusters, WaterParams water)
: thrusters_(std::move(thrusters)), water_(water)
{
  validate_thrusters(thrusters_);
  matrix_ = allocation_matrix(thrusters_);
  const auto n = matrix_.cols();
  Eigen::VectorXd fmax(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    fmax[i] = max_thrust(thrusters_[static_cast<std::size_t>(i)], water_);
  }
  const Eigen::MatrixXd scaled = matrix_ * fmax.asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd & sv = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  std::string lost;
  int rank = 0;
  for (Eigen::Index k = 0; k < 6; ++k) {
    if (k < sv.size() && sv[k] > tol) {
      ++rank;
      continue;
    }
    // the wrench direction the layout cannot produce
    Eigen::Index dominant = 0;
    if (k < svd.matrixU().cols()) {
      svd.matrixU().col(k).cwiseAbs().maxCoeff(&dominant);
    } else {
      // fewer thrusters than DOFs: complement of the column space
      Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(scaled).householderQ();
      q.col(k).cwiseAbs().maxCoeff(&dominant);
    }
    lost += (lost.empty() ? "" : ", ") + dof_name(static_cast<int>(dominant));
  }
  if (rank < 6) {
    throw AllocationError(
      "allocation matrix has rank " + std::to_string(rank) + "; cannot actuate: " + lost);
  }
  pinv_ = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

AllocationResult Allocator::allocate(const Wrench & wrench) const
{
  AllocationResult r;
  r.unclamped = pinv_ * wrench.vector();
  r.commands = r.unclamped.cwiseMax(-1.0).cwiseMin(1.0);
  r.saturated = (r.unclamped.cwiseAbs().array() > 1.0).any();
  return r;
}

AllocationResult allocate(
  const Wrench & wrench, const AllocationMatrix & matrix,
  const std::vector<ThrusterSpec> & thrusters, const WaterParams & water)
{
  const Allocator allocator(thrusters, water);
  if (!allocator.matrix().isApprox(matrix, 1e-12)) {
    throw AllocationError("allocation matrix does not match the thruster table");
  }
  return allocator.allocate(wrench);
}

ControlOutput control_step(
  const VehicleState & state, const Reference & ref, const MpcConfig & cfg,
  const DynamicsModel & model, const Allocator & allocator)
{
  ControlOutput out;
  out.mpc = solve_wrench(state, ref, cfg, model);
  out.allocation = allocator.allocate(out.mpc.first());
  return out;
}

}  // namespace hydrosim
