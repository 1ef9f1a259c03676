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

#include "hydrosim/environment.hpp"

#include "hydrosim/errors.hpp"
#include "hydrosim/log.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace hydrosim
{

void format_episode_csv(std::ostream & out, const std::vector<EpisodeLogRow> & rows)
{
  out << "step,e_p,e_psi,reward\n";
  char buf[128];
  for (const auto & r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.step, r.e_p, r.e_psi, r.reward);
    out << buf;
  }
}

void write_episode_csv(const std::filesystem::path & path, const std::vector<EpisodeLogRow> & rows)
{
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("cannot write " + path.string());
  }
  format_episode_csv(f, rows);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t episode_seed)
{
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (episode_seed + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace
{

SensorSuiteConfig seeded(SensorSuiteConfig cfg, std::uint64_t episode_seed)
{
  if (cfg.imu) {
    cfg.imu->accelerometer.seed = mix_seed(cfg.imu->accelerometer.seed, episode_seed);
  }
  for (auto * s : {&cfg.depth, &cfg.velocity, &cfg.distance, &cfg.gps}) {
    if (*s) {
      (*s)->seed = mix_seed((*s)->seed, episode_seed);
    }
  }
  return cfg;
}

void merge(SensorReadings & into, const SensorReadings & fresh)
{
  if (fresh.imu) {into.imu = fresh.imu;}
  if (fresh.depth) {into.depth = fresh.depth;}
  if (fresh.velocity) {into.velocity = fresh.velocity;}
  if (fresh.distance) {into.distance = fresh.distance;}
  if (fresh.gps) {into.gps = fresh.gps;}
}

bool any_sensor(const SensorSuiteConfig & c)
{
  return c.imu || c.depth || c.velocity || c.distance || c.gps;
}

}  // namespace

Environment::Environment(SessionConfig config)
: config_(std::move(config)),
  model_(config_.vehicle.dynamics),
  allocator_(config_.vehicle.thrusters, config_.vehicle.water)
{
  config_.vehicle.validate();
  config_.water.validate();
  config_.scenario.validate();
  config_.mpc.control_period = 1.0 / config_.control_rate_hz;
  config_.mpc.validate();
  config_.sensors.validate();
  substeps_ = static_cast<int>(std::lround(config_.mpc.control_period / config_.physics_dt));
  if (substeps_ < 1) {
    throw ConfigError("control period is shorter than the physics step", "control_rate_hz");
  }
  scene_ = build_pipe_scene(config_.scenario);
}

const Observation & Environment::reset(std::optional<std::uint64_t> seed)
{
  episode_seed_ = seed.value_or(config_.seed);
  Rng rng(episode_seed_);
  const auto & sc = config_.scenario;
  state_ = VehicleState{};
  state_.pose = sc.initial_pose;
  const double jx = rng.normal();
  const double jy = rng.normal();
  const double jpsi = rng.normal();
  state_.pose[0] += sc.initial_position_sigma * jx;
  state_.pose[1] += sc.initial_position_sigma * jy;
  state_.pose[5] = wrap_angle(state_.pose[5] + sc.initial_yaw_sigma * jpsi);
  actuators_ = ActuatorState::zero(config_.vehicle.thrusters.size());
  sensors_ = std::make_unique<SensorSuite>(seeded(config_.sensors, episode_seed_));
  latest_sensors_ = {};
  reference_ = Reference{state_.pose, Vec6::Zero()};
  status_ = {};
  log_.clear();
  trajectory_.poses.clear();
  trajectory_.poses.push_back(ground_truth_pose(state_));
  ready_ = true;
  if (any_sensor(config_.sensors)) {
    const Vec6 accel = acceleration(state_, model_, Wrench::zero());
    merge(latest_sensors_, sensors_->poll(state_, accel, scene_));
  }
  observe(config_.render);
  return observation_;
}

void Environment::require_ready() const
{
  if (!ready_) {
    throw StateError("episode not started: call reset first");
  }
}

void Environment::run_period(const Eigen::VectorXd & commands)
{
  const auto & thrusters = config_.vehicle.thrusters;
  const auto & water = config_.vehicle.water;
  const bool sensing = any_sensor(config_.sensors);
  try {
    for (int k = 0; k < substeps_; ++k) {
      actuators_ = filter_inputs(actuators_, commands, config_.physics_dt, thrusters);
      const Wrench tau = total_wrench(actuators_.filtered, thrusters, water) +
        disturbance_wrench(config_.scenario.disturbance, state_.time);
      state_ = hydrosim::step(state_, model_, tau, config_.physics_dt);
      if (sensing) {
        const Vec6 accel = config_.sensors.imu ? acceleration(state_, model_, tau) : Vec6::Zero();
        merge(latest_sensors_, sensors_->poll(state_, accel, scene_));
      }
    }
  } catch (const DivergenceError &) {
    ready_ = false;
    throw;
  }
  trajectory_.poses.push_back(ground_truth_pose(state_));
}

void Environment::observe(bool render)
{
  observation_.state = state_;
  observation_.cross_track = pipe_cross_track(state_.position(), config_.scenario.layout);
  observation_.e_psi = heading_error(state_.pose[5], observation_.cross_track.direction);
  observation_.sensors = latest_sensors_;
  if (render) {
    observation_.frame = capture(
      state_, scene_, config_.vehicle.camera, config_.water, config_.render_threads);
  } else {
    observation_.frame.reset();
  }
}

StepResult Environment::step(const Action & action)
{
  require_ready();
  if (status_.terminated) {
    throw StateError("episode terminated (" + to_string(status_.reason) + "): call reset");
  }
  const auto & sc = config_.scenario;
  const CrossTrack here = pipe_cross_track(state_.position(), sc.layout);
  reference_ = apply_action(state_, action, here.closest.z() - sc.altitude, sc.step_length);

  StepResult result;
  const double start = state_.time;
  while (true) {
    const ControlOutput ctl = control_step(state_, reference_, config_.mpc, model_, allocator_);
    run_period(ctl.allocation.commands);
    ++result.control_periods;
    if ((state_.position() - reference_.pose.head<3>()).norm() < sc.waypoint_tolerance) {
      result.waypoint_reached = true;
      break;
    }
    if (state_.time - start >= sc.waypoint_timeout - 1e-9) {
      logger()->debug("waypoint timeout at t={:.3f}", state_.time);
      break;
    }
  }

  observe(config_.render);
  const auto & ct = observation_.cross_track;
  ++status_.step;
  result.reward = reward(ct.e_p, observation_.e_psi);
  status_.cumulative_reward += result.reward;
  status_.reason = check_termination(
    ct.e_p, status_.step, sc.max_steps, ct.arc_progress, sc.layout.length(), sc.goal_tolerance);
  status_.terminated = status_.reason != TerminationReason::kNone;
  log_.push_back({status_.step, ct.e_p, observation_.e_psi, result.reward});
  result.status = status_;
  result.observation = observation_;
  return result;
}

const VehicleState & Environment::step_thrusters(const Eigen::VectorXd & commands)
{
  require_ready();
  const auto n = static_cast<Eigen::Index>(config_.vehicle.thrusters.size());
  if (commands.size() != n) {
    throw std::invalid_argument(
      "expected " + std::to_string(n) + " thruster commands, got " + std::to_string(commands.size()));
  }
  if (!commands.allFinite()) {
    throw std::invalid_argument("thruster commands must be finite");
  }
  run_period(commands.cwiseMax(-1.0).cwiseMin(1.0));
  observe(false);
  return state_;
}

}  // namespace hydrosim
