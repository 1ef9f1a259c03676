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

#include "hydrosim/sensors.hpp"

#include "hydrosim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hydrosim
{

namespace
{

Vec3 draw3(Rng & rng)
{
  const double a = rng.normal();
  const double b = rng.normal();
  const double c = rng.normal();
  return {a, b, c};
}

Vec3 corrupt(const Vec3 & truth, const SensorNoise & noise, Rng & rng)
{
  return truth + noise.bias + noise.sigma.cwiseProduct(draw3(rng));
}

double corrupt(double truth, const SensorNoise & noise, Rng & rng)
{
  return truth + noise.bias.x() + noise.sigma.x() * rng.normal();
}

}  // namespace

void SensorNoise::validate(const std::string & prefix) const
{
  if (!sigma.allFinite() || (sigma.array() < 0.0).any()) {
    throw ConfigError("must be finite and >= 0", prefix + ".sigma");
  }
  if (!bias.allFinite()) {
    throw ConfigError("must be finite", prefix + ".bias");
  }
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw ConfigError("must be > 0", prefix + ".rate_hz");
  }
}

ImuSample sample_imu(
  const VehicleState & state, const Vec6 & true_accel, const ImuNoise & noise, Rng & rng)
{
  const Vec3 v = state.twist.head<3>();
  const Vec3 w = state.twist.tail<3>();
  const Vec3 gravity_body = state.rotation().transpose() * Vec3(0.0, 0.0, kGravity);
  ImuSample s;
  s.specific_force = corrupt(true_accel.head<3>() + w.cross(v) - gravity_body, noise.accelerometer, rng);
  s.angular_rate = corrupt(w, noise.gyroscope, rng);
  s.timestamp = state.time;
  return s;
}

double sample_depth(const VehicleState & state, const SensorNoise & noise, Rng & rng)
{
  return corrupt(state.pose[2], noise, rng);
}

Vec3 sample_body_velocity(const VehicleState & state, const SensorNoise & noise, Rng & rng)
{
  return corrupt(Vec3(state.twist.head<3>()), noise, rng);
}

double sample_distance(
  const VehicleState & state, const Scene & scene, double max_range,
  const SensorNoise & noise, Rng & rng)
{
  const double n = rng.normal();
  const Ray ray{state.position(), state.rotation().col(2)};
  const auto hit = scene.cast(ray, max_range);
  if (!hit) {
    return max_range;
  }
  const double r = hit->range + noise.bias.x() + noise.sigma.x() * n;
  return std::clamp(r, 0.0, max_range);
}

GpsFix sample_gps(const VehicleState & state, const SensorNoise & noise, Rng & rng)
{
  GpsFix fix;
  fix.timestamp = state.time;
  fix.position = corrupt(state.position(), noise, rng);
  fix.valid = state.pose[2] <= kGpsMaxDepth;
  if (!fix.valid) {
    fix.position.setZero();
  }
  return fix;
}

TimedPose ground_truth_pose(const VehicleState & state)
{
  return {state.time, state.position(), canonicalize(euler_to_quaternion(state.attitude()))};
}

void SensorSuiteConfig::validate() const
{
  if (imu) {
    imu->accelerometer.validate("sensors.imu.accelerometer");
    imu->gyroscope.validate("sensors.imu.gyroscope");
  }
  if (depth) {
    depth->validate("sensors.depth");
  }
  if (velocity) {
    velocity->validate("sensors.velocity");
  }
  if (distance) {
    distance->validate("sensors.distance");
  }
  if (!(distance_max_range > 0.0)) {
    throw ConfigError("must be > 0", "sensors.distance.max_range");
  }
  if (gps) {
    gps->validate("sensors.gps");
  }
}

SensorSuite::SensorSuite(SensorSuiteConfig config)
: config_(std::move(config)),
  imu_{Rng(config_.imu ? config_.imu->accelerometer.seed : 0)},
  depth_{Rng(config_.depth ? config_.depth->seed : 0)},
  velocity_{Rng(config_.velocity ? config_.velocity->seed : 0)},
  distance_{Rng(config_.distance ? config_.distance->seed : 0)},
  gps_{Rng(config_.gps ? config_.gps->seed : 0)}
{
  config_.validate();
}

bool SensorSuite::due(Channel & channel, double rate_hz, double time)
{
  const double next = static_cast<double>(channel.count) / rate_hz;
  if (time + 1e-9 < next) {
    return false;
  }
  // skip sample instants that fell entirely inside a long gap between polls
  channel.count = static_cast<std::uint64_t>(std::floor((time + 1e-9) * rate_hz)) + 1;
  return true;
}

SensorReadings SensorSuite::poll(const VehicleState & state, const Vec6 & true_accel, const Scene & scene)
{
  SensorReadings out;
  const double t = state.time;
  if (config_.imu && due(imu_, config_.imu->accelerometer.rate_hz, t)) {
    out.imu = sample_imu(state, true_accel, *config_.imu, imu_.rng);
  }
  if (config_.depth && due(depth_, config_.depth->rate_hz, t)) {
    out.depth = sample_depth(state, *config_.depth, depth_.rng);
  }
  if (config_.velocity && due(velocity_, config_.velocity->rate_hz, t)) {
    out.velocity = sample_body_velocity(state, *config_.velocity, velocity_.rng);
  }
  if (config_.distance && due(distance_, config_.distance->rate_hz, t)) {
    out.distance = sample_distance(state, scene, config_.distance_max_range, *config_.distance, distance_.rng);
  }
  if (config_.gps && due(gps_, config_.gps->rate_hz, t)) {
    out.gps = sample_gps(state, *config_.gps, gps_.rng);
  }
  return out;
}

SensorReadings SensorSuite::sample_all(
  const VehicleState & state, const Vec6 & true_accel, const Scene & scene)
{
  SensorReadings out;
  if (config_.imu) {
    out.imu = sample_imu(state, true_accel, *config_.imu, imu_.rng);
  }
  if (config_.depth) {
    out.depth = sample_depth(state, *config_.depth, depth_.rng);
  }
  if (config_.velocity) {
    out.velocity = sample_body_velocity(state, *config_.velocity, velocity_.rng);
  }
  if (config_.distance) {
    out.distance = sample_distance(state, scene, config_.distance_max_range, *config_.distance, distance_.rng);
  }
  if (config_.gps) {
    out.gps = sample_gps(state, *config_.gps, gps_.rng);
  }
  return out;
}

}  // namespace hydrosim
