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
 * @file sensors.hpp
 * @brief Seedable IMU, depth, body-velocity, distance and surface GPS models.
 */

#pragma once

#include "hydrosim/dynamics.hpp"
#include "hydrosim/rng.hpp"
#include "hydrosim/scene.hpp"
#include "hydrosim/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace hydrosim
{

/// Additive Gaussian noise plus constant bias. Scalar sensors use the x component.
struct SensorNoise
{
  Vec3 sigma{Vec3::Zero()};
  Vec3 bias{Vec3::Zero()};
  double rate_hz{20.0};
  std::uint64_t seed{0};

  /// Throws ConfigError with `prefix` in the field path.
  void validate(const std::string & prefix) const;
};

struct ImuNoise
{
  SensorNoise accelerometer;
  SensorNoise gyroscope;
};

struct ImuSample
{
  Vec3 specific_force{Vec3::Zero()};  // m/s^2, body
  Vec3 angular_rate{Vec3::Zero()};    // rad/s, body
  double timestamp{0.0};
};

struct GpsFix
{
  bool valid{false};
  Vec3 position{Vec3::Zero()};  // NED
  double timestamp{0.0};
};

/// Fixes are only available this close to the surface.
inline constexpr double kGpsMaxDepth = 0.5;

/// `true_accel` is the body twist derivative. Specific force is v_dot + w x v - R^T g.
/// Noise draws come from `rng` in the order: three accelerometer axes, three gyro axes.
ImuSample sample_imu(
  const VehicleState & state, const Vec6 & true_accel, const ImuNoise & noise, Rng & rng);

double sample_depth(const VehicleState & state, const SensorNoise & noise, Rng & rng);

/// Body-frame linear velocity, DVL style.
Vec3 sample_body_velocity(const VehicleState & state, const SensorNoise & noise, Rng & rng);

/// Range along body +z to the nearest surface. Returns exactly `max_range` on no hit;
/// noisy hits are clamped to [0, max_range].
double sample_distance(
  const VehicleState & state, const Scene & scene, double max_range,
  const SensorNoise & noise, Rng & rng);

GpsFix sample_gps(const VehicleState & state, const SensorNoise & noise, Rng & rng);

TimedPose ground_truth_pose(const VehicleState & state);

struct SensorSuiteConfig
{
  std::optional<ImuNoise> imu;
  std::optional<SensorNoise> depth;
  std::optional<SensorNoise> velocity;
  std::optional<SensorNoise> distance;
  double distance_max_range{30.0};
  std::optional<SensorNoise> gps;

  void validate() const;
};

struct SensorReadings
{
  std::optional<ImuSample> imu;
  std::optional<double> depth;
  std::optional<Vec3> velocity;
  std::optional<double> distance;
  std::optional<GpsFix> gps;
};

/// Samples each configured sensor at its own rate from its own stream. A sensor with rate
/// f fires on the first poll at or after each k / f.
class SensorSuite
{
public:
  explicit SensorSuite(SensorSuiteConfig config = {});

  SensorReadings poll(const VehicleState & state, const Vec6 & true_accel, const Scene & scene);
  /// Unconditional sample of every configured sensor.
  SensorReadings sample_all(const VehicleState & state, const Vec6 & true_accel, const Scene & scene);

  const SensorSuiteConfig & config() const {return config_;}

private:
  struct Channel
  {
    Rng rng;
    std::uint64_t count{0};
  };

  bool due(Channel & channel, double rate_hz, double time);

  SensorSuiteConfig config_;
  Channel imu_;
  Channel depth_;
  Channel velocity_;
  Channel distance_;
  Channel gps_;
};

}  // namespace hydrosim
