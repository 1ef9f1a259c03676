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
 * @file config.hpp
 * @brief JSON loading and validation for vehicle, water, scene, scenario and session files.
 *
 * Every rejection is a ConfigError whose field() is a path into the document, for example
 * "thrusters[2].direction" or "mpc.horizon".
 */

#pragma once

#include "hydrosim/actuation.hpp"
#include "hydrosim/camera.hpp"
#include "hydrosim/control.hpp"
#include "hydrosim/dynamics.hpp"
#include "hydrosim/scenario.hpp"
#include "hydrosim/scene.hpp"
#include "hydrosim/sensors.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hydrosim
{

struct VehicleConfig
{
  std::string name{"vehicle"};
  DynamicsParams dynamics;
  std::vector<ThrusterSpec> thrusters;
  WaterParams water;
  CameraIntrinsics camera;

  /// Runs every module-level check (dynamics, thrusters, camera, allocation rank).
  void validate() const;
};

/// Representative BlueROV2 Heavy parameters; identical to config/bluerov2_heavy.json.
VehicleConfig bluerov2_heavy();

struct SessionConfig
{
  VehicleConfig vehicle = bluerov2_heavy();
  WaterOpticsParams water;
  ScenarioConfig scenario;
  MpcConfig mpc;
  SensorSuiteConfig sensors;
  std::uint64_t seed{0};
  double physics_dt{kDefaultPhysicsDt};
  double control_rate_hz{20.0};
  bool render{true};
  unsigned render_threads{1};
  bool inline_frames{false};
};

nlohmann::json read_json(const std::filesystem::path & path);

VehicleConfig parse_vehicle(const nlohmann::json & j);
WaterOpticsParams parse_water(const nlohmann::json & j);
Scene parse_scene(const nlohmann::json & j);
/// Relative "scene" paths resolve against `base_dir`.
ScenarioConfig parse_scenario(const nlohmann::json & j, const std::filesystem::path & base_dir = {});
MpcConfig parse_mpc(const nlohmann::json & j, const std::string & prefix = "mpc");
SensorSuiteConfig parse_sensors(const nlohmann::json & j, const std::string & prefix = "sensors");
/// "vehicle", "water" and "scenario" may be file paths (relative to `base_dir`) or inline objects.
SessionConfig parse_session(const nlohmann::json & j, const std::filesystem::path & base_dir = {});

nlohmann::json to_json(const VehicleConfig & v);
nlohmann::json to_json(const WaterOpticsParams & w);

VehicleConfig load_vehicle(const std::filesystem::path & path);
WaterOpticsParams load_water(const std::filesystem::path & path);
Scene load_scene(const std::filesystem::path & path);
ScenarioConfig load_scenario(const std::filesystem::path & path);
SessionConfig load_session(const std::filesystem::path & path);

enum class ConfigKind { kVehicle, kWater, kScene, kScenario, kSession };

/// Guesses the document type from its top-level keys.
ConfigKind detect_kind(const nlohmann::json & j);
std::string to_string(ConfigKind kind);

/// Parses and validates a file of any kind; returns the kind found.
ConfigKind validate_file(const std::filesystem::path & path);

}  // namespace hydrosim
