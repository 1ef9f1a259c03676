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
 * @file environment.hpp
 * @brief One pipe-inspection episode: physics at the physics rate, MPC at the control rate,
 * and one agent decision per reached (or timed-out) waypoint.
 */

#pragma once

#include "hydrosim/config.hpp"
#include "hydrosim/trajectory.hpp"

#include <iosfwd>
#include <memory>
#include <optional>

namespace hydrosim
{

struct Observation
{
  VehicleState state;
  CrossTrack cross_track;
  double e_psi{0.0};
  std::optional<RenderedFrame> frame;
  SensorReadings sensors;
};

struct StepResult
{
  Observation observation;
  double reward{0.0};
  EpisodeStatus status;
  bool waypoint_reached{false};
  int control_periods{0};
};

struct EpisodeLogRow
{
  int step{0};
  double e_p{0.0};
  double e_psi{0.0};
  double reward{0.0};
};

/// Header "step,e_p,e_psi,reward"; values printed round-trip exact.
void format_episode_csv(std::ostream & out, const std::vector<EpisodeLogRow> & rows);
void write_episode_csv(const std::filesystem::path & path, const std::vector<EpisodeLogRow> & rows);

/// Mixes a per-sensor seed with the episode seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t episode_seed);

class Environment
{
public:
  /// Throws ConfigError for an invalid configuration.
  explicit Environment(SessionConfig config);

  /// Starts a new episode; `seed` overrides the configured one.
  const Observation & reset(std::optional<std::uint64_t> seed = std::nullopt);

  /// Throws StateError before reset or after termination, DivergenceError if physics blows up
  /// (the episode then needs a reset).
  StepResult step(const Action & action);

  /// One control period with raw thruster commands, bypassing MPC. Commands are clamped.
  /// Throws std::invalid_argument on a length mismatch.
  const VehicleState & step_thrusters(const Eigen::VectorXd & commands);

  bool ready() const {return ready_;}
  const SessionConfig & config() const {return config_;}
  const VehicleState & state() const {return state_;}
  const Observation & observation() const {return observation_;}
  const EpisodeStatus & status() const {return status_;}
  const std::vector<EpisodeLogRow> & log() const {return log_;}
  /// Ground truth sampled once per control period, starting at reset.
  const Trajectory & trajectory() const {return trajectory_;}
  const Scene & scene() const {return scene_;}
  const Reference & reference() const {return reference_;}
  std::uint64_t episode_seed() const {return episode_seed_;}
  int physics_steps_per_period() const {return substeps_;}

private:
  void require_ready() const;
  void run_period(const Eigen::VectorXd & commands);
  void observe(bool render);

  SessionConfig config_;
  DynamicsModel model_;
  Allocator allocator_;
  Scene scene_;
  int substeps_{1};

  bool ready_{false};
  std::uint64_t episode_seed_{0};
  VehicleState state_;
  ActuatorState actuators_;
  std::unique_ptr<SensorSuite> sensors_;
  SensorReadings latest_sensors_;
  Reference reference_;
  EpisodeStatus status_;
  Observation observation_;
  std::vector<EpisodeLogRow> log_;
  Trajectory trajectory_;
};

}  // namespace hydrosim
