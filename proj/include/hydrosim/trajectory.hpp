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
 * @file trajectory.hpp
 * @brief Trajectory files, time association, Umeyama alignment and APE/RPE metrics.
 */

#pragma once

#include "hydrosim/math.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hydrosim
{

struct TimedPose
{
  double timestamp{0.0};
  Vec3 position{Vec3::Zero()};
  UnitQuaternion orientation{};

  Mat3 rotation() const {return quaternion_to_rotation(orientation);}
};

/// Poses with strictly increasing timestamps.
struct Trajectory
{
  std::vector<TimedPose> poses;

  std::size_t size() const {return poses.size();}
  bool empty() const {return poses.empty();}
  const TimedPose & operator[](std::size_t i) const {return poses[i];}
};

/// Rows "timestamp tx ty tz qx qy qz qw"; '#' lines and blank lines are skipped.
/// Throws TrajectoryError with the 1-based line number on malformed or non-increasing rows.
Trajectory parse_tum(std::istream & in);
Trajectory read_tum(const std::filesystem::path & path);

/// Fixed notation with 9 fractional digits.
void format_tum(std::ostream & out, const Trajectory & traj);
void write_tum(const Trajectory & traj, const std::filesystem::path & path);

using PairIndex = std::pair<std::size_t, std::size_t>;

inline constexpr double kDefaultMaxDt = 0.02;

/// One-to-one nearest-timestamp pairs (est index, gt index), sorted by est index.
/// Throws TrajectoryError when nothing pairs.
std::vector<PairIndex> associate(
  const Trajectory & est, const Trajectory & gt, double max_dt = kDefaultMaxDt);

/// Least-squares s R p_i + t ~= q_i. Throws TrajectoryError for fewer than 3 points or
/// collinear/coincident sets.
Sim3Transform umeyama_align(
  const std::vector<Vec3> & source, const std::vector<Vec3> & target, bool with_scale);

enum class Alignment { kNone, kSE3, kSim3 };

Alignment parse_alignment(const std::string & name);
std::string to_string(Alignment a);

struct ErrorStats
{
  double rmse{0.0};
  double mean{0.0};
  double median{0.0};
  double max{0.0};
  std::size_t count{0};
};

ErrorStats error_stats(std::vector<double> errors);

struct MetricSlice
{
  ErrorStats translation;  // m
  ErrorStats rotation;     // rad
};

struct MetricReport
{
  MetricSlice ape;
  MetricSlice rpe;
  Alignment alignment{Alignment::kSim3};
  std::size_t rpe_delta{1};
  std::size_t pairs{0};
  Sim3Transform transform;
};

/// Per-pair errors after alignment; `transform` receives the alignment used, if non-null.
MetricSlice ape(
  const Trajectory & est, const Trajectory & gt, Alignment align,
  double max_dt = kDefaultMaxDt, Sim3Transform * transform = nullptr);

/// Relative-motion errors over `delta` associated frames, without alignment.
MetricSlice rpe(
  const Trajectory & est, const Trajectory & gt, std::size_t delta = 1,
  double max_dt = kDefaultMaxDt);

MetricReport evaluate(
  const Trajectory & est, const Trajectory & gt, Alignment align, std::size_t rpe_delta,
  double max_dt);

struct OdometryNoise
{
  /// Lateral bias per meter travelled, applied in the body frame of each relative motion.
  double drift_rate{0.0};
  double sigma_translation{0.0};  // m per step
  double sigma_rotation{0.0};     // rad per step
  std::uint64_t seed{0};
};

/// Dead-reckoned estimate from corrupted ground-truth relative motions.
Trajectory synth_odometry(const Trajectory & gt, const OdometryNoise & noise);

struct ReportEntry
{
  std::string trajectory;
  std::string algorithm;
  double ape_translation{0.0};
  double rpe_translation{0.0};
  double ape_rotation{0.0};
  double rpe_rotation{0.0};

  static ReportEntry from(std::string trajectory, std::string algorithm, const MetricReport & m);
};

/// 3 significant digits, e.g. 0.036 -> "0.036", 1.75 -> "1.75".
std::string format_metric(double value);

/// Markdown table; per-column minimum is bolded, ties included.
std::string report(const std::vector<ReportEntry> & entries);

nlohmann::json to_json(const MetricReport & m);
nlohmann::json to_json(const ErrorStats & s);

}  // namespace hydrosim
