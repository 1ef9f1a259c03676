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
 * @file camera.hpp
 * @brief Ray-cast camera with an underwater image formation model.
 *
 * Each pixel and colour channel c is formed as
 *
 *   I_c = D_c + F_c + B_c
 *   D_c = J_c exp(-beta_c d)                 direct, attenuated object signal
 *   B_c = B_inf_c (1 - exp(-beta_c d))       backscatter toward the veiling light
 *   F_c = w_f (blur_sigma(D)_c - D_c)        forward scatter, sigma = sigma_f d pixels
 *
 * where J is the in-air radiance and d the Euclidean ray range. Pixels that hit
 * nothing (d = inf) see pure veiling light.
 */

#pragma once

#include "hydrosim/dynamics.hpp"
#include "hydrosim/scene.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hydrosim
{

/// Pinhole camera. The unrotated mount looks along body +x with image right = body +y;
/// mount pitch -pi/2 looks straight down with the top of the image forward.
struct CameraIntrinsics
{
  int width{320};
  int height{180};
  double horizontal_fov{kPi / 2.0};
  Vec3 mount_position{Vec3::Zero()};
  EulerRPY mount_attitude{0.0, -kPi / 2.0, 0.0};

  double focal_length() const;
  /// Throws ConfigError.
  void validate() const;
};

struct WaterOpticsParams
{
  Vec3 attenuation{0.45, 0.12, 0.08};     // beta_c [1/m]
  Vec3 veiling_light{0.02, 0.25, 0.35};   // B_inf_c
  double forward_scatter_sigma{0.5};      // pixels per meter of range
  double forward_scatter_weight{0.2};
  double schlick_k{0.0};
  /// Scale B_inf by 4 pi p(cos theta) with theta between light and view directions.
  bool phase_modulated_backscatter{false};

  /// Clear water: the image formation model reduces to the identity.
  static WaterOpticsParams clear();
  void validate() const;
};

/// Row-major interleaved RGB, values in [0, 1].
struct RgbImage
{
  int width{0};
  int height{0};
  std::vector<double> data;

  RgbImage() = default;
  RgbImage(int w, int h, const Vec3 & fill = Vec3::Zero());

  Vec3 at(int x, int y) const;
  void set(int x, int y, const Vec3 & value);
  friend bool operator==(const RgbImage &, const RgbImage &) = default;
};

/// Row-major range image in meters, +inf where nothing was hit.
struct DepthImage
{
  int width{0};
  int height{0};
  std::vector<double> data;

  DepthImage() = default;
  DepthImage(int w, int h, double fill = kInfinity);

  double at(int x, int y) const {return data[static_cast<std::size_t>(y * width + x)];}
  double & at(int x, int y) {return data[static_cast<std::size_t>(y * width + x)];}
  friend bool operator==(const DepthImage &, const DepthImage &) = default;
};

struct RenderedFrame
{
  RgbImage rgb;
  DepthImage depth;
  double timestamp{0.0};
};

/// World-frame camera pose; columns of `rotation` are the camera axes (x right, y down, z optical).
struct CameraPose
{
  Vec3 position{Vec3::Zero()};
  Mat3 rotation{Mat3::Identity()};
};

struct GeometryImage
{
  RgbImage radiance;
  DepthImage depth;
  /// cos of the angle between light propagation and the direction back to the camera.
  std::vector<double> scatter_cos;
};

CameraPose camera_world_pose(const VehicleState & state, const CameraIntrinsics & camera);

/// Unit ray through the centre of pixel (x, y), in the camera frame.
Vec3 pixel_direction(const CameraIntrinsics & camera, int x, int y);

/// Nearest-hit ray casting with Lambertian shading. `threads` = 0 picks hardware concurrency;
/// output does not depend on it.
GeometryImage render_geometry(
  const Scene & scene, const CameraPose & pose, const CameraIntrinsics & camera,
  unsigned threads = 1);

/// (1 - k^2) / (4 pi (1 - k cos theta)^2).
double schlick_phase(double cos_theta, double k);

/// Throws std::invalid_argument on dimension mismatch.
RgbImage apply_water(
  const RgbImage & radiance, const DepthImage & depth, const WaterOpticsParams & water,
  const std::vector<double> & scatter_cos = {});

RenderedFrame capture(
  const VehicleState & state, const Scene & scene, const CameraIntrinsics & camera,
  const WaterOpticsParams & water, unsigned threads = 1);

/// Binary P6, 8-bit per channel.
std::string encode_ppm(const RgbImage & image);
/// Binary P5, 16-bit big-endian millimeters; 65535 marks no hit.
std::string encode_depth_pgm(const DepthImage & depth);

void write_ppm(const std::filesystem::path & path, const RgbImage & image);
void write_depth_pgm(const std::filesystem::path & path, const DepthImage & depth);

}  // namespace hydrosim
