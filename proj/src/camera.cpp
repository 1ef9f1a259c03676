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

#include "hydrosim/camera.hpp"

#include "hydrosim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace hydrosim
{

double CameraIntrinsics::focal_length() const
{
  return 0.5 * width / std::tan(0.5 * horizontal_fov);
}

void CameraIntrinsics::validate() const
{
  if (width < 1) {
    throw ConfigError("must be >= 1", "camera.width");
  }
  if (height < 1) {
    throw ConfigError("must be >= 1", "camera.height");
  }
  if (!(horizontal_fov > 0.0 && horizontal_fov < kPi)) {
    throw ConfigError("must be in (0, pi)", "camera.horizontal_fov");
  }
}

WaterOpticsParams WaterOpticsParams::clear()
{
  WaterOpticsParams w;
  w.attenuation.setZero();
  w.veiling_light.setZero();
  w.forward_scatter_sigma = 0.0;
  return w;
}

void WaterOpticsParams::validate() const
{
  for (int c = 0; c < 3; ++c) {
    if (!(attenuation[c] >= 0.0)) {
      throw ConfigError("must be >= 0", "water.attenuation");
    }
    if (!(veiling_light[c] >= 0.0 && veiling_light[c] <= 1.0)) {
      throw ConfigError("must be in [0, 1]", "water.veiling_light");
    }
  }
  if (!(forward_scatter_sigma >= 0.0)) {
    throw ConfigError("must be >= 0", "water.forward_scatter_sigma");
  }
  if (!(forward_scatter_weight >= 0.0 && forward_scatter_weight <= 1.0)) {
    throw ConfigError("must be in [0, 1]", "water.forward_scatter_weight");
  }
  if (!(schlick_k > -1.0 && schlick_k < 1.0)) {
    throw ConfigError("must be in (-1, 1)", "water.schlick_k");
  }
}

RgbImage::RgbImage(int w, int h, const Vec3 & fill)
: width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3)
{
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = fill.x();
    data[i + 1] = fill.y();
    data[i + 2] = fill.z();
  }
}

Vec3 RgbImage::at(int x, int y) const
{
  const auto i = 3 * static_cast<std::size_t>(y * width + x);
  return {data[i], data[i + 1], data[i + 2]};
}

void RgbImage::set(int x, int y, const Vec3 & value)
{
  const auto i = 3 * static_cast<std::size_t>(y * width + x);
  data[i] = value.x();
  data[i + 1] = value.y();
  data[i + 2] = value.z();
}

DepthImage::DepthImage(int w, int h, double fill)
: width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill)
{}

CameraPose camera_world_pose(const VehicleState & state, const CameraIntrinsics & camera)
{
  // camera (x right, y down, z optical) expressed in the body frame for a zero mount
  Mat3 base;
  base << 0.0, 0.0, 1.0,
    1.0, 0.0, 0.0,
    0.0, 1.0, 0.0;
  const Mat3 r_wb = state.rotation();
  return {
    state.position() + r_wb * camera.mount_position,
    r_wb * euler_to_rotation(camera.mount_attitude) * base};
}

Vec3 pixel_direction(const CameraIntrinsics & camera, int x, int y)
{
  const double f = camera.focal_length();
  return Vec3(
    (x + 0.5 - 0.5 * camera.width) / f,
    (y + 0.5 - 0.5 * camera.height) / f,
    1.0).normalized();
}

GeometryImage render_geometry(
  const Scene & scene, const CameraPose & pose, const CameraIntrinsics & camera,
  unsigned threads)
{
  GeometryImage out{
    RgbImage(camera.width, camera.height),
    DepthImage(camera.width, camera.height),
    std::vector<double>(static_cast<std::size_t>(camera.width * camera.height), 0.0)};
  const Vec3 to_light = -scene.light_direction.normalized();

  auto render_rows = [&](int row_begin, int row_end) {
      for (int y = row_begin; y < row_end; ++y) {
        for (int x = 0; x < camera.width; ++x) {
          const Ray ray{pose.position, pose.rotation * pixel_direction(camera, x, y)};
          out.scatter_cos[static_cast<std::size_t>(y * camera.width + x)] =
            -ray.direction.dot(scene.light_direction.normalized());
          const auto hit = scene.cast(ray);
          if (!hit) {
            out.radiance.set(x, y, scene.background);
            continue;
          }
          const double lambert = std::max(0.0, hit->normal.dot(to_light));
          const double shade = scene.ambient + (1.0 - scene.ambient) * lambert;
          out.radiance.set(x, y, (hit->albedo * shade).cwiseMax(0.0).cwiseMin(1.0));
          out.depth.at(x, y) = hit->range;
        }
      }
    };

  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(camera.height));
  if (threads <= 1) {
    render_rows(0, camera.height);
    return out;
  }
  std::vector<std::thread> workers;
  const int chunk = (camera.height + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int begin = 0; begin < camera.height; begin += chunk) {
    workers.emplace_back(render_rows, begin, std::min(camera.height, begin + chunk));
  }
  for (auto & w : workers) {
    w.join();
  }
  return out;
}

double schlick_phase(double cos_theta, double k)
{
  const double denom = 1.0 - k * cos_theta;
  return (1.0 - k * k) / (4.0 * kPi * denom * denom);
}

RgbImage apply_water(
  const RgbImage & radiance, const DepthImage & depth, const WaterOpticsParams & water,
  const std::vector<double> & scatter_cos)
{
  if (radiance.width != depth.width || radiance.height != depth.height) {
    throw std::invalid_argument("radiance and depth dimensions differ");
  }
  const int w = radiance.width;
  const int h = radiance.height;
  if (!scatter_cos.empty() && scatter_cos.size() != static_cast<std::size_t>(w * h)) {
    throw std::invalid_argument("scatter_cos dimensions differ");
  }

  // direct signal
  RgbImage direct(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = depth.at(x, y);
      if (std::isinf(d)) {
        continue;
      }
      const Vec3 transmission = (-water.attenuation * d).array().exp();
      direct.set(x, y, radiance.at(x, y).cwiseProduct(transmission));
    }
  }

  RgbImage out(w, h);
  constexpr int kMaxRadius = 12;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = depth.at(x, y);
      Vec3 veil = water.veiling_light;
      if (water.phase_modulated_backscatter && !scatter_cos.empty()) {
        veil *= 4.0 * kPi *
          schlick_phase(scatter_cos[static_cast<std::size_t>(y * w + x)], water.schlick_k);
      }
      if (std::isinf(d)) {
        out.set(x, y, veil.cwiseMax(0.0).cwiseMin(1.0));
        continue;
      }
      const Vec3 d_c = direct.at(x, y);
      const Vec3 transmission = (-water.attenuation * d).array().exp();
      const Vec3 backscatter = veil.cwiseProduct(Vec3::Ones() - transmission);

      Vec3 forward = Vec3::Zero();
      const double sigma = water.forward_scatter_sigma * d;
      if (water.forward_scatter_weight > 0.0 && sigma > 0.05) {
        const int radius = std::min(kMaxRadius, static_cast<int>(std::ceil(3.0 * sigma)));
        Vec3 acc = Vec3::Zero();
        double total = 0.0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) {
            continue;
          }
          for (int dx = -radius; dx <= radius; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w) {
              continue;
            }
            const double g = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
            acc += g * direct.at(xx, yy);
            total += g;
          }
        }
        forward = water.forward_scatter_weight * (acc / total - d_c);
      }
      out.set(x, y, (d_c + forward + backscatter).cwiseMax(0.0).cwiseMin(1.0));
    }
  }
  return out;
}

RenderedFrame capture(
  const VehicleState & state, const Scene & scene, const CameraIntrinsics & camera,
  const WaterOpticsParams & water, unsigned threads)
{
  GeometryImage geo = render_geometry(scene, camera_world_pose(state, camera), camera, threads);
  RenderedFrame frame;
  frame.rgb = apply_water(geo.radiance, geo.depth, water, geo.scatter_cos);
  frame.depth = std::move(geo.depth);
  frame.timestamp = state.time;
  return frame;
}

std::string encode_ppm(const RgbImage & image)
{
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
    "\n255\n";
  out.reserve(out.size() + image.data.size());
  for (const double v : image.data) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
  }
  return out;
}

std::string encode_depth_pgm(const DepthImage & depth)
{
  std::string out = "P5\n" + std::to_string(depth.width) + " " + std::to_string(depth.height) +
    "\n65535\n";
  out.reserve(out.size() + 2 * depth.data.size());
  for (const double d : depth.data) {
    unsigned value = 65535;
    if (std::isfinite(d)) {
      value = static_cast<unsigned>(std::clamp(std::lround(d * 1000.0), 0L, 65534L));
    }
    out.push_back(static_cast<char>((value >> 8) & 0xFF));
    out.push_back(static_cast<char>(value & 0xFF));
  }
  return out;
}

namespace
{

void write_bytes(const std::filesystem::path & path, const std::string & bytes)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write " + path.string());
  }
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void write_ppm(const std::filesystem::path & path, const RgbImage & image)
{
  write_bytes(path, encode_ppm(image));
}

void write_depth_pgm(const std::filesystem::path & path, const DepthImage & depth)
{
  write_bytes(path, encode_depth_pgm(depth));
}

}  // namespace hydrosim
