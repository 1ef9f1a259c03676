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
 * @file scene.hpp
 * @brief Analytic scene primitives and nearest-hit ray casting.
 */

#pragma once

#include "hydrosim/math.hpp"

#include <limits>
#include <optional>
#include <variant>
#include <vector>

namespace hydrosim
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Ray
{
  Vec3 origin{Vec3::Zero()};
  Vec3 direction{Vec3::UnitX()};  // unit length
};

struct Hit
{
  double range{kInfinity};
  Vec3 normal{Vec3::Zero()};  // faces the incoming ray
  Vec3 albedo{Vec3::Zero()};
};

struct Plane
{
  Vec3 point{Vec3::Zero()};
  Vec3 normal{-Vec3::UnitZ()};
  Vec3 albedo{Vec3::Constant(0.6)};
};

/// Finite cylinder between two axis end points, with flat caps.
struct Cylinder
{
  Vec3 start{Vec3::Zero()};
  Vec3 end{Vec3::UnitX()};
  double radius{0.1};
  Vec3 albedo{Vec3::Constant(0.8)};
};

struct Sphere
{
  Vec3 center{Vec3::Zero()};
  double radius{0.5};
  Vec3 albedo{Vec3::Constant(0.8)};
};

/// Axis-aligned box in world coordinates.
struct Box
{
  Vec3 min{-Vec3::Constant(0.5)};
  Vec3 max{Vec3::Constant(0.5)};
  Vec3 albedo{Vec3::Constant(0.8)};
};

using Primitive = std::variant<Plane, Cylinder, Sphere, Box>;

std::optional<Hit> intersect(const Plane & p, const Ray & ray);
std::optional<Hit> intersect(const Cylinder & c, const Ray & ray);
std::optional<Hit> intersect(const Sphere & s, const Ray & ray);
std::optional<Hit> intersect(const Box & b, const Ray & ray);

struct Scene
{
  std::vector<Primitive> primitives;
  /// Direction the light travels (world frame, unit). Default straight down.
  Vec3 light_direction{Vec3::UnitZ()};
  Vec3 background{Vec3::Zero()};
  double ambient{0.2};

  /// Nearest hit with range in (0, max_range].
  std::optional<Hit> cast(const Ray & ray, double max_range = kInfinity) const;
};

}  // namespace hydrosim
