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

#include "hydrosim/scene.hpp"

#include <algorithm>
#include <cmath>

namespace hydrosim
{

namespace
{

constexpr double kMinRange = 1e-9;

Vec3 facing(const Vec3 & n, const Vec3 & dir)
{
  return n.dot(dir) > 0.0 ? Vec3(-n) : n;
}

}  // namespace

std::optional<Hit> intersect(const Plane & p, const Ray & ray)
{
  const Vec3 n = p.normal.normalized();
  const double denom = n.dot(ray.direction);
  if (std::abs(denom) < 1e-12) {
    return std::nullopt;
  }
  const double t = n.dot(p.point - ray.origin) / denom;
  if (!(t > kMinRange)) {
    return std::nullopt;
  }
  return Hit{t, facing(n, ray.direction), p.albedo};
}

std::optional<Hit> intersect(const Sphere & s, const Ray & ray)
{
  const Vec3 oc = ray.origin - s.center;
  const double b = oc.dot(ray.direction);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double root = std::sqrt(disc);
  double t = -b - root;
  if (!(t > kMinRange)) {
    t = -b + root;
  }
  if (!(t > kMinRange)) {
    return std::nullopt;
  }
  const Vec3 n = (ray.origin + t * ray.direction - s.center) / s.radius;
  return Hit{t, facing(n, ray.direction), s.albedo};
}

std::optional<Hit> intersect(const Cylinder & c, const Ray & ray)
{
  const Vec3 axis_full = c.end - c.start;
  const double length = axis_full.norm();
  if (!(length > 0.0) || !(c.radius > 0.0)) {
    return std::nullopt;
  }
  const Vec3 axis = axis_full / length;
  const Vec3 oc = ray.origin - c.start;
  const Vec3 d_perp = ray.direction - ray.direction.dot(axis) * axis;
  const Vec3 oc_perp = oc - oc.dot(axis) * axis;

  std::optional<Hit> best;
  auto consider = [&](double t, const Vec3 & n) {
      if (t > kMinRange && (!best || t < best->range)) {
        best = Hit{t, facing(n, ray.direction), c.albedo};
      }
    };

  // lateral surface: |oc_perp + t d_perp|^2 = r^2
  const double a = d_perp.squaredNorm();
  if (a > 1e-15) {
    const double b = oc_perp.dot(d_perp);
    const double cc = oc_perp.squaredNorm() - c.radius * c.radius;
    const double disc = b * b - a * cc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      for (const double t : {(-b - root) / a, (-b + root) / a}) {
        const double s = (oc + t * ray.direction).dot(axis);
        if (s >= 0.0 && s <= length) {
          consider(t, (oc_perp + t * d_perp) / c.radius);
        }
      }
    }
  }
  // end caps
  const double d_axial = ray.direction.dot(axis);
  if (std::abs(d_axial) > 1e-15) {
    for (const double s_cap : {0.0, length}) {
      const double t = (s_cap - oc.dot(axis)) / d_axial;
      const Vec3 radial = oc_perp + t * d_perp;
      if (radial.squaredNorm() <= c.radius * c.radius) {
        consider(t, s_cap == 0.0 ? Vec3(-axis) : axis);
      }
    }
  }
  return best;
}

std::optional<Hit> intersect(const Box & b, const Ray & ray)
{
  double t_near = -kInfinity;
  double t_far = kInfinity;
  int near_axis = -1;
  int far_axis = -1;
  for (int i = 0; i < 3; ++i) {
    const double d = ray.direction[i];
    const double o = ray.origin[i];
    if (std::abs(d) < 1e-15) {
      if (o < b.min[i] || o > b.max[i]) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (b.min[i] - o) / d;
    double t1 = (b.max[i] - o) / d;
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    if (t0 > t_near) {
      t_near = t0;
      near_axis = i;
    }
    if (t1 < t_far) {
      t_far = t1;
      far_axis = i;
    }
  }
  if (t_near > t_far || t_far <= kMinRange) {
    return std::nullopt;
  }
  const bool inside = t_near <= kMinRange;
  const double t = inside ? t_far : t_near;
  const int axis = inside ? far_axis : near_axis;
  if (axis < 0) {
    return std::nullopt;
  }
  Vec3 n = Vec3::Zero();
  n[axis] = 1.0;
  return Hit{t, facing(n, ray.direction), b.albedo};
}

std::optional<Hit> Scene::cast(const Ray & ray, double max_range) const
{
  std::optional<Hit> best;
  for (const auto & prim : primitives) {
    const auto hit = std::visit([&](const auto & p) {return intersect(p, ray);}, prim);
    if (hit && hit->range <= max_range && (!best || hit->range < best->range)) {
      best = hit;
    }
  }
  return best;
}

}  // namespace hydrosim
