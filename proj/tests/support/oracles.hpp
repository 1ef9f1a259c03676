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

// Independent reference implementations used as test oracles. Nothing here calls into the
// library code under test except for plain data types.

#pragma once

#include "hydrosim/dynamics.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>

namespace oracle
{

using hydrosim::Mat3;
using hydrosim::Mat6;
using hydrosim::Vec3;
using hydrosim::Vec6;

inline Vec3 cross(const Vec3 & a, const Vec3 & b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Closed-form zyx rotation.
inline Mat3 rotation(double phi, double theta, double psi)
{
  const double cf = std::cos(phi), sf = std::sin(phi);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(psi), sp = std::sin(psi);
  Mat3 r;
  r << cp * ct, -sp * cf + cp * st * sf, sp * sf + cp * cf * st,
    sp * ct, cp * cf + sf * st * sp, -cp * sf + st * sp * cf,
    -st, ct * sf, ct * cf;
  return r;
}

/// Gaussian elimination with partial pivoting.
template<int N>
Eigen::Matrix<double, N, 1> solve(Eigen::Matrix<double, N, N> a, Eigen::Matrix<double, N, 1> b)
{
  for (int c = 0; c < N; ++c) {
    int p = c;
    for (int r = c + 1; r < N; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(p, c))) {
        p = r;
      }
    }
    a.row(c).swap(a.row(p));
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < N; ++r) {
      const double f = a(r, c) / a(c, c);
      for (int k = c; k < N; ++k) {
        a(r, k) -= f * a(c, k);
      }
      b[r] -= f * b[c];
    }
  }
  Eigen::Matrix<double, N, 1> x;
  for (int r = N - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < N; ++k) {
      s -= a(r, k) * x[k];
    }
    x[r] = s / a(r, r);
  }
  return x;
}

/// Rigid body mass matrix written out entry by entry.
inline Mat6 mass_rb(double m, const Mat3 & ig, const Vec3 & rg)
{
  const double x = rg[0], y = rg[1], z = rg[2];
  Mat3 io = ig;  // parallel axis: I_o = I_g + m (|r|^2 I - r r^T)
  io += m * ((rg.squaredNorm()) * Mat3::Identity() - rg * rg.transpose());
  Mat6 mm;
  mm << m, 0, 0, 0, m * z, -m * y,
    0, m, 0, -m * z, 0, m * x,
    0, 0, m, m * y, -m * x, 0,
    0, -m * z, m * y, io(0, 0), io(0, 1), io(0, 2),
    m * z, 0, -m * x, io(1, 0), io(1, 1), io(1, 2),
    -m * y, m * x, 0, io(2, 0), io(2, 1), io(2, 2);
  return mm;
}

struct DiagonalVehicle
{
  double m;
  Mat3 ig;
  Vec3 rg;
  Vec3 rb;
  double w;
  double b;
  std::array<double, 6> added;   // X_udot ... N_rdot, as positive numbers
  std::array<double, 6> linear;
  std::array<double, 6> quadratic;
};

/// nu_dot from the Newton-Euler equations, term by term.
inline Vec6 acceleration(
  const DiagonalVehicle & p, const Vec6 & eta, const Vec6 & nu, const Vec6 & tau)
{
  const Vec3 v = nu.head<3>();
  const Vec3 om = nu.tail<3>();
  const Mat3 io = p.ig + p.m * (p.rg.squaredNorm() * Mat3::Identity() - p.rg * p.rg.transpose());

  // rigid-body Coriolis and centripetal terms
  Vec6 c_rb;
  c_rb.head<3>() = p.m * (cross(om, v) + cross(om, cross(om, p.rg)));
  c_rb.tail<3>() = cross(om, io * om) + p.m * cross(p.rg, cross(om, v));

  // added-mass Coriolis, scalar form
  const double u = nu[0], vv = nu[1], w = nu[2], pp = nu[3], q = nu[4], r = nu[5];
  const auto & a = p.added;
  Vec6 c_a;
  c_a << q * a[2] * w - r * a[1] * vv,
    r * a[0] * u - pp * a[2] * w,
    pp * a[1] * vv - q * a[0] * u,
    vv * a[2] * w - w * a[1] * vv + q * a[5] * r - r * a[4] * q,
    w * a[0] * u - u * a[2] * w + r * a[3] * pp - pp * a[5] * r,
    u * a[1] * vv - vv * a[0] * u + pp * a[4] * q - q * a[3] * pp;

  Vec6 d;
  for (int i = 0; i < 6; ++i) {
    d[i] = p.linear[static_cast<std::size_t>(i)] * nu[i] +
      p.quadratic[static_cast<std::size_t>(i)] * std::abs(nu[i]) * nu[i];
  }

  // restoring forces
  const double sf = std::sin(eta[3]), cf = std::cos(eta[3]);
  const double st = std::sin(eta[4]), ct = std::cos(eta[4]);
  const double W = p.w, B = p.b;
  const Vec3 & g = p.rg;
  const Vec3 & bb = p.rb;
  Vec6 gr;
  gr << (W - B) * st,
    -(W - B) * ct * sf,
    -(W - B) * ct * cf,
    -(g[1] * W - bb[1] * B) * ct * cf + (g[2] * W - bb[2] * B) * ct * sf,
    (g[2] * W - bb[2] * B) * st + (g[0] * W - bb[0] * B) * ct * cf,
    -(g[0] * W - bb[0] * B) * ct * sf - (g[1] * W - bb[1] * B) * st;

  Mat6 mm = mass_rb(p.m, p.ig, p.rg);
  for (int i = 0; i < 6; ++i) {
    mm(i, i) += a[static_cast<std::size_t>(i)];
  }
  return solve<6>(mm, tau - c_rb - c_a - d - gr);
}

/// First input of the finite-horizon discrete LQR (stage cost on x_1..x_H, inputs u_0..u_{H-1}).
inline double lqr_first_input(
  const Eigen::Matrix2d & a, const Eigen::Vector2d & b, const Eigen::Matrix2d & q, double r,
  int horizon, const Eigen::Vector2d & x0)
{
  Eigen::Matrix2d p = q;
  Eigen::RowVector2d k;
  for (int step = horizon - 1; step >= 0; --step) {
    const double s = r + b.dot(p * b);
    k = (b.transpose() * p * a) / s;
    const Eigen::Matrix2d next = a.transpose() * p * (a - b * k);
    p = (step > 0 ? q : Eigen::Matrix2d::Zero()) + next;
  }
  return -(k * x0)(0);
}

/// Horizontal distance from p to the polyline, by dense sampling of each segment.
inline double dense_cross_track(const Vec3 & p, const std::vector<Vec3> & pts, int samples)
{
  double best = INFINITY;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (int k = 0; k <= samples; ++k) {
      const double t = static_cast<double>(k) / samples;
      const Vec3 c = pts[i - 1] + t * (pts[i] - pts[i - 1]);
      best = std::min(best, std::hypot(p[0] - c[0], p[1] - c[1]));
    }
  }
  return best;
}

/// Integral of f(cos theta) over the unit sphere with composite Simpson in mu = cos theta.
template<typename F>
double sphere_integral(F f, int intervals = 20000)
{
  const double h = 2.0 / intervals;
  double s = f(-1.0) + f(1.0);
  for (int i = 1; i < intervals; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * f(-1.0 + i * h);
  }
  return 2.0 * M_PI * s * h / 3.0;
}

class Random
{
public:
  explicit Random(std::uint64_t seed)
  : gen_(seed) {}

  double uniform(double lo, double hi) {return std::uniform_real_distribution<double>(lo, hi)(gen_);}

  Vec3 vec3(double lo, double hi) {return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};}

  Vec6 vec6(double lo, double hi)
  {
    Vec6 v;
    for (int i = 0; i < 6; ++i) {
      v[i] = uniform(lo, hi);
    }
    return v;
  }

  /// Uniformly distributed rotation from a random unit quaternion.
  Mat3 rotation()
  {
    std::normal_distribution<double> n;
    Eigen::Quaterniond q(n(gen_), n(gen_), n(gen_), n(gen_));
    q.normalize();
    return q.toRotationMatrix();
  }

  std::mt19937_64 & engine() {return gen_;}

private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
