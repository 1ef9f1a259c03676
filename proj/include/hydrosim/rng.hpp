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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hydrosim
{

/// Portable random stream: MT19937-64 (bit-exact across standard libraries) with
/// uniforms from the top 53 bits and normals by Box-Muller (cosine branch only, two
/// uniforms per sample). Reimplementations in other languages reproduce the stream
/// from the seed alone.
class Rng
{
public:
  explicit Rng(std::uint64_t seed = 0)
  : engine_(seed) {}

  std::uint64_t next_u64() {return engine_();}

  /// Uniform in [0, 1).
  double uniform() {return static_cast<double>(engine_() >> 11) * 0x1.0p-53;}

  /// Standard normal.
  double normal()
  {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace hydrosim
