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

#include "hydrosim/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdlib>
#include <mutex>

namespace hydrosim
{

std::shared_ptr<spdlog::logger> logger()
{
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> instance;
  std::call_once(
    once, [] {
      instance = spdlog::stderr_color_mt("hydrosim");
      auto level = spdlog::level::warn;
      if (const char * env = std::getenv("HYDROSIM_LOG")) {
        level = spdlog::level::from_str(env);
      }
      instance->set_level(level);
    });
  return instance;
}

}  // namespace hydrosim
