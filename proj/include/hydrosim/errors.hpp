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

#include <stdexcept>
#include <string>

namespace hydrosim
{

/// Invalid parameters or config files. `field()` carries a dotted path when known.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string & message, std::string field = {})
  : std::runtime_error(field.empty() ? message : field + ": " + message),
    message_(message), field_(std::move(field))
  {}

  const std::string & field() const noexcept {return field_;}
  /// The message without the field prefix.
  const std::string & message() const noexcept {return message_;}

private:
  std::string message_;
  std::string field_;
};

/// The integrated state left the finite range.
class DivergenceError : public std::runtime_error
{
public:
  DivergenceError(const std::string & component, double value)
  : std::runtime_error("state diverged: " + component + " = " + std::to_string(value)),
    component_(component) {}

  const std::string & component() const noexcept {return component_;}

private:
  std::string component_;
};

/// The thruster layout cannot produce some wrench direction.
class AllocationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent trajectory data (TUM parsing, association, alignment).
class TrajectoryError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Operation requested in the wrong lifecycle state (e.g. stepping a finished episode).
class StateError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hydrosim
