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
 * @file session.hpp
 * @brief Newline-delimited JSON protocol (version 1) over stdio or TCP.
 *
 * Request:  {"v":1, "id":..., "op":"configure|reset|step_action|step_thrusters|observe|shutdown",
 *            "payload":{...}}
 * Response: {"v":1, "id":..., "ok":true, "payload":{...}}
 *           {"v":1, "id":..., "ok":false, "error":{"code":"...", "message":"..."}}
 */

#pragma once

#include "hydrosim/environment.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace hydrosim
{

inline constexpr int kProtocolVersion = 1;

struct ServerOptions
{
  std::string host{"127.0.0.1"};
  int port{7878};
  /// Each session writes frames below frame_root/session-<n>.
  std::filesystem::path frame_root{"sessions"};
  /// Used by "configure" when the request names no config.
  std::optional<std::filesystem::path> default_config;
};

std::string base64_encode(const std::string & bytes);

nlohmann::json state_to_json(const VehicleState & s);

/// One client's isolated simulation. Messages are handled strictly in order.
class Session
{
public:
  Session(ServerOptions options, int index);

  /// Returns the response line (no trailing newline). Never throws for client errors.
  std::string handle_line(const std::string & line);
  nlohmann::json handle(const nlohmann::json & request);

  bool shutdown_requested() const {return shutdown_;}
  const std::filesystem::path & directory() const {return directory_;}
  const Environment * environment() const {return env_.get();}

private:
  nlohmann::json configure(const nlohmann::json & payload);
  nlohmann::json reset(const nlohmann::json & payload);
  nlohmann::json step_action(const nlohmann::json & payload);
  nlohmann::json step_thrusters(const nlohmann::json & payload);
  nlohmann::json observation_json(const Observation & obs);
  Environment & env();

  ServerOptions options_;
  std::filesystem::path directory_;
  std::unique_ptr<Environment> env_;
  int episode_{0};
  bool shutdown_{false};
};

/// Reads requests until EOF or shutdown. Returns 0.
int serve_stdio(const ServerOptions & options, std::istream & in, std::ostream & out);

/// Thread-per-connection TCP server; a shutdown request from any client stops it.
class TcpServer
{
public:
  explicit TcpServer(ServerOptions options);
  ~TcpServer();
  TcpServer(const TcpServer &) = delete;
  TcpServer & operator=(const TcpServer &) = delete;

  /// Binds and listens; returns the bound port (useful with port 0).
  int listen();
  /// Blocks until stop() or a shutdown request; joins connection threads.
  void run();
  void stop();

private:
  void serve_connection(int fd, int index);

  ServerOptions options_;
  int listen_fd_{-1};
  std::atomic<bool> stopping_{false};
  std::atomic<int> next_index_{1};
};

}  // namespace hydrosim
