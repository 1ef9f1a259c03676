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

#include "hydrosim/session.hpp"

#include "hydrosim/errors.hpp"
#include "hydrosim/log.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <vector>

namespace hydrosim
{

using nlohmann::json;

namespace
{

/// Client-facing failure with a protocol error code.
struct ProtocolError : std::runtime_error
{
  ProtocolError(std::string c, const std::string & message)
  : std::runtime_error(message), code(std::move(c)) {}
  std::string code;
};

json vec_json(const Eigen::VectorXd & v)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

json error_response(const json & id, const std::string & code, const std::string & message)
{
  return {{"v", kProtocolVersion}, {"id", id}, {"ok", false},
    {"error", {{"code", code}, {"message", message}}}};
}

double number_field(const json & payload, const char * key)
{
  if (!payload.contains(key)) {
    throw ProtocolError("invalid_request", std::string("payload.") + key + " is required");
  }
  const json & v = payload[key];
  if (!v.is_number()) {
    throw ProtocolError("invalid_request", std::string("payload.") + key + " must be a number");
  }
  return v.get<double>();
}

json sensors_json(const SensorReadings & r)
{
  json j = json::object();
  if (r.imu) {
    j["imu"] = {{"specific_force", vec_json(r.imu->specific_force)},
      {"angular_rate", vec_json(r.imu->angular_rate)}, {"time", r.imu->timestamp}};
  }
  if (r.depth) {
    j["depth"] = *r.depth;
  }
  if (r.velocity) {
    j["velocity"] = vec_json(*r.velocity);
  }
  if (r.distance) {
    j["distance"] = *r.distance;
  }
  if (r.gps) {
    j["gps"] = {{"valid", r.gps->valid}, {"position", vec_json(r.gps->position)},
      {"time", r.gps->timestamp}};
  }
  return j;
}

}  // namespace

std::string base64_encode(const std::string & bytes)
{
  static constexpr char kTable[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
      (static_cast<unsigned char>(bytes[i + 1]) << 8) | static_cast<unsigned char>(bytes[i + 2]);
    out += kTable[(v >> 18) & 63];
    out += kTable[(v >> 12) & 63];
    out += kTable[(v >> 6) & 63];
    out += kTable[v & 63];
  }
  if (i < bytes.size()) {
    unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    if (i + 1 < bytes.size()) {
      v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    }
    out += kTable[(v >> 18) & 63];
    out += kTable[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kTable[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

json state_to_json(const VehicleState & s)
{
  return {{"time", s.time}, {"pose", vec_json(s.pose)}, {"twist", vec_json(s.twist)}};
}

Session::Session(ServerOptions options, int index)
: options_(std::move(options)),
  directory_(options_.frame_root / ("session-" + std::to_string(index)))
{}

Environment & Session::env()
{
  if (!env_) {
    throw StateError("session is not configured: send configure first");
  }
  return *env_;
}

std::string Session::handle_line(const std::string & line)
{
  json request;
  try {
    request = json::parse(line);
  } catch (const json::parse_error & e) {
    return error_response(nullptr, "parse_error", e.what()).dump();
  }
  return handle(request).dump();
}

json Session::handle(const json & request)
{
  const json id = request.is_object() && request.contains("id") ? request["id"] : json(nullptr);
  try {
    if (!request.is_object()) {
      throw ProtocolError("invalid_request", "request must be a JSON object");
    }
    if (!request.contains("v") || request["v"] != kProtocolVersion) {
      throw ProtocolError("unsupported_version", "\"v\" must be 1");
    }
    if (!request.contains("op") || !request["op"].is_string()) {
      throw ProtocolError("invalid_request", "\"op\" must be a string");
    }
    const std::string op = request["op"];
    const json payload = request.contains("payload") ? request["payload"] : json::object();
    if (!payload.is_object()) {
      throw ProtocolError("invalid_request", "\"payload\" must be an object");
    }
    json result;
    if (op == "configure") {
      result = configure(payload);
    } else if (op == "reset") {
      result = reset(payload);
    } else if (op == "step_action") {
      result = step_action(payload);
    } else if (op == "step_thrusters") {
      result = step_thrusters(payload);
    } else if (op == "observe") {
      if (!env().ready()) {
        throw StateError("no episode: send reset first");
      }
      result = {{"observation", observation_json(env().observation())}};
    } else if (op == "shutdown") {
      shutdown_ = true;
      result = json::object();
    } else {
      throw ProtocolError("unknown_op", "unknown op '" + op + "'");
    }
    return {{"v", kProtocolVersion}, {"id", id}, {"ok", true}, {"payload", result}};
  } catch (const ProtocolError & e) {
    return error_response(id, e.code, e.what());
  } catch (const ConfigError & e) {
    return error_response(id, "config_error", e.what());
  } catch (const StateError & e) {
    return error_response(id, "state_error", e.what());
  } catch (const DivergenceError & e) {
    return error_response(id, "divergence", e.what());
  } catch (const std::invalid_argument & e) {
    return error_response(id, "invalid_argument", e.what());
  } catch (const json::exception & e) {
    return error_response(id, "invalid_request", e.what());
  } catch (const std::exception & e) {
    return error_response(id, "internal", e.what());
  }
}

json Session::configure(const json & payload)
{
  json doc = json::object();
  std::filesystem::path base;
  std::optional<std::filesystem::path> path = options_.default_config;
  if (payload.contains("config_path")) {
    if (!payload["config_path"].is_string()) {
      throw ProtocolError("invalid_request", "payload.config_path must be a string");
    }
    path = payload["config_path"].get<std::string>();
  }
  if (path) {
    doc = read_json(*path);
    base = path->parent_path();
  }
  if (payload.contains("config")) {
    if (!payload["config"].is_object()) {
      throw ProtocolError("invalid_request", "payload.config must be an object");
    }
    doc.merge_patch(payload["config"]);
  }
  auto env = std::make_unique<Environment>(parse_session(doc, base));
  env_ = std::move(env);
  episode_ = 0;
  const auto & c = env_->config();
  return {
    {"vehicle", c.vehicle.name},
    {"thrusters", c.vehicle.thrusters.size()},
    {"scenario", c.scenario.name},
    {"seed", c.seed},
    {"physics_dt", c.physics_dt},
    {"control_rate_hz", c.control_rate_hz},
    {"render", c.render},
    {"inline_frames", c.inline_frames},
    {"image", {{"width", c.vehicle.camera.width}, {"height", c.vehicle.camera.height}}},
    {"max_steps", c.scenario.max_steps}};
}

json Session::reset(const json & payload)
{
  Environment & e = env();
  std::optional<std::uint64_t> seed;
  if (payload.contains("seed")) {
    const json & s = payload["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ProtocolError("invalid_request", "payload.seed must be a non-negative integer");
    }
    seed = s.get<std::uint64_t>();
  }
  ++episode_;
  return {{"seed", seed.value_or(e.config().seed)}, {"episode", episode_},
    {"observation", observation_json(e.reset(seed))}};
}

json Session::step_action(const json & payload)
{
  const Action action{number_field(payload, "a1"), number_field(payload, "a2")};
  const StepResult r = env().step(action);
  const auto & ct = r.observation.cross_track;
  return {
    {"reward", r.reward},
    {"status", {
        {"step", r.status.step},
        {"cumulative_reward", r.status.cumulative_reward},
        {"terminated", r.status.reason == TerminationReason::kPipeLost ||
          r.status.reason == TerminationReason::kGoalReached},
        {"truncated", r.status.reason == TerminationReason::kMaxSteps},
        {"done", r.status.terminated},
        {"reason", to_string(r.status.reason)}}},
    {"info", {
        {"e_p", ct.e_p}, {"e_psi", r.observation.e_psi}, {"arc_progress", ct.arc_progress},
        {"waypoint_reached", r.waypoint_reached}, {"control_periods", r.control_periods}}},
    {"observation", observation_json(r.observation)}};
}

json Session::step_thrusters(const json & payload)
{
  if (!payload.contains("u") || !payload["u"].is_array()) {
    throw ProtocolError("invalid_request", "payload.u must be an array of numbers");
  }
  const json & u = payload["u"];
  Eigen::VectorXd cmd(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u[i].is_number()) {
      throw ProtocolError("invalid_request", "payload.u must be an array of numbers");
    }
    cmd[static_cast<Eigen::Index>(i)] = u[i].get<double>();
  }
  return {{"state", state_to_json(env().step_thrusters(cmd))}};
}

json Session::observation_json(const Observation & obs)
{
  json j = state_to_json(obs.state);
  j["e_p"] = obs.cross_track.e_p;
  j["e_psi"] = obs.e_psi;
  j["arc_progress"] = obs.cross_track.arc_progress;
  j["sensors"] = sensors_json(obs.sensors);
  if (obs.frame) {
    const RenderedFrame & f = *obs.frame;
    json frame = {{"width", f.rgb.width}, {"height", f.rgb.height}, {"time", f.timestamp}};
    const std::string rgb = encode_ppm(f.rgb);
    const std::string depth = encode_depth_pgm(f.depth);
    if (env().config().inline_frames) {
      frame["rgb_ppm_base64"] = base64_encode(rgb);
      frame["depth_pgm_base64"] = base64_encode(depth);
    } else {
      char stem[64];
      std::snprintf(stem, sizeof(stem), "ep%03d_step%04d", episode_, env().status().step);
      const auto dir = directory_ / "frames";
      std::filesystem::create_directories(dir);
      const auto rgb_path = dir / (std::string(stem) + ".ppm");
      const auto depth_path = dir / (std::string(stem) + ".pgm");
      write_ppm(rgb_path, f.rgb);
      write_depth_pgm(depth_path, f.depth);
      frame["rgb"] = rgb_path.string();
      frame["depth"] = depth_path.string();
    }
    j["frame"] = frame;
  }
  return j;
}

int serve_stdio(const ServerOptions & options, std::istream & in, std::ostream & out)
{
  Session session(options, 1);
  std::string line;
  while (!session.shutdown_requested() && std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    out << session.handle_line(line) << '\n' << std::flush;
  }
  return 0;
}

namespace
{

std::mutex g_fd_mutex;

bool send_all(int fd, const std::string & data)
{
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

constexpr std::size_t kMaxLine = 16u << 20;

}  // namespace

TcpServer::TcpServer(ServerOptions options)
: options_(std::move(options)) {}

TcpServer::~TcpServer()
{
  stop();
}

int TcpServer::listen()
{
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  }
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
  if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
    throw ConfigError("not an IPv4 address: " + options_.host, "host");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) < 0 ||
    ::listen(listen_fd_, 16) < 0)
  {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot listen on " + options_.host + ":" +
            std::to_string(options_.port) + ": " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
  return ntohs(addr.sin_port);
}

void TcpServer::run()
{
  std::vector<std::thread> workers;
  std::set<int> clients;
  std::mutex clients_mutex;
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR && !stopping_) {
        continue;
      }
      break;
    }
    {
      std::lock_guard lock(clients_mutex);
      clients.insert(fd);
    }
    const int index = next_index_++;
    workers.emplace_back([this, fd, index, &clients, &clients_mutex] {
        serve_connection(fd, index);
        std::lock_guard lock(clients_mutex);
        clients.erase(fd);
        ::close(fd);
      });
  }
  {
    std::lock_guard lock(clients_mutex);
    for (const int fd : clients) {
      ::shutdown(fd, SHUT_RDWR);
    }
  }
  for (auto & w : workers) {
    w.join();
  }
}

void TcpServer::stop()
{
  std::lock_guard lock(g_fd_mutex);
  stopping_ = true;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void TcpServer::serve_connection(int fd, int index)
{
  Session session(options_, index);
  logger()->info("session {} connected", index);
  std::string buffer;
  char chunk[65536];
  while (!stopping_) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      break;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      const std::string line = buffer.substr(start, nl - start);
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        continue;
      }
      if (!send_all(fd, session.handle_line(line) + "\n")) {
        return;
      }
      if (session.shutdown_requested()) {
        stop();
        return;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLine) {
      send_all(fd, error_response(nullptr, "invalid_request", "line too long").dump() + "\n");
      buffer.clear();
    }
  }
  logger()->info("session {} closed", index);
}

}  // namespace hydrosim
