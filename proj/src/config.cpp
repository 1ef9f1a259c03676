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

#include "hydrosim/config.hpp"

#include "hydrosim/errors.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace hydrosim
{

using nlohmann::json;

namespace
{

std::string join(const std::string & prefix, const std::string & key)
{
  return prefix.empty() ? key : prefix + "." + key;
}

/// Cursor into a JSON document that knows its own field path.
class Node
{
public:
  Node(const json & j, std::string path)
  : j_(&j), path_(std::move(path)) {}

  const std::string & path() const {return path_;}
  const json & raw() const {return *j_;}

  bool has(const std::string & key) const {return j_->is_object() && j_->contains(key);}

  Node at(const std::string & key) const
  {
    require_object();
    if (!j_->contains(key)) {
      throw ConfigError("is required", join(path_, key));
    }
    return {(*j_)[key], join(path_, key)};
  }

  Node at(std::size_t i) const {return {(*j_)[i], path_ + "[" + std::to_string(i) + "]"};}

  std::size_t array_size() const
  {
    if (!j_->is_array()) {
      throw ConfigError("expected an array", path_);
    }
    return j_->size();
  }

  void require_object() const
  {
    if (!j_->is_object()) {
      throw ConfigError("expected an object", path_.empty() ? "<root>" : path_);
    }
  }

  void allow_only(std::initializer_list<const char *> keys) const
  {
    require_object();
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto & item : j_->items()) {
      if (!allowed.count(item.key())) {
        throw ConfigError("unknown key", join(path_, item.key()));
      }
    }
  }

  double number() const
  {
    if (!j_->is_number()) {
      throw ConfigError("expected a number", path_);
    }
    const double v = j_->get<double>();
    if (!std::isfinite(v)) {
      throw ConfigError("must be finite", path_);
    }
    return v;
  }

  double number(const std::string & key, double fallback) const
  {
    return has(key) ? at(key).number() : fallback;
  }

  std::int64_t integer() const
  {
    if (!j_->is_number_integer()) {
      throw ConfigError("expected an integer", path_);
    }
    return j_->get<std::int64_t>();
  }

  std::int64_t integer(const std::string & key, std::int64_t fallback) const
  {
    return has(key) ? at(key).integer() : fallback;
  }

  std::uint64_t seed(const std::string & key, std::uint64_t fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json & v = (*j_)[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError("expected a non-negative integer", join(path_, key));
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string & key, bool fallback) const
  {
    if (!has(key)) {
      return fallback;
    }
    const json & v = (*j_)[key];
    if (!v.is_boolean()) {
      throw ConfigError("expected true or false", join(path_, key));
    }
    return v.get<bool>();
  }

  std::string string() const
  {
    if (!j_->is_string()) {
      throw ConfigError("expected a string", path_);
    }
    return j_->get<std::string>();
  }

  std::string string(const std::string & key, const std::string & fallback) const
  {
    return has(key) ? at(key).string() : fallback;
  }

  Eigen::VectorXd vector(std::size_t n) const
  {
    if (array_size() != n) {
      throw ConfigError("expected " + std::to_string(n) + " numbers", path_);
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      v[static_cast<Eigen::Index>(i)] = at(i).number();
    }
    return v;
  }

  Vec3 vec3() const {return vector(3);}
  Vec6 vec6() const {return vector(6);}

  Vec3 vec3(const std::string & key, const Vec3 & fallback) const
  {
    return has(key) ? at(key).vec3() : fallback;
  }

  /// Either an N-vector (diagonal) or an NxN nested array.
  Eigen::MatrixXd square(std::size_t n) const
  {
    const std::size_t rows = array_size();
    if (rows == n && !j_->empty() && (*j_)[0].is_number()) {
      return vector(n).asDiagonal();
    }
    if (rows != n) {
      throw ConfigError(
        "expected " + std::to_string(n) + " diagonal entries or a " + std::to_string(n) + "x" +
        std::to_string(n) + " matrix", path_);
    }
    Eigen::MatrixXd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      m.row(static_cast<Eigen::Index>(r)) = at(r).vector(n).transpose();
    }
    return m;
  }

private:
  const json * j_;
  std::string path_;
};

json vec_json(const Eigen::VectorXd & v)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

json matrix_json(const Eigen::MatrixXd & m)
{
  if (m.isDiagonal(0.0)) {
    return vec_json(m.diagonal());
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vec_json(m.row(r).transpose()));
  }
  return rows;
}

ThrusterSpec parse_thruster(const Node & n)
{
  n.allow_only({"name", "position", "direction", "thrust_coefficient", "max_rotation_speed",
      "propeller_diameter", "time_constant"});
  ThrusterSpec t;
  t.position = n.at("position").vec3();
  t.direction = n.at("direction").vec3();
  t.thrust_coefficient = n.at("thrust_coefficient").number();
  t.max_rotation_speed = n.at("max_rotation_speed").number();
  t.propeller_diameter = n.at("propeller_diameter").number();
  t.time_constant = n.number("time_constant", 0.0);
  return t;
}

CameraIntrinsics parse_camera(const Node & n)
{
  n.allow_only({"width", "height", "horizontal_fov", "mount_position", "mount_attitude"});
  CameraIntrinsics c;
  c.width = static_cast<int>(n.integer("width", c.width));
  c.height = static_cast<int>(n.integer("height", c.height));
  c.horizontal_fov = n.number("horizontal_fov", c.horizontal_fov);
  c.mount_position = n.vec3("mount_position", c.mount_position);
  if (n.has("mount_attitude")) {
    const Vec3 a = n.at("mount_attitude").vec3();
    c.mount_attitude = {a[0], a[1], a[2]};
  }
  return c;
}

SineComponent parse_sine(const Node & n)
{
  n.allow_only({"amplitude", "frequency", "phase"});
  SineComponent s;
  s.amplitude = n.at("amplitude").vec6();
  if (n.has("frequency")) {
    s.frequency = n.at("frequency").vec6();
  }
  if (n.has("phase")) {
    s.phase = n.at("phase").vec6();
  }
  return s;
}

DisturbanceModel parse_disturbance(const Node & n)
{
  n.allow_only({"type", "amplitude", "frequency", "phase", "components"});
  const std::string type = n.at("type").string();
  if (type == "none") {
    return DisturbanceModel::none();
  }
  if (type == "constant") {
    return DisturbanceModel::constant(n.at("amplitude").vec6());
  }
  if (type == "sinusoidal") {
    SineComponent s;
    s.amplitude = n.at("amplitude").vec6();
    s.frequency = n.at("frequency").vec6();
    if (n.has("phase")) {
      s.phase = n.at("phase").vec6();
    }
    return DisturbanceModel::sinusoidal(s);
  }
  if (type == "sum_of_sines") {
    const Node list = n.at("components");
    std::vector<SineComponent> comps;
    for (std::size_t i = 0; i < list.array_size(); ++i) {
      comps.push_back(parse_sine(list.at(i)));
    }
    return DisturbanceModel::sum_of_sines(std::move(comps));
  }
  throw ConfigError("expected none, constant, sinusoidal or sum_of_sines", join(n.path(), "type"));
}

Primitive parse_primitive(const Node & n)
{
  const std::string type = n.at("type").string();
  if (type == "plane") {
    n.allow_only({"type", "point", "normal", "albedo"});
    Plane p;
    p.point = n.at("point").vec3();
    p.normal = n.at("normal").vec3();
    p.albedo = n.vec3("albedo", p.albedo);
    if (!(p.normal.norm() > 1e-9)) {
      throw ConfigError("must be non-zero", join(n.path(), "normal"));
    }
    p.normal.normalize();
    return p;
  }
  if (type == "cylinder") {
    n.allow_only({"type", "start", "end", "radius", "albedo"});
    Cylinder c;
    c.start = n.at("start").vec3();
    c.end = n.at("end").vec3();
    c.radius = n.at("radius").number();
    c.albedo = n.vec3("albedo", c.albedo);
    if (!(c.radius > 0.0)) {
      throw ConfigError("must be > 0", join(n.path(), "radius"));
    }
    if ((c.end - c.start).norm() < 1e-9) {
      throw ConfigError("start and end coincide", join(n.path(), "end"));
    }
    return c;
  }
  if (type == "sphere") {
    n.allow_only({"type", "center", "radius", "albedo"});
    Sphere s;
    s.center = n.at("center").vec3();
    s.radius = n.at("radius").number();
    s.albedo = n.vec3("albedo", s.albedo);
    if (!(s.radius > 0.0)) {
      throw ConfigError("must be > 0", join(n.path(), "radius"));
    }
    return s;
  }
  if (type == "box") {
    n.allow_only({"type", "min", "max", "albedo"});
    Box b;
    b.min = n.at("min").vec3();
    b.max = n.at("max").vec3();
    b.albedo = n.vec3("albedo", b.albedo);
    if (!(b.min.array() < b.max.array()).all()) {
      throw ConfigError("min must be < max on every axis", join(n.path(), "max"));
    }
    return b;
  }
  throw ConfigError("expected plane, cylinder, sphere or box", join(n.path(), "type"));
}

Scene parse_scene_node(const Node & n)
{
  n.allow_only({"primitives", "light_direction", "background", "ambient"});
  Scene s;
  if (n.has("primitives")) {
    const Node list = n.at("primitives");
    for (std::size_t i = 0; i < list.array_size(); ++i) {
      s.primitives.push_back(parse_primitive(list.at(i)));
    }
  }
  s.light_direction = n.vec3("light_direction", s.light_direction);
  if (!(s.light_direction.norm() > 1e-9)) {
    throw ConfigError("must be non-zero", join(n.path(), "light_direction"));
  }
  s.light_direction.normalize();
  s.background = n.vec3("background", s.background);
  s.ambient = n.number("ambient", s.ambient);
  if (!(s.ambient >= 0.0 && s.ambient <= 1.0)) {
    throw ConfigError("must be in [0, 1]", join(n.path(), "ambient"));
  }
  return s;
}

SensorNoise parse_noise(const Node & n, bool vector_valued)
{
  n.allow_only({"sigma", "bias", "rate_hz", "seed", "max_range"});
  SensorNoise s;
  const auto read = [&](const char * key) -> Vec3 {
      const Node v = n.at(key);
      if (v.raw().is_number()) {
        return Vec3(v.number(), vector_valued ? v.number() : 0.0, vector_valued ? v.number() : 0.0);
      }
      if (!vector_valued) {
        throw ConfigError("expected a number", v.path());
      }
      return v.vec3();
    };
  if (n.has("sigma")) {
    s.sigma = read("sigma");
  }
  if (n.has("bias")) {
    s.bias = read("bias");
  }
  s.rate_hz = n.number("rate_hz", s.rate_hz);
  s.seed = n.seed("seed", s.seed);
  s.validate(n.path());
  return s;
}

Node root(const json & j)
{
  return {j, ""};
}

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
{
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

void VehicleConfig::validate() const
{
  DynamicsModel model(dynamics);
  validate_thrusters(thrusters);
  if (!(water.density > 0.0)) {
    throw ConfigError("must be > 0", "water_density");
  }
  camera.validate();
  try {
    Allocator alloc(thrusters, water);
  } catch (const AllocationError & e) {
    throw ConfigError(e.what(), "thrusters");
  }
}

VehicleConfig bluerov2_heavy()
{
  VehicleConfig v;
  v.name = "bluerov2_heavy";
  auto & rb = v.dynamics.rigid_body;
  rb.mass = 13.5;
  rb.inertia = Vec3(0.26, 0.23, 0.37).asDiagonal();
  rb.cg = Vec3::Zero();
  rb.cb = Vec3(0.0, 0.0, -0.01);
  rb.weight = 132.435;
  rb.buoyancy = 132.435;
  auto & h = v.dynamics.hydro;
  h.added_mass = (Vec6() << 6.36, 7.12, 18.68, 0.189, 0.135, 0.222).finished().asDiagonal();
  h.linear_damping = (Vec6() << 13.7, 14.0, 33.0, 0.5, 0.8, 0.5).finished().asDiagonal();
  h.quadratic_damping = (Vec6() << 141.0, 217.0, 190.0, 1.19, 0.47, 1.5).finished().asDiagonal();

  const double s = std::sqrt(0.5);
  const auto thruster = [](Vec3 r, Vec3 n) {
      return ThrusterSpec{r, n, 0.0074, 397.94, 0.076, 0.05};
    };
  v.thrusters = {
    thruster({0.156, 0.111, 0.085}, {s, -s, 0.0}),
    thruster({0.156, -0.111, 0.085}, {s, s, 0.0}),
    thruster({-0.156, 0.111, 0.085}, {s, s, 0.0}),
    thruster({-0.156, -0.111, 0.085}, {s, -s, 0.0}),
    thruster({0.12, 0.218, 0.0}, {0.0, 0.0, -1.0}),
    thruster({0.12, -0.218, 0.0}, {0.0, 0.0, -1.0}),
    thruster({-0.12, 0.218, 0.0}, {0.0, 0.0, -1.0}),
    thruster({-0.12, -0.218, 0.0}, {0.0, 0.0, -1.0}),
  };
  v.water.density = 1025.0;
  v.camera.mount_position = Vec3(0.2, 0.0, 0.1);
  return v;
}

json read_json(const std::filesystem::path & path)
{
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot open file", path.string());
  }
  try {
    return json::parse(f);
  } catch (const json::parse_error & e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), path.string());
  }
}

VehicleConfig parse_vehicle(const json & j)
{
  const Node n = root(j);
  n.allow_only({"name", "mass", "inertia", "cg", "cb", "weight", "buoyancy", "added_mass",
      "linear_damping", "quadratic_damping", "water_density", "thrusters", "camera"});
  VehicleConfig v;
  v.name = n.string("name", v.name);
  auto & rb = v.dynamics.rigid_body;
  rb.mass = n.at("mass").number();
  rb.inertia = n.at("inertia").square(3);
  rb.cg = n.vec3("cg", Vec3::Zero());
  rb.cb = n.vec3("cb", Vec3::Zero());
  rb.weight = n.number("weight", rb.mass * kGravity);
  rb.buoyancy = n.number("buoyancy", rb.weight);
  auto & h = v.dynamics.hydro;
  if (n.has("added_mass")) {
    h.added_mass = n.at("added_mass").square(6);
  }
  if (n.has("linear_damping")) {
    h.linear_damping = n.at("linear_damping").square(6);
  }
  if (n.has("quadratic_damping")) {
    h.quadratic_damping = n.at("quadratic_damping").square(6);
  }
  v.water.density = n.number("water_density", v.water.density);
  const Node list = n.at("thrusters");
  for (std::size_t i = 0; i < list.array_size(); ++i) {
    v.thrusters.push_back(parse_thruster(list.at(i)));
  }
  if (n.has("camera")) {
    v.camera = parse_camera(n.at("camera"));
  }
  v.validate();
  return v;
}

WaterOpticsParams parse_water(const json & j)
{
  const Node n = root(j);
  n.allow_only({"name", "attenuation", "veiling_light", "forward_scatter_sigma",
      "forward_scatter_weight", "schlick_k", "phase_modulated_backscatter"});
  WaterOpticsParams w;
  w.attenuation = n.vec3("attenuation", w.attenuation);
  w.veiling_light = n.vec3("veiling_light", w.veiling_light);
  w.forward_scatter_sigma = n.number("forward_scatter_sigma", w.forward_scatter_sigma);
  w.forward_scatter_weight = n.number("forward_scatter_weight", w.forward_scatter_weight);
  w.schlick_k = n.number("schlick_k", w.schlick_k);
  w.phase_modulated_backscatter = n.boolean("phase_modulated_backscatter", w.phase_modulated_backscatter);
  w.validate();
  return w;
}

Scene parse_scene(const json & j)
{
  return parse_scene_node(root(j));
}

ScenarioConfig parse_scenario(const json & j, const std::filesystem::path & base_dir)
{
  const Node n = root(j);
  n.allow_only({"name", "pipe", "initial_pose", "initial_jitter", "altitude", "max_steps", "seed",
      "goal_tolerance", "step_length", "waypoint_tolerance", "waypoint_timeout", "pipe_albedo",
      "floor_albedo", "disturbance", "scene"});
  ScenarioConfig s;
  s.name = n.string("name", s.name);
  const Node pipe = n.at("pipe");
  pipe.allow_only({"waypoints", "radius"});
  const Node pts = pipe.at("waypoints");
  s.layout.waypoints.clear();
  for (std::size_t i = 0; i < pts.array_size(); ++i) {
    s.layout.waypoints.push_back(pts.at(i).vec3());
  }
  s.layout.radius = pipe.number("radius", s.layout.radius);
  if (n.has("initial_pose")) {
    s.initial_pose = n.at("initial_pose").vec6();
  }
  if (n.has("initial_jitter")) {
    const Node jit = n.at("initial_jitter");
    jit.allow_only({"position_sigma", "yaw_sigma"});
    s.initial_position_sigma = jit.number("position_sigma", 0.0);
    s.initial_yaw_sigma = jit.number("yaw_sigma", 0.0);
  }
  s.altitude = n.number("altitude", s.altitude);
  s.max_steps = static_cast<int>(n.integer("max_steps", s.max_steps));
  s.seed = n.seed("seed", s.seed);
  s.goal_tolerance = n.number("goal_tolerance", s.goal_tolerance);
  s.step_length = n.number("step_length", s.step_length);
  s.waypoint_tolerance = n.number("waypoint_tolerance", s.waypoint_tolerance);
  s.waypoint_timeout = n.number("waypoint_timeout", s.waypoint_timeout);
  s.pipe_albedo = n.vec3("pipe_albedo", s.pipe_albedo);
  s.floor_albedo = n.vec3("floor_albedo", s.floor_albedo);
  if (n.has("disturbance")) {
    s.disturbance = parse_disturbance(n.at("disturbance"));
  }
  if (n.has("scene")) {
    const Node scene = n.at("scene");
    if (scene.raw().is_string()) {
      s.extra = load_scene(resolve(base_dir, scene.string()));
    } else {
      s.extra = parse_scene_node(scene);
    }
  }
  s.validate();
  return s;
}

MpcConfig parse_mpc(const json & j, const std::string & prefix)
{
  const Node n(j, prefix);
  n.allow_only({"horizon", "pose_weight", "velocity_weight", "input_weight", "wrench_min",
      "wrench_max", "max_iterations", "kkt_tolerance", "fallback_kp", "fallback_kd"});
  MpcConfig c;
  c.horizon = static_cast<int>(n.integer("horizon", c.horizon));
  if (n.has("pose_weight")) {
    c.pose_weight = n.at("pose_weight").square(6);
  }
  if (n.has("velocity_weight")) {
    c.velocity_weight = n.at("velocity_weight").square(6);
  }
  if (n.has("input_weight")) {
    c.input_weight = n.at("input_weight").square(6);
  }
  if (n.has("wrench_min")) {
    c.wrench_min = n.at("wrench_min").vec6();
  }
  if (n.has("wrench_max")) {
    c.wrench_max = n.at("wrench_max").vec6();
  }
  c.max_iterations = static_cast<int>(n.integer("max_iterations", c.max_iterations));
  c.kkt_tolerance = n.number("kkt_tolerance", c.kkt_tolerance);
  if (n.has("fallback_kp")) {
    c.fallback_kp = n.at("fallback_kp").vec6();
  }
  if (n.has("fallback_kd")) {
    c.fallback_kd = n.at("fallback_kd").vec6();
  }
  c.validate();
  return c;
}

SensorSuiteConfig parse_sensors(const json & j, const std::string & prefix)
{
  const Node n(j, prefix);
  n.allow_only({"imu", "depth", "velocity", "distance", "gps"});
  SensorSuiteConfig s;
  if (n.has("imu")) {
    const Node imu = n.at("imu");
    imu.allow_only({"accelerometer", "gyroscope", "rate_hz", "seed"});
    ImuNoise noise;
    if (imu.has("accelerometer")) {
      noise.accelerometer = parse_noise(imu.at("accelerometer"), true);
    }
    if (imu.has("gyroscope")) {
      noise.gyroscope = parse_noise(imu.at("gyroscope"), true);
    }
    noise.accelerometer.rate_hz = noise.gyroscope.rate_hz = imu.number("rate_hz", 100.0);
    noise.accelerometer.seed = noise.gyroscope.seed = imu.seed("seed", 0);
    noise.accelerometer.validate(join(imu.path(), "accelerometer"));
    s.imu = noise;
  }
  if (n.has("depth")) {
    s.depth = parse_noise(n.at("depth"), false);
  }
  if (n.has("velocity")) {
    s.velocity = parse_noise(n.at("velocity"), true);
  }
  if (n.has("distance")) {
    const Node d = n.at("distance");
    s.distance = parse_noise(d, false);
    s.distance_max_range = d.number("max_range", s.distance_max_range);
  }
  if (n.has("gps")) {
    s.gps = parse_noise(n.at("gps"), true);
  }
  s.validate();
  return s;
}

SessionConfig parse_session(const json & j, const std::filesystem::path & base_dir)
{
  const Node n = root(j);
  n.allow_only({"vehicle", "water", "scenario", "mpc", "sensors", "seed", "physics_dt",
      "control_rate_hz", "render", "render_threads", "inline_frames"});
  SessionConfig c;
  const auto section = [&](const char * key, auto parse_inline, auto load_file) {
      const Node s = n.at(key);
      const auto nested = [key](const ConfigError & e) {
          return e.field().empty() ? std::string(key) : std::string(key) + "." + e.field();
        };
      if (s.raw().is_string()) {
        const auto path = resolve(base_dir, s.string());
        try {
          return load_file(path);
        } catch (const ConfigError & e) {
          throw ConfigError(e.message() + " (in " + path.string() + ")", nested(e));
        }
      }
      try {
        return parse_inline(s.raw());
      } catch (const ConfigError & e) {
        throw ConfigError(e.message(), nested(e));
      }
    };
  if (n.has("vehicle")) {
    c.vehicle = section("vehicle", [](const json & v) {return parse_vehicle(v);}, load_vehicle);
  }
  if (n.has("water")) {
    c.water = section("water", [](const json & v) {return parse_water(v);}, load_water);
  }
  if (n.has("scenario")) {
    c.scenario = section(
      "scenario", [&](const json & v) {return parse_scenario(v, base_dir);}, load_scenario);
  }
  c.physics_dt = n.number("physics_dt", c.physics_dt);
  c.control_rate_hz = n.number("control_rate_hz", c.control_rate_hz);
  if (!(c.physics_dt > 0.0)) {
    throw ConfigError("must be > 0", "physics_dt");
  }
  if (!(c.control_rate_hz > 0.0)) {
    throw ConfigError("must be > 0", "control_rate_hz");
  }
  const double ratio = 1.0 / (c.control_rate_hz * c.physics_dt);
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
    throw ConfigError("control period must be a whole number of physics steps", "control_rate_hz");
  }
  if (n.has("mpc")) {
    c.mpc = parse_mpc(n.at("mpc").raw());
  }
  c.mpc.control_period = 1.0 / c.control_rate_hz;
  if (n.has("sensors")) {
    c.sensors = parse_sensors(n.at("sensors").raw());
  }
  c.seed = n.seed("seed", c.scenario.seed);
  c.render = n.boolean("render", c.render);
  const auto threads = n.integer("render_threads", c.render_threads);
  if (threads < 0) {
    throw ConfigError("must be >= 0", "render_threads");
  }
  c.render_threads = static_cast<unsigned>(threads);
  c.inline_frames = n.boolean("inline_frames", c.inline_frames);
  return c;
}

json to_json(const VehicleConfig & v)
{
  const auto & rb = v.dynamics.rigid_body;
  const auto & h = v.dynamics.hydro;
  json thrusters = json::array();
  for (const auto & t : v.thrusters) {
    thrusters.push_back({
        {"position", vec_json(t.position)},
        {"direction", vec_json(t.direction)},
        {"thrust_coefficient", t.thrust_coefficient},
        {"max_rotation_speed", t.max_rotation_speed},
        {"propeller_diameter", t.propeller_diameter},
        {"time_constant", t.time_constant}});
  }
  return {
    {"name", v.name},
    {"mass", rb.mass},
    {"inertia", matrix_json(rb.inertia)},
    {"cg", vec_json(rb.cg)},
    {"cb", vec_json(rb.cb)},
    {"weight", rb.weight},
    {"buoyancy", rb.buoyancy},
    {"added_mass", matrix_json(h.added_mass)},
    {"linear_damping", matrix_json(h.linear_damping)},
    {"quadratic_damping", matrix_json(h.quadratic_damping)},
    {"water_density", v.water.density},
    {"thrusters", thrusters},
    {"camera", {
        {"width", v.camera.width},
        {"height", v.camera.height},
        {"horizontal_fov", v.camera.horizontal_fov},
        {"mount_position", vec_json(v.camera.mount_position)},
        {"mount_attitude", {v.camera.mount_attitude.roll, v.camera.mount_attitude.pitch, v.camera.mount_attitude.yaw}}}}};
}

json to_json(const WaterOpticsParams & w)
{
  return {
    {"attenuation", vec_json(w.attenuation)},
    {"veiling_light", vec_json(w.veiling_light)},
    {"forward_scatter_sigma", w.forward_scatter_sigma},
    {"forward_scatter_weight", w.forward_scatter_weight},
    {"schlick_k", w.schlick_k},
    {"phase_modulated_backscatter", w.phase_modulated_backscatter}};
}

VehicleConfig load_vehicle(const std::filesystem::path & path)
{
  return parse_vehicle(read_json(path));
}

WaterOpticsParams load_water(const std::filesystem::path & path)
{
  return parse_water(read_json(path));
}

Scene load_scene(const std::filesystem::path & path)
{
  return parse_scene(read_json(path));
}

ScenarioConfig load_scenario(const std::filesystem::path & path)
{
  return parse_scenario(read_json(path), path.parent_path());
}

SessionConfig load_session(const std::filesystem::path & path)
{
  return parse_session(read_json(path), path.parent_path());
}

ConfigKind detect_kind(const json & j)
{
  if (!j.is_object()) {
    throw ConfigError("expected an object", "<root>");
  }
  if (j.contains("thrusters") || j.contains("mass")) {
    return ConfigKind::kVehicle;
  }
  if (j.contains("pipe")) {
    return ConfigKind::kScenario;
  }
  if (j.contains("primitives")) {
    return ConfigKind::kScene;
  }
  if (j.contains("attenuation") || j.contains("veiling_light")) {
    return ConfigKind::kWater;
  }
  if (j.contains("vehicle") || j.contains("scenario") || j.contains("mpc") || j.contains("physics_dt")) {
    return ConfigKind::kSession;
  }
  throw ConfigError("cannot tell which kind of config this is", "<root>");
}

std::string to_string(ConfigKind kind)
{
  switch (kind) {
    case ConfigKind::kVehicle: return "vehicle";
    case ConfigKind::kWater: return "water";
    case ConfigKind::kScene: return "scene";
    case ConfigKind::kScenario: return "scenario";
    case ConfigKind::kSession: return "session";
  }
  return "unknown";
}

ConfigKind validate_file(const std::filesystem::path & path)
{
  const json j = read_json(path);
  const ConfigKind kind = detect_kind(j);
  const auto base = path.parent_path();
  switch (kind) {
    case ConfigKind::kVehicle: parse_vehicle(j); break;
    case ConfigKind::kWater: parse_water(j); break;
    case ConfigKind::kScene: parse_scene(j); break;
    case ConfigKind::kScenario: parse_scenario(j, base); break;
    case ConfigKind::kSession: parse_session(j, base); break;
  }
  return kind;
}

}  // namespace hydrosim
