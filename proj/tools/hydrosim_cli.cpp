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

// hydrosim command line: run | serve | bench | render | validate
//
// Exit codes: 0 success, 1 I/O or other failure, 2 config, input or usage error, 3 divergence.

#include "hydrosim/config.hpp"
#include "hydrosim/environment.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/log.hpp"
#include "hydrosim/session.hpp"
#include "hydrosim/trajectory.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hydrosim;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct RunArgs
{
  std::string config;
  std::string scenario;
  std::string vehicle;
  std::string water;
  std::optional<std::uint64_t> seed;
  std::string out{"run-output"};
  bool frames{false};
  std::optional<int> max_steps;
  double odom_drift{0.02};
  double odom_sigma_t{0.002};
  double odom_sigma_r{0.0005};
};

struct BenchArgs
{
  std::string gt;
  std::vector<std::string> est;
  std::vector<std::string> labels;
  std::string trajectory{"trajectory"};
  std::string align{"sim3"};
  std::size_t rpe_delta{1};
  double max_dt{kDefaultMaxDt};
  std::string out;
};

struct RenderArgs
{
  std::string scene;
  std::string scenario;
  std::string vehicle;
  std::string water;
  std::vector<double> pose;
  std::optional<int> width;
  std::optional<int> height;
  std::string out{"frame.ppm"};
  std::string depth;
  unsigned threads{0};
};

struct ServeArgs
{
  bool stdio{false};
  std::string host{"127.0.0.1"};
  int port{7878};
  std::string frame_root{"sessions"};
  std::string config;
};

SessionConfig session_from(const RunArgs & a)
{
  SessionConfig c;
  if (!a.config.empty()) {
    c = load_session(a.config);
  }
  if (!a.scenario.empty()) {
    c.scenario = load_scenario(a.scenario);
    c.seed = c.scenario.seed;
  }
  if (!a.vehicle.empty()) {
    c.vehicle = load_vehicle(a.vehicle);
  }
  if (!a.water.empty()) {
    c.water = load_water(a.water);
  }
  if (a.seed) {
    c.seed = *a.seed;
  }
  if (a.max_steps) {
    if (*a.max_steps < 1) {
      throw ConfigError("must be >= 1", "--max-steps");
    }
    c.scenario.max_steps = *a.max_steps;
  }
  c.render = a.frames;
  return c;
}

int cmd_run(const RunArgs & a)
{
  Environment env(session_from(a));
  const fs::path out(a.out);
  fs::create_directories(out);
  if (a.frames) {
    fs::create_directories(out / "frames");
  }
  const auto write_frame = [&](const Observation & obs, int step) {
      if (!a.frames || !obs.frame) {
        return;
      }
      char stem[32];
      std::snprintf(stem, sizeof(stem), "step%04d", step);
      write_ppm(out / "frames" / (std::string(stem) + ".ppm"), obs.frame->rgb);
      write_depth_pgm(out / "frames" / (std::string(stem) + ".pgm"), obs.frame->depth);
    };

  const auto & layout = env.config().scenario.layout;
  write_frame(env.reset(), 0);
  double max_ep = env.observation().cross_track.e_p;
  while (!env.status().terminated) {
    const Action action = scripted_follower(env.state(), layout);
    const StepResult r = env.step(action);
    max_ep = std::max(max_ep, r.observation.cross_track.e_p);
    write_frame(r.observation, r.status.step);
  }
  write_tum(env.trajectory(), out / "ground_truth.tum");
  write_episode_csv(out / "episode.csv", env.log());
  OdometryNoise noise{a.odom_drift, a.odom_sigma_t, a.odom_sigma_r, mix_seed(0, env.episode_seed())};
  write_tum(synth_odometry(env.trajectory(), noise), out / "estimate.tum");

  const nlohmann::json summary = {
    {"scenario", env.config().scenario.name},
    {"seed", env.episode_seed()},
    {"steps", env.status().step},
    {"reason", to_string(env.status().reason)},
    {"cumulative_reward", env.status().cumulative_reward},
    {"max_e_p", max_ep},
    {"sim_time", env.state().time}};
  std::ofstream(out / "summary.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs & a)
{
  const Alignment align = parse_alignment(a.align);
  if (a.rpe_delta < 1) {
    throw ConfigError("must be >= 1", "--rpe-delta");
  }
  if (!(a.max_dt > 0.0)) {
    throw ConfigError("must be > 0", "--max-dt");
  }
  if (!a.labels.empty() && a.labels.size() != a.est.size()) {
    throw ConfigError("give one --label per --est", "--label");
  }
  const Trajectory gt = read_tum(a.gt);
  std::vector<ReportEntry> entries;
  nlohmann::json results = nlohmann::json::array();
  for (std::size_t i = 0; i < a.est.size(); ++i) {
    const std::string label = a.labels.empty() ? fs::path(a.est[i]).stem().string() : a.labels[i];
    const MetricReport m = evaluate(read_tum(a.est[i]), gt, align, a.rpe_delta, a.max_dt);
    entries.push_back(ReportEntry::from(a.trajectory, label, m));
    nlohmann::json j = to_json(m);
    j["trajectory"] = a.trajectory;
    j["algorithm"] = label;
    results.push_back(j);
  }
  const std::string table = report(entries);
  if (a.out.empty()) {
    std::cout << table;
    return kExitOk;
  }
  std::ofstream f(a.out);
  if (!f) {
    throw std::runtime_error("cannot write " + a.out);
  }
  if (fs::path(a.out).extension() == ".json") {
    f << nlohmann::json{{"results", results}}.dump(2) << '\n';
  } else {
    f << table;
  }
  std::cout << table;
  return kExitOk;
}

int cmd_render(const RenderArgs & a)
{
  if (a.scene.empty() == a.scenario.empty()) {
    throw ConfigError("give exactly one of --scene or --scenario", "--scene");
  }
  Scene scene = a.scene.empty() ? build_pipe_scene(load_scenario(a.scenario)) : load_scene(a.scene);
  CameraIntrinsics camera = a.vehicle.empty() ? bluerov2_heavy().camera : load_vehicle(a.vehicle).camera;
  if (a.width) {
    camera.width = *a.width;
  }
  if (a.height) {
    camera.height = *a.height;
  }
  camera.validate();
  const WaterOpticsParams water = a.water.empty() ? WaterOpticsParams{} : load_water(a.water);
  VehicleState state;
  for (int i = 0; i < 6; ++i) {
    state.pose[i] = a.pose[static_cast<std::size_t>(i)];
  }
  const RenderedFrame frame = capture(state, scene, camera, water, a.threads);
  write_ppm(a.out, frame.rgb);
  if (!a.depth.empty()) {
    write_depth_pgm(a.depth, frame.depth);
  }
  return kExitOk;
}

int cmd_validate(const std::vector<std::string> & files)
{
  for (const auto & f : files) {
    const ConfigKind kind = validate_file(f);
    std::cout << "ok " << to_string(kind) << ' ' << f << '\n';
  }
  return kExitOk;
}

int cmd_serve(const ServeArgs & a)
{
  ServerOptions opts;
  opts.host = a.host;
  opts.port = a.port;
  opts.frame_root = a.frame_root;
  if (!a.config.empty()) {
    validate_file(a.config);
    opts.default_config = a.config;
  }
  if (a.stdio) {
    return serve_stdio(opts, std::cin, std::cout);
  }
  TcpServer server(opts);
  const int port = server.listen();
  std::cout << "listening on " << a.host << ':' << port << std::endl;
  server.run();
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Headless underwater vehicle simulator and trajectory benchmark"};
  app.set_version_flag("--version", "hydrosim 0.1.0");
  app.require_subcommand(1);

  RunArgs run;
  auto * run_cmd = app.add_subcommand("run", "Run a pipe-following episode with the scripted follower");
  run_cmd->add_option("--config", run.config, "Session config (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--scenario", run.scenario, "Scenario file (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--vehicle", run.vehicle, "Vehicle file (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--water", run.water, "Water optics file (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Episode seed");
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_flag("--frames", run.frames, "Render and write camera frames");
  run_cmd->add_option("--max-steps", run.max_steps, "Override the scenario step limit");
  run_cmd->add_option("--odometry-drift", run.odom_drift, "Synthetic odometry lateral drift [m/m]")
  ->capture_default_str();
  run_cmd->add_option("--odometry-sigma-t", run.odom_sigma_t, "Synthetic odometry translation noise [m]")
  ->capture_default_str();
  run_cmd->add_option("--odometry-sigma-r", run.odom_sigma_r, "Synthetic odometry rotation noise [rad]")
  ->capture_default_str();

  ServeArgs serve;
  auto * serve_cmd = app.add_subcommand("serve", "Serve the line protocol over TCP or stdio");
  serve_cmd->add_flag("--stdio", serve.stdio, "Use stdin/stdout instead of TCP");
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "TCP port, 0 picks a free one")->capture_default_str();
  serve_cmd->add_option("--frame-root", serve.frame_root, "Directory for session frames")->capture_default_str();
  serve_cmd->add_option("--config", serve.config, "Default session config")->check(CLI::ExistingFile);

  BenchArgs bench;
  auto * bench_cmd = app.add_subcommand("bench", "APE/RPE of estimated trajectories against ground truth");
  bench_cmd->add_option("--gt", bench.gt, "Ground truth TUM file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--est", bench.est, "Estimated TUM file (repeatable)")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--label", bench.labels, "Algorithm name per --est");
  bench_cmd->add_option("--trajectory", bench.trajectory, "Trajectory name in the report")->capture_default_str();
  bench_cmd->add_option("--align", bench.align, "sim3, se3 or none")->capture_default_str();
  bench_cmd->add_option("--rpe-delta", bench.rpe_delta, "RPE frame offset")->capture_default_str();
  bench_cmd->add_option("--max-dt", bench.max_dt, "Association tolerance [s]")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Report file (.md or .json)");

  RenderArgs render;
  auto * render_cmd = app.add_subcommand("render", "Render one camera frame");
  render_cmd->add_option("--scene", render.scene, "Scene file (JSON)")->check(CLI::ExistingFile);
  render_cmd->add_option("--scenario", render.scenario, "Scenario file; renders its pipe scene")
  ->check(CLI::ExistingFile);
  render_cmd->add_option("--vehicle", render.vehicle, "Vehicle file for the camera")->check(CLI::ExistingFile);
  render_cmd->add_option("--water", render.water, "Water optics file")->check(CLI::ExistingFile);
  render_cmd->add_option("--pose", render.pose, "x y z roll pitch yaw")->required()->expected(6)->delimiter(',');
  render_cmd->add_option("--width", render.width, "Image width");
  render_cmd->add_option("--height", render.height, "Image height");
  render_cmd->add_option("--out", render.out, "RGB output (PPM)")->capture_default_str();
  render_cmd->add_option("--depth", render.depth, "Depth output (16-bit PGM, mm)");
  render_cmd->add_option("--threads", render.threads, "Render threads, 0 = all cores")->capture_default_str();

  std::vector<std::string> validate_files;
  auto * validate_cmd = app.add_subcommand("validate", "Check config files");
  validate_cmd->add_option("files", validate_files, "Config files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitConfig;
  }

  logger();
  try {
    if (*run_cmd) {
      if (run.config.empty() && run.scenario.empty()) {
        throw ConfigError("give --config or --scenario", "--scenario");
      }
      return cmd_run(run);
    }
    if (*serve_cmd) {
      return cmd_serve(serve);
    }
    if (*bench_cmd) {
      return cmd_bench(bench);
    }
    if (*render_cmd) {
      return cmd_render(render);
    }
    if (*validate_cmd) {
      return cmd_validate(validate_files);
    }
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TrajectoryError & e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError & e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
