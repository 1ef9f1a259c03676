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

// hydrosim._core: in-process protocol sessions and trajectory metrics.

#include "hydrosim/camera.hpp"
#include "hydrosim/config.hpp"
#include "hydrosim/errors.hpp"
#include "hydrosim/session.hpp"
#include "hydrosim/trajectory.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hydrosim;

namespace
{

Trajectory from_rows(const Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> & rows)
{
  Trajectory t;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const auto r = rows.row(i);
    const Eigen::Quaterniond q(r[7], r[4], r[5], r[6]);
    if (!(q.norm() > 0.0)) {
      throw py::value_error("row " + std::to_string(i) + ": zero quaternion");
    }
    t.poses.push_back({r[0], Vec3(r[1], r[2], r[3]), UnitQuaternion::from_eigen(q.normalized())});
  }
  return t;
}

Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> to_rows(const Trajectory & t)
{
  Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> rows(static_cast<Eigen::Index>(t.size()), 8);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto & p = t.poses[i];
    const auto q = p.orientation.to_eigen();
    rows.row(static_cast<Eigen::Index>(i)) << p.timestamp, p.position.x(), p.position.y(), p.position.z(),
      q.x(), q.y(), q.z(), q.w();
  }
  return rows;
}

std::vector<Vec3> points(const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> & m)
{
  std::vector<Vec3> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.emplace_back(m.row(i).transpose());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Headless underwater vehicle simulator core";
  m.attr("PROTOCOL_VERSION") = kProtocolVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<TrajectoryError>(m, "TrajectoryError", PyExc_ValueError);

  py::class_<Session>(m, "Session")
    .def(py::init([](const std::string & frame_root, int index, std::optional<std::string> default_config) {
        ServerOptions opt;
        opt.frame_root = frame_root;
        if (default_config) {
          opt.default_config = *default_config;
        }
        return std::make_unique<Session>(opt, index);
      }),
      py::arg("frame_root") = "sessions", py::arg("index") = 1, py::arg("default_config") = py::none())
    .def("handle_line", &Session::handle_line, py::arg("line"), py::call_guard<py::gil_scoped_release>(),
      "Handle one request line and return the response line")
    .def_property_readonly("shutdown_requested", &Session::shutdown_requested)
    .def_property_readonly("directory", [](const Session & s) {return s.directory().string();});

  m.def("validate_file", [](const std::string & path) {return to_string(validate_file(path));},
    py::arg("path"), "Validate a config file and return its kind");

  m.def("read_tum", [](const std::string & path) {return to_rows(read_tum(path));}, py::arg("path"),
    "Read a TUM file as an (N, 8) array of t x y z qx qy qz qw");
  m.def("write_tum", [](const Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> & rows,
    const std::string & path) {write_tum(from_rows(rows), path);}, py::arg("rows"), py::arg("path"));

  m.def("umeyama_align",
    [](const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> & source,
    const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> & target, bool with_scale) {
      const Sim3Transform s = umeyama_align(points(source), points(target), with_scale);
      return py::make_tuple(s.scale, Mat3(s.rotation), Vec3(s.translation));
    },
    py::arg("source"), py::arg("target"), py::arg("with_scale") = true,
    "Least-squares (scale, R, t) with target ~ scale R source + t");

  m.def("evaluate",
    [](const Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> & est,
    const Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> & gt, const std::string & align,
    std::size_t rpe_delta, double max_dt) {
      return to_json(evaluate(from_rows(est), from_rows(gt), parse_alignment(align), rpe_delta, max_dt)).dump();
    },
    py::arg("est"), py::arg("gt"), py::arg("align") = "sim3", py::arg("rpe_delta") = 1,
    py::arg("max_dt") = kDefaultMaxDt, "APE/RPE metrics as a JSON string");

  m.def("synth_odometry",
    [](const Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor> & gt, double drift_rate,
    double sigma_translation, double sigma_rotation, std::uint64_t seed) {
      return to_rows(synth_odometry(from_rows(gt), {drift_rate, sigma_translation, sigma_rotation, seed}));
    },
    py::arg("gt"), py::arg("drift_rate") = 0.0, py::arg("sigma_translation") = 0.0,
    py::arg("sigma_rotation") = 0.0, py::arg("seed") = 0);

  m.def("report",
    [](const std::vector<std::tuple<std::string, std::string, double, double, double, double>> & rows) {
      std::vector<ReportEntry> entries;
      for (const auto & [traj, alg, ape_t, rpe_t, ape_r, rpe_r] : rows) {
        entries.push_back({traj, alg, ape_t, rpe_t, ape_r, rpe_r});
      }
      return report(entries);
    },
    py::arg("rows"), "Markdown table from (trajectory, algorithm, APE m, RPE m, APE rad, RPE rad) rows");

  m.def("schlick_phase", &schlick_phase, py::arg("cos_theta"), py::arg("k"));
}
