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

#include "hydrosim/trajectory.hpp"

#include "hydrosim/errors.hpp"
#include "hydrosim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

namespace hydrosim
{

namespace
{

struct RigidPose
{
  Mat3 r;
  Vec3 p;
};

RigidPose to_rigid(const TimedPose & pose)
{
  return {pose.rotation(), pose.position};
}

/// a^-1 b
RigidPose relative(const RigidPose & a, const RigidPose & b)
{
  return {a.r.transpose() * b.r, a.r.transpose() * (b.p - a.p)};
}

RigidPose compose(const RigidPose & a, const RigidPose & b)
{
  return {a.r * b.r, a.r * b.p + a.p};
}

}  // namespace

Trajectory parse_tum(std::istream & in)
{
  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream row(line);
    std::vector<double> fields;
    std::string token;
    while (row >> token) {
      char * end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw TrajectoryError(
          "line " + std::to_string(line_no) + ": invalid number '" + token + "'");
      }
      fields.push_back(v);
    }
    if (fields.size() != 8) {
      throw TrajectoryError(
        "line " + std::to_string(line_no) + ": expected 8 fields, got " +
        std::to_string(fields.size()));
    }
    UnitQuaternion q{fields[4], fields[5], fields[6], fields[7]};
    const double n = q.norm();
    if (!(n > 1e-6)) {
      throw TrajectoryError("line " + std::to_string(line_no) + ": zero quaternion");
    }
    q = {q.x / n, q.y / n, q.z / n, q.w / n};
    if (!traj.poses.empty() && !(fields[0] > traj.poses.back().timestamp)) {
      throw TrajectoryError(
        "line " + std::to_string(line_no) + ": timestamps must be strictly increasing");
    }
    traj.poses.push_back({fields[0], Vec3(fields[1], fields[2], fields[3]), q});
  }
  return traj;
}

Trajectory read_tum(const std::filesystem::path & path)
{
  std::ifstream f(path);
  if (!f) {
    throw TrajectoryError("cannot open " + path.string());
  }
  return parse_tum(f);
}

void format_tum(std::ostream & out, const Trajectory & traj)
{
  char buf[512];
  for (const auto & p : traj.poses) {
    std::snprintf(
      buf, sizeof(buf), "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n",
      p.timestamp, p.position.x(), p.position.y(), p.position.z(),
      p.orientation.x, p.orientation.y, p.orientation.z, p.orientation.w);
    out << buf;
  }
}

void write_tum(const Trajectory & traj, const std::filesystem::path & path)
{
  std::ofstream f(path);
  if (!f) {
    throw TrajectoryError("cannot write " + path.string());
  }
  format_tum(f, traj);
}

std::vector<PairIndex> associate(const Trajectory & est, const Trajectory & gt, double max_dt)
{
  if (est.empty() || gt.empty()) {
    throw TrajectoryError("cannot associate an empty trajectory");
  }
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double t = est[i].timestamp;
    auto it = std::lower_bound(
      gt.poses.begin(), gt.poses.end(), t - max_dt,
      [](const TimedPose & p, double v) {return p.timestamp < v;});
    for (; it != gt.poses.end() && it->timestamp <= t + max_dt; ++it) {
      const double dt = std::abs(it->timestamp - t);
      if (dt <= max_dt) {
        candidates.emplace_back(dt, i, static_cast<std::size_t>(it - gt.poses.begin()));
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> est_used(est.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  std::vector<PairIndex> pairs;
  for (const auto & [dt, i, j] : candidates) {
    if (!est_used[i] && !gt_used[j]) {
      est_used[i] = true;
      gt_used[j] = true;
      pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) {
    throw TrajectoryError("no timestamp pairs within max_dt");
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

namespace
{

void require_spread(const Eigen::Matrix3Xd & centered, const char * which)
{
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3Xd>(centered).singularValues();
  if (!(sv[0] > 1e-12) || !(sv[1] > 1e-10 * sv[0])) {
    throw TrajectoryError(std::string("degenerate ") + which + " point set (collinear or coincident)");
  }
}

}  // namespace

Sim3Transform umeyama_align(
  const std::vector<Vec3> & source, const std::vector<Vec3> & target, bool with_scale)
{
  if (source.size() != target.size()) {
    throw TrajectoryError("point sets differ in size");
  }
  if (source.size() < 3) {
    throw TrajectoryError("at least 3 point pairs are required for alignment");
  }
  const auto n = static_cast<Eigen::Index>(source.size());
  Eigen::Matrix3Xd p(3, n);
  Eigen::Matrix3Xd q(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p.col(i) = source[static_cast<std::size_t>(i)];
    q.col(i) = target[static_cast<std::size_t>(i)];
  }
  const Vec3 mu_p = p.rowwise().mean();
  const Vec3 mu_q = q.rowwise().mean();
  const Eigen::Matrix3Xd pc = p.colwise() - mu_p;
  const Eigen::Matrix3Xd qc = q.colwise() - mu_q;
  require_spread(pc, "source");
  require_spread(qc, "target");
  if (p == q) {
    return {};
  }

  const Mat3 sigma = qc * pc.transpose() / static_cast<double>(n);
  Eigen::JacobiSVD<Mat3> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 s = Mat3::Identity();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) {
    s(2, 2) = -1.0;
  }
  Sim3Transform out;
  out.rotation = svd.matrixU() * s * svd.matrixV().transpose();
  if (with_scale) {
    const double var_p = pc.squaredNorm() / static_cast<double>(n);
    out.scale = (svd.singularValues().asDiagonal() * s).trace() / var_p;
  }
  out.translation = mu_q - out.scale * out.rotation * mu_p;
  return out;
}

Alignment parse_alignment(const std::string & name)
{
  if (name == "sim3") {
    return Alignment::kSim3;
  }
  if (name == "se3") {
    return Alignment::kSE3;
  }
  if (name == "none") {
    return Alignment::kNone;
  }
  throw ConfigError("expected sim3, se3 or none, got '" + name + "'", "align");
}

std::string to_string(Alignment a)
{
  switch (a) {
    case Alignment::kSim3: return "sim3";
    case Alignment::kSE3: return "se3";
    case Alignment::kNone: return "none";
  }
  return "none";
}

ErrorStats error_stats(std::vector<double> errors)
{
  ErrorStats s;
  s.count = errors.size();
  if (errors.empty()) {
    return s;
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double e : errors) {
    sum += e;
    sum_sq += e * e;
    s.max = std::max(s.max, e);
  }
  const auto n = static_cast<double>(errors.size());
  s.mean = sum / n;
  s.rmse = std::sqrt(sum_sq / n);
  std::sort(errors.begin(), errors.end());
  const std::size_t mid = errors.size() / 2;
  s.median = errors.size() % 2 == 1 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  return s;
}

MetricSlice ape(
  const Trajectory & est, const Trajectory & gt, Alignment align, double max_dt,
  Sim3Transform * transform)
{
  const auto pairs = associate(est, gt, max_dt);
  Sim3Transform s;
  if (align != Alignment::kNone) {
    std::vector<Vec3> src;
    std::vector<Vec3> dst;
    src.reserve(pairs.size());
    dst.reserve(pairs.size());
    for (const auto & [i, j] : pairs) {
      src.push_back(est[i].position);
      dst.push_back(gt[j].position);
    }
    s = umeyama_align(src, dst, align == Alignment::kSim3);
  }
  if (transform != nullptr) {
    *transform = s;
  }
  std::vector<double> et;
  std::vector<double> er;
  et.reserve(pairs.size());
  er.reserve(pairs.size());
  for (const auto & [i, j] : pairs) {
    const Vec3 p = sim3_apply(s, est[i].position);
    const Mat3 r = s.rotation * est[i].rotation();
    et.push_back((p - gt[j].position).norm());
    er.push_back(rotation_angle(r.transpose() * gt[j].rotation()));
  }
  return {error_stats(std::move(et)), error_stats(std::move(er))};
}

MetricSlice rpe(const Trajectory & est, const Trajectory & gt, std::size_t delta, double max_dt)
{
  if (delta < 1) {
    throw TrajectoryError("rpe delta must be >= 1");
  }
  const auto pairs = associate(est, gt, max_dt);
  if (pairs.size() < delta + 1) {
    throw TrajectoryError(
      "trajectory too short for rpe: " + std::to_string(pairs.size()) + " pairs, delta " +
      std::to_string(delta));
  }
  std::vector<double> et;
  std::vector<double> er;
  for (std::size_t k = 0; k + delta < pairs.size(); ++k) {
    const auto [ia, ja] = pairs[k];
    const auto [ib, jb] = pairs[k + delta];
    const RigidPose rel_est = relative(to_rigid(est[ia]), to_rigid(est[ib]));
    const RigidPose rel_gt = relative(to_rigid(gt[ja]), to_rigid(gt[jb]));
    const RigidPose e = relative(rel_gt, rel_est);
    et.push_back(e.p.norm());
    er.push_back(rotation_angle(e.r));
  }
  return {error_stats(std::move(et)), error_stats(std::move(er))};
}

MetricReport evaluate(
  const Trajectory & est, const Trajectory & gt, Alignment align, std::size_t rpe_delta,
  double max_dt)
{
  MetricReport m;
  m.alignment = align;
  m.rpe_delta = rpe_delta;
  m.pairs = associate(est, gt, max_dt).size();
  m.ape = ape(est, gt, align, max_dt, &m.transform);
  m.rpe = rpe(est, gt, rpe_delta, max_dt);
  return m;
}

Trajectory synth_odometry(const Trajectory & gt, const OdometryNoise & noise)
{
  Trajectory out;
  if (gt.empty()) {
    return out;
  }
  Rng rng(noise.seed);
  out.poses.reserve(gt.size());
  out.poses.push_back(gt[0]);
  RigidPose current = to_rigid(gt[0]);
  for (std::size_t i = 1; i < gt.size(); ++i) {
    RigidPose rel = relative(to_rigid(gt[i - 1]), to_rigid(gt[i]));
    const Vec3 n_t(rng.normal(), rng.normal(), rng.normal());
    const Vec3 n_r(rng.normal(), rng.normal(), rng.normal());
    rel.p += noise.drift_rate * rel.p.norm() * Vec3::UnitY() + noise.sigma_translation * n_t;
    const Vec3 rot_vec = noise.sigma_rotation * n_r;
    if (rot_vec.norm() > 0.0) {
      rel.r = rel.r * Eigen::AngleAxisd(rot_vec.norm(), rot_vec.normalized()).toRotationMatrix();
    }
    current = compose(current, rel);
    out.poses.push_back({gt[i].timestamp, current.p, rotation_to_quaternion(current.r)});
  }
  return out;
}

ReportEntry ReportEntry::from(std::string trajectory, std::string algorithm, const MetricReport & m)
{
  return {
    std::move(trajectory), std::move(algorithm),
    m.ape.translation.rmse, m.rpe.translation.rmse,
    m.ape.rotation.rmse, m.rpe.rotation.rmse};
}

std::string format_metric(double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", value);
  return buf;
}

std::string report(const std::vector<ReportEntry> & entries)
{
  using Getter = double (*)(const ReportEntry &);
  const Getter columns[4] = {
    [](const ReportEntry & e) {return e.ape_translation;},
    [](const ReportEntry & e) {return e.rpe_translation;},
    [](const ReportEntry & e) {return e.ape_rotation;},
    [](const ReportEntry & e) {return e.rpe_rotation;}};

  // best is judged on the displayed (rounded) value so equal-looking cells tie
  double best[4];
  for (int c = 0; c < 4; ++c) {
    best[c] = std::numeric_limits<double>::infinity();
    for (const auto & e : entries) {
      best[c] = std::min(best[c], std::strtod(format_metric(columns[c](e)).c_str(), nullptr));
    }
  }
  std::ostringstream out;
  out << "| Trajectory | Algorithm | APE[m] | RPE[m] | APE[rad] | RPE[rad] |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto & e : entries) {
    out << "| " << e.trajectory << " | " << e.algorithm << " |";
    for (int c = 0; c < 4; ++c) {
      const std::string cell = format_metric(columns[c](e));
      const bool is_best = std::strtod(cell.c_str(), nullptr) == best[c];
      out << ' ' << (is_best ? "**" + cell + "**" : cell) << " |";
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const ErrorStats & s)
{
  return {{"rmse", s.rmse}, {"mean", s.mean}, {"median", s.median}, {"max", s.max}, {"count", s.count}};
}

nlohmann::json to_json(const MetricReport & m)
{
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    rot.push_back({m.transform.rotation(r, 0), m.transform.rotation(r, 1), m.transform.rotation(r, 2)});
  }
  return {
    {"alignment", to_string(m.alignment)},
    {"pairs", m.pairs},
    {"rpe_delta", m.rpe_delta},
    {"ape", {{"translation", to_json(m.ape.translation)}, {"rotation", to_json(m.ape.rotation)}}},
    {"rpe", {{"translation", to_json(m.rpe.translation)}, {"rotation", to_json(m.rpe.rotation)}}},
    {"transform", {
        {"scale", m.transform.scale},
        {"rotation", rot},
        {"translation", {m.transform.translation.x(), m.transform.translation.y(), m.transform.translation.z()}}}}};
}

}  // namespace hydrosim
