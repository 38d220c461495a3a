// Copyright 2026 The Authors.
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

#include "infoselect/scenario.hpp"

#include <cmath>

#include "infoselect/rng.hpp"

namespace infoselect {

CameraModel CameraModel::forward_facing() {
  CameraModel cam;
  // Columns are the camera axes expressed in the body frame:
  // x_cam = -y_body (right), y_cam = -z_body (down), z_cam = +x_body (forward).
  cam.R_ext.col(0) = Eigen::Vector3d(0.0, -1.0, 0.0);
  cam.R_ext.col(1) = Eigen::Vector3d(0.0, 0.0, -1.0);
  cam.R_ext.col(2) = Eigen::Vector3d(1.0, 0.0, 0.0);
  cam.t_ext = Eigen::Vector3d(0.05, 0.0, 0.1);
  return cam;
}

std::vector<Pose> simulate_bicycle_horizon(const Pose& start,
                                           const std::vector<ControlInput>& controls,
                                           double dt, double wheelbase) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_bicycle_horizon: dt must be > 0");
  if (!(wheelbase > 0.0))
    throw std::invalid_argument("simulate_bicycle_horizon: wheelbase must be > 0");
  for (const ControlInput& c : controls) {
    if (!std::isfinite(c.u) || !std::isfinite(c.delta))
      throw std::invalid_argument("simulate_bicycle_horizon: non-finite control");
    if (!(std::abs(c.delta) < M_PI / 2.0))
      throw std::invalid_argument("simulate_bicycle_horizon: |delta| must be < pi/2");
  }

  std::vector<Pose> poses;
  poses.reserve(controls.size() + 1);
  poses.push_back(start);
  Eigen::Vector3d t = start.t;
  double psi = start.psi;
  for (const ControlInput& c : controls) {
    t += c.u * dt * Eigen::Vector3d(std::cos(psi), std::sin(psi), 0.0);
    psi += (c.u / wheelbase) * std::tan(c.delta) * dt;
    poses.push_back(planar_pose(t, psi));
  }
  return poses;
}

std::optional<BearingObservation> project_to_camera(const Pose& pose,
                                                    const CameraModel& cam,
                                                    const Eigen::Vector3d& point) {
  if (!point.allFinite())
    throw std::invalid_argument("project_to_camera: point must be finite");
  const Eigen::Vector3d t_cam = pose.t + pose.R * cam.t_ext;
  const Eigen::Matrix3d r_cam = pose.R * cam.R_ext;
  const Eigen::Vector3d v = point - t_cam;
  if (v.norm() < 1e-9) return std::nullopt;
  const Eigen::Vector3d q = r_cam.transpose() * v;
  const double depth = q.z();
  if (depth < cam.z_min || depth > cam.z_max) return std::nullopt;
  if (std::abs(std::atan2(q.x(), q.z())) > cam.half_fov_h) return std::nullopt;
  if (std::abs(std::atan2(q.y(), q.z())) > cam.half_fov_v) return std::nullopt;
  return BearingObservation{q.normalized(), depth};
}

std::vector<bool> visibility_mask(const std::vector<Pose>& poses,
                                  const CameraModel& cam,
                                  const Eigen::Vector3d& point) {
  if (poses.empty()) throw std::invalid_argument("visibility_mask: poses must be nonempty");
  std::vector<bool> mask(poses.size(), false);
  for (std::size_t h = 0; h < poses.size(); ++h)
    mask[h] = project_to_camera(poses[h], cam, point).has_value();
  return mask;
}

namespace {

// Nominal accelerometer readings along the rollout; these enter the scenario
// document only, never the information matrices.
std::vector<Eigen::Vector3d> nominal_accel_readings(const std::vector<Pose>& poses,
                                                    const std::vector<ControlInput>& controls,
                                                    double dt,
                                                    const Eigen::Vector3d& gravity) {
  const int steps = static_cast<int>(controls.size());
  std::vector<Eigen::Vector3d> readings(steps);
  auto velocity = [&](int h) {
    const double u = h < steps ? controls[h].u : 0.0;
    const double psi = poses[h].psi;
    return Eigen::Vector3d(u * std::cos(psi), u * std::sin(psi), 0.0);
  };
  for (int h = 0; h < steps; ++h) {
    const Eigen::Vector3d a = (velocity(h + 1) - velocity(h)) / dt;
    readings[h] = poses[h].R.transpose() * (a - gravity);
  }
  return readings;
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, const ScenarioConfig& cfg) {
  if (cfg.num_landmarks < 1)
    throw std::invalid_argument("generate_scenario: num_landmarks must be >= 1");
  if (cfg.horizon < 1) throw std::invalid_argument("generate_scenario: horizon must be >= 1");
  if (!cfg.controls.empty() && static_cast<int>(cfg.controls.size()) != cfg.horizon)
    throw std::invalid_argument("generate_scenario: controls must match horizon");

  Scenario sc;
  sc.seed = seed;
  sc.dt = cfg.dt;
  sc.wheelbase = cfg.wheelbase;
  sc.camera = cfg.camera;
  sc.imu = cfg.imu;
  sc.controls = cfg.controls.empty()
                    ? std::vector<ControlInput>(cfg.horizon, cfg.constant_control)
                    : cfg.controls;

  SplitMix64 rng(seed);
  sc.poses = simulate_bicycle_horizon(Pose{}, sc.controls, cfg.dt, cfg.wheelbase);
  if (cfg.heading_noise_std > 0.0) {
    for (std::size_t h = 1; h < sc.poses.size(); ++h) {
      const double psi = sc.poses[h].psi + cfg.heading_noise_std * rng.normal();
      sc.poses[h] = planar_pose(sc.poses[h].t, psi);
    }
  }
  sc.imu.accel_readings = nominal_accel_readings(sc.poses, sc.controls, sc.dt, sc.imu.gravity);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    sc.landmarks.clear();
    sc.landmarks.reserve(cfg.num_landmarks);
    bool triangulable = false;
    for (int i = 0; i < cfg.num_landmarks; ++i) {
      Landmark lm;
      lm.id = i;
      for (int d = 0; d < 3; ++d) lm.p[d] = rng.uniform(cfg.box_min[d], cfg.box_max[d]);
      lm.quality = rng.next_double();
      sc.landmarks.push_back(lm);
      if (!triangulable) {
        const auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
        int n_obs = 0;
        for (bool b : mask) n_obs += b ? 1 : 0;
        triangulable = n_obs >= 2;
      }
    }
    if (triangulable) return sc;
  }
  throw ScenarioError("generate_scenario: no triangulable landmark after " +
                      std::to_string(cfg.max_attempts) + " attempts");
}

}  // namespace infoselect
