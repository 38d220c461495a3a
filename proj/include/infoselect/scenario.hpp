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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "infoselect/geometry.hpp"

namespace infoselect {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frustum parameters in calibrated bearing space (half-angles, not pixels)
// plus the IMU-to-camera extrinsics.
struct CameraModel {
  double half_fov_h = 0.7;   // [rad], horizontal half field of view
  double half_fov_v = 0.55;  // [rad], vertical half field of view
  double z_min = 0.2;        // [m], near visibility limit along the optical axis
  double z_max = 8.0;        // [m], far visibility limit
  Eigen::Vector3d t_ext = Eigen::Vector3d::Zero();      // IMU-to-camera translation
  Eigen::Matrix3d R_ext = Eigen::Matrix3d::Identity();  // IMU-to-camera rotation

  // Optical axis along body +x, image x to the right (-y body), image y
  // down (-z body). This is the rig used by generated scenarios.
  static CameraModel forward_facing();
};

struct Landmark {
  int id = 0;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();  // world position [m]
  double quality = 0.0;                         // detector score proxy in [0, 1]
};

struct ImuConfig {
  double sigma_p = 0.05;        // position-factor noise std
  double sigma_v = 0.05;        // velocity-factor noise std
  double sigma_b = 0.005;       // bias random-walk std
  double sigma_prior = 1.0;     // isotropic prior std on the first frame's 9 states
  double sigma_bearing = 0.01;  // whitening applied to every vision row
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);  // [m/s^2]
  std::vector<Eigen::Vector3d> accel_readings;  // T accelerometer samples; do not
                                                // affect information matrices
  // Full 9x9 prior information on the first frame; overrides sigma_prior.
  std::optional<Eigen::Matrix<double, 9, 9>> prior_information;
};

struct Scenario {
  std::vector<Pose> poses;             // T+1 predicted frames
  std::vector<ControlInput> controls;  // T steps
  double dt = 0.1;                     // [s]
  double wheelbase = 0.26;             // [m]
  CameraModel camera;
  std::vector<Landmark> landmarks;
  ImuConfig imu;
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(controls.size()); }
};

struct ScenarioConfig {
  int num_landmarks = 150;
  int horizon = 13;  // T
  double dt = 0.1;
  double wheelbase = 0.26;
  // Applied for every step when `controls` is empty.
  ControlInput constant_control{1.0, 0.05};
  std::vector<ControlInput> controls;
  CameraModel camera = CameraModel::forward_facing();
  ImuConfig imu;
  // Landmark sampling box, placed ahead of the start pose so most samples
  // fall inside the initial frustum.
  Eigen::Vector3d box_min = Eigen::Vector3d(0.4, -2.0, -0.4);
  Eigen::Vector3d box_max = Eigen::Vector3d(5.0, 2.0, 1.2);
  // Optional perturbation of the predicted headings; 0 keeps the horizon
  // exactly the bicycle rollout.
  double heading_noise_std = 0.0;
  int max_attempts = 100;  // resampling cap before "no triangulable landmark"
};

struct BearingObservation {
  Eigen::Vector3d bearing;  // unit vector in the camera frame
  double depth = 0.0;       // component along the optical axis [m]
};

/// Rolls the discrete-time kinematic bicycle model forward. Returns
/// controls.size()+1 poses, the first equal to `start`.
std::vector<Pose> simulate_bicycle_horizon(const Pose& start,
                                           const std::vector<ControlInput>& controls,
                                           double dt, double wheelbase);

/// Bearing and depth of `point` seen from `pose` through `cam`, or nothing
/// when the point falls outside the frustum (or within 1e-9 m of the camera
/// center).
std::optional<BearingObservation> project_to_camera(const Pose& pose,
                                                    const CameraModel& cam,
                                                    const Eigen::Vector3d& point);

/// Entry h is true iff project_to_camera succeeds at poses[h].
std::vector<bool> visibility_mask(const std::vector<Pose>& poses,
                                  const CameraModel& cam,
                                  const Eigen::Vector3d& point);

/// Deterministic synthetic world for a fixed (seed, cfg). Guarantees at least
/// one landmark visible in two or more frames; throws ScenarioError after
/// cfg.max_attempts resampling rounds otherwise.
Scenario generate_scenario(std::uint64_t seed, const ScenarioConfig& cfg);

}  // namespace infoselect
