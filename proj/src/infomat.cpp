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

#include "infoselect/infomat.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace infoselect {

double trace_inverse(const Eigen::MatrixXd& spd) {
  Eigen::LLT<Eigen::MatrixXd> llt(spd);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("trace_inverse: matrix is not positive definite");
  // tr(A^-1) = ||L^-1||_F^2 for A = L L^T.
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(spd.rows(), spd.cols());
  llt.matrixL().solveInPlace(linv);
  return linv.squaredNorm();
}

Eigen::MatrixXd symmetric_inverse(const Eigen::MatrixXd& spd) {
  Eigen::LLT<Eigen::MatrixXd> llt(spd);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("symmetric_inverse: matrix is not positive definite");
  return resymmetrize(llt.solve(Eigen::MatrixXd::Identity(spd.rows(), spd.cols())));
}

Eigen::MatrixXd build_base_information(const Scenario& sc) {
  const int horizon = sc.horizon();
  if (static_cast<int>(sc.poses.size()) != horizon + 1)
    throw std::invalid_argument("build_base_information: poses must be controls+1 long");
  const ImuConfig& imu = sc.imu;
  if (!(imu.sigma_p > 0.0) || !(imu.sigma_v > 0.0) || !(imu.sigma_b > 0.0) ||
      !(imu.sigma_prior > 0.0))
    throw std::invalid_argument("build_base_information: noise stds must be positive");

  const int n = 9 * (horizon + 1);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  if (imu.prior_information)
    omega.topLeftCorner<9, 9>() = *imu.prior_information;
  else
    omega.topLeftCorner<9, 9>() =
        Eigen::Matrix<double, 9, 9>::Identity() / (imu.sigma_prior * imu.sigma_prior);

  const double dt = sc.dt;
  const Eigen::Matrix3d identity3 = Eigen::Matrix3d::Identity();
  for (int h = 0; h < horizon; ++h) {
    const Eigen::Matrix3d& rot = sc.poses[h].R;
    // Local columns over [frame h | frame h+1]: p v b p' v' b'.
    Eigen::Matrix<double, 9, 18> factor = Eigen::Matrix<double, 9, 18>::Zero();
    // p(h+1) - p(h) - dt v(h) + (dt^2/2) R(h) b(h)
    factor.block<3, 3>(0, 9) = identity3;
    factor.block<3, 3>(0, 0) = -identity3;
    factor.block<3, 3>(0, 3) = -dt * identity3;
    factor.block<3, 3>(0, 6) = 0.5 * dt * dt * rot;
    factor.topRows<3>() /= imu.sigma_p;
    // v(h+1) - v(h) + dt R(h) b(h)
    factor.block<3, 3>(3, 12) = identity3;
    factor.block<3, 3>(3, 3) = -identity3;
    factor.block<3, 3>(3, 6) = dt * rot;
    factor.middleRows<3>(3) /= imu.sigma_v;
    // b(h+1) - b(h)
    factor.block<3, 3>(6, 15) = identity3;
    factor.block<3, 3>(6, 6) = -identity3;
    factor.bottomRows<3>() /= imu.sigma_b;

    omega.block(9 * h, 9 * h, 18, 18) += factor.transpose() * factor;
  }

  omega = resymmetrize(omega);
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("build_base_information: result is not positive definite");
  return omega;
}

LandmarkFactors build_landmark_factors(const Scenario& sc, const Landmark& lm,
                                       const std::vector<bool>& mask) {
  const int frames = static_cast<int>(sc.poses.size());
  if (static_cast<int>(mask.size()) != frames)
    throw std::invalid_argument("build_landmark_factors: mask length mismatch");
  int n_obs = 0;
  for (bool b : mask) n_obs += b ? 1 : 0;

  const int n = 9 * frames;
  LandmarkFactors out;
  out.id = lm.id;
  out.n_obs = n_obs;
  out.F = Eigen::MatrixXd::Zero(3 * n_obs, n);
  out.E = Eigen::MatrixXd::Zero(3 * n_obs, 3);
  if (n_obs == 0) return out;

  int block = 0;
  for (int h = 0; h < frames; ++h) {
    if (!mask[h]) continue;
    const auto obs = project_to_camera(sc.poses[h], sc.camera, lm.p);
    if (!obs)
      throw std::logic_error("build_landmark_factors: mask marks an invisible frame");
    const Eigen::Matrix3d r_cam = sc.poses[h].R * sc.camera.R_ext;
    // Bearing constraint row block [u]x R_cam^T, whitened.
    const Eigen::Matrix3d coeff =
        skew(obs->bearing) * r_cam.transpose() / sc.imu.sigma_bearing;
    out.E.middleRows<3>(3 * block) = coeff;
    out.F.block<3, 3>(3 * block, 9 * h) = -coeff;
    ++block;
  }
  return out;
}

LandmarkIncrement schur_increment(const LandmarkFactors& factors, int state_dim) {
  LandmarkIncrement inc;
  inc.id = factors.id;
  inc.n_obs = factors.n_obs;
  const int m = 3 * factors.n_obs;
  if (m == 0) {
    inc.delta = Eigen::MatrixXd::Zero(state_dim, state_dim);
    inc.G = Eigen::MatrixXd::Zero(0, state_dim);
    return inc;
  }
  if (factors.F.cols() != state_dim)
    throw std::invalid_argument("schur_increment: state dimension mismatch");

  // Orthonormal basis of null(E^T) = range of I - E (E^T E)^+ E^T, with the
  // pseudo-inverse cut off at 1e-10 relative.
  Eigen::JacobiSVD<Eigen::MatrixXd> esvd(factors.E, Eigen::ComputeFullU);
  const auto& sv = esvd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank_e = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank_e;
  const Eigen::MatrixXd null_basis = esvd.matrixU().rightCols(m - rank_e);

  const Eigen::MatrixXd projected = null_basis.transpose() * factors.F;

  // Thin factor G = diag(s) V^T from the SVD of the projected rows, capped at
  // the analytic rank bound 3*n_obs - 3. The dense form is rebuilt from G so
  // delta, G and the rank bound stay exactly consistent. JacobiSVD: BDCSVD
  // (Eigen 3.4.0) deflates clusters of equal singular values incorrectly on
  // exactly these matrices.
  Eigen::JacobiSVD<Eigen::MatrixXd> gsvd(projected, Eigen::ComputeThinV);
  const auto& gs = gsvd.singularValues();
  const double gmax = gs.size() > 0 ? gs(0) : 0.0;
  const int max_rank = std::max(0, m - 3);
  int keep = 0;
  while (keep < gs.size() && keep < max_rank && gs(keep) > 1e-10 * gmax) ++keep;
  inc.G = (gsvd.matrixV().leftCols(keep) * gs.head(keep).asDiagonal()).transpose();
  inc.delta = resymmetrize(inc.G.transpose() * inc.G);
  inc.trace = inc.delta.trace();
  return inc;
}

ProblemInstance build_problem(const Scenario& sc, int max_visible_frame) {
  ProblemInstance pr;
  pr.omega0 = build_base_information(sc);
  pr.horizon = sc.horizon();
  const int n = pr.dim();
  pr.increments.reserve(sc.landmarks.size());
  pr.meta.reserve(sc.landmarks.size());

  for (std::size_t i = 0; i < sc.landmarks.size(); ++i) {
    const Landmark& lm = sc.landmarks[i];
    auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
    if (max_visible_frame >= 0)
      for (std::size_t h = max_visible_frame + 1; h < mask.size(); ++h) mask[h] = false;

    LandmarkFactors factors = build_landmark_factors(sc, lm, mask);
    factors.id = static_cast<int>(i);
    LandmarkIncrement inc = schur_increment(factors, n);
    inc.id = static_cast<int>(i);
    pr.increments.push_back(std::move(inc));

    LandmarkMeta meta;
    meta.quality = lm.quality;
    meta.visible_at_first_frame = mask[0];
    if (mask[0]) {
      const auto obs = project_to_camera(sc.poses[0], sc.camera, lm.p);
      meta.first_bearing = obs->bearing;
      const CameraModel& cam = sc.camera;
      const double ah = std::atan2(obs->bearing.x(), obs->bearing.z());
      const double av = std::atan2(obs->bearing.y(), obs->bearing.z());
      const int col = std::clamp(
          static_cast<int>(std::floor((ah + cam.half_fov_h) / (2.0 * cam.half_fov_h) * 15.0)),
          0, 14);
      const int row = std::clamp(
          static_cast<int>(std::floor((av + cam.half_fov_v) / (2.0 * cam.half_fov_v) * 12.0)),
          0, 11);
      meta.grid_cell = row * 15 + col;
    }
    pr.meta.push_back(meta);
  }
  return pr;
}

namespace {

void validate_feature_set(const ProblemInstance& pr, const FeatureSet& s) {
  std::vector<char> seen(pr.num_features(), 0);
  for (int id : s.ids) {
    if (id < 0 || id >= pr.num_features())
      throw std::invalid_argument("feature id out of range");
    if (seen[id]) throw std::invalid_argument("duplicate feature id");
    seen[id] = 1;
  }
}

}  // namespace

double objective_value(const ProblemInstance& pr, const FeatureSet& s) {
  validate_feature_set(pr, s);
  if (s.empty()) return 0.0;
  Eigen::MatrixXd omega_s = pr.omega0;
  for (int id : s.ids) omega_s += pr.increments[id].delta;
  return trace_inverse(pr.omega0) - trace_inverse(omega_s);
}

double marginal_gain_smw(const Eigen::MatrixXd& omega_inv, const Eigen::MatrixXd& G) {
  const Eigen::Index r = G.rows();
  if (r == 0) return 0.0;
  const Eigen::MatrixXd b = G * omega_inv;  // r x n
  const Eigen::MatrixXd mid =
      Eigen::MatrixXd::Identity(r, r) + b * G.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(resymmetrize(mid));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("marginal_gain_smw: middle matrix is singular");
  const Eigen::MatrixXd x = llt.solve(b);
  return (b.array() * x.array()).sum();  // tr(b^T mid^-1 b)
}

Eigen::MatrixXd apply_smw_update(const Eigen::MatrixXd& omega_inv,
                                 const Eigen::MatrixXd& G) {
  const Eigen::Index r = G.rows();
  if (r == 0) return omega_inv;
  const Eigen::MatrixXd b = G * omega_inv;
  const Eigen::MatrixXd mid =
      Eigen::MatrixXd::Identity(r, r) + b * G.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(resymmetrize(mid));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("apply_smw_update: middle matrix is singular");
  const Eigen::MatrixXd x = llt.solve(b);
  return resymmetrize(omega_inv - b.transpose() * x);
}

}  // namespace infoselect
