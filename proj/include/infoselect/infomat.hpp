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
#include <vector>

#include "infoselect/scenario.hpp"

namespace infoselect {

// Ordered set of ground-set indices; selection order is preserved and ids
// are distinct.
struct FeatureSet {
  std::vector<int> ids;

  bool empty() const { return ids.empty(); }
  int size() const { return static_cast<int>(ids.size()); }
};

// Stacked bearing-constraint coefficients for one landmark: F on the state
// (nonzero only in the position columns of visible frames), E on the unknown
// landmark position. Both have 3 rows per visible frame, whitened by
// 1/sigma_bearing.
struct LandmarkFactors {
  int id = 0;
  Eigen::MatrixXd F;  // (3*n_obs) x n
  Eigen::MatrixXd E;  // (3*n_obs) x 3
  int n_obs = 0;
};

// Schur-complement information increment of one landmark, dense and in
// factored form G with G^T G = delta and rank(G) <= 3*n_obs - 3.
struct LandmarkIncrement {
  int id = 0;
  Eigen::MatrixXd delta;  // n x n, PSD
  Eigen::MatrixXd G;      // r x n
  int n_obs = 0;
  double trace = 0.0;
};

// Baseline metadata carried alongside each increment.
struct LandmarkMeta {
  double quality = 0.0;
  bool visible_at_first_frame = false;
  Eigen::Vector3d first_bearing = Eigen::Vector3d::Zero();  // camera frame, frame 0
  int grid_cell = -1;  // row-major cell in the 15x12 first-frame grid, -1 if unseen
};

// Immutable ground set: base information matrix plus N landmark increments.
struct ProblemInstance {
  Eigen::MatrixXd omega0;  // n x n, PD
  std::vector<LandmarkIncrement> increments;
  int horizon = 0;  // T; n = 9(T+1) for instances built from scenarios
  std::vector<LandmarkMeta> meta;  // empty for synthetic instances

  int dim() const { return static_cast<int>(omega0.rows()); }
  int num_features() const { return static_cast<int>(increments.size()); }
};

inline Eigen::MatrixXd resymmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

/// tr(A^-1) via Cholesky; throws when A is not positive definite.
double trace_inverse(const Eigen::MatrixXd& spd);

/// A^-1 via Cholesky, resymmetrized.
Eigen::MatrixXd symmetric_inverse(const Eigen::MatrixXd& spd);

/// Base information from the prior and the three linear IMU factor rows per
/// step (position, velocity, bias random walk) with known rotations. The
/// result is PD and block-tridiagonal in 9x9 blocks.
Eigen::MatrixXd build_base_information(const Scenario& scenario);

/// Stacks the whitened bearing-constraint rows of one landmark over the
/// frames flagged in `mask` (as produced by visibility_mask). Empty factors
/// when the landmark is never visible.
LandmarkFactors build_landmark_factors(const Scenario& scenario,
                                       const Landmark& landmark,
                                       const std::vector<bool>& mask);

/// Marginalizes the landmark position out of the joint information matrix:
/// delta = F^T F - F^T E (E^T E)^+ E^T F, with the pseudo-inverse cut off at
/// a 1e-10 relative singular-value threshold. Also produces the factored
/// form G = U^T F for an orthonormal basis U of the projector
/// I - E (E^T E)^+ E^T, thinned to the numerical rank.
LandmarkIncrement schur_increment(const LandmarkFactors& factors, int state_dim);

/// Assembles the full ground set for a scenario. Visibility can be truncated
/// after frame `max_visible_frame` (inclusive; -1 keeps the full horizon) to
/// sweep the anticipation depth on a fixed estimation state.
ProblemInstance build_problem(const Scenario& scenario, int max_visible_frame = -1);

/// f(S) = tr(omega0^-1) - tr(omega_S^-1); exactly 0 for the empty set.
double objective_value(const ProblemInstance& problem, const FeatureSet& s);

/// Marginal gain tr(O Gt (I + G O Gt)^-1 G O) with O the maintained inverse
/// of omega_S. Equals objective_value(S + l) - objective_value(S).
double marginal_gain_smw(const Eigen::MatrixXd& omega_inv, const Eigen::MatrixXd& G);

/// Sherman-Morrison-Woodbury update of the maintained inverse after adding
/// G^T G, resymmetrized.
Eigen::MatrixXd apply_smw_update(const Eigen::MatrixXd& omega_inv,
                                 const Eigen::MatrixXd& G);

}  // namespace infoselect
