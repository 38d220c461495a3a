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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "infoselect/infomat.hpp"
#include "test_support.hpp"

using namespace infoselect;

namespace {

Scenario straight_scenario(int horizon, int landmarks = 12, std::uint64_t seed = 5) {
  ScenarioConfig cfg;
  cfg.num_landmarks = landmarks;
  cfg.horizon = horizon;
  cfg.constant_control = {1.0, 0.0};
  return generate_scenario(seed, cfg);
}

}  // namespace

TEST_CASE("base information: T=0 is the prior only") {
  Scenario sc;
  sc.poses = {Pose{}};
  sc.imu.sigma_prior = 0.5;
  const Eigen::MatrixXd omega = build_base_information(sc);
  REQUIRE(omega.rows() == 9);
  CHECK((omega - 4.0 * Eigen::MatrixXd::Identity(9, 9)).norm() <= 1e-14);
}

TEST_CASE("base information: T=13 gives n=126 and a PD matrix") {
  const Scenario sc = straight_scenario(13, 5);
  const Eigen::MatrixXd omega = build_base_information(sc);
  CHECK(omega.rows() == 126);
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("base information: matches a factor-by-factor oracle accumulation") {
  // T=2, unit sigmas, dt=0.1, straight motion so every R(h) = I. The oracle
  // builds the three factor rows explicitly over the full state.
  Scenario sc;
  sc.dt = 0.1;
  sc.controls = {{1.0, 0.0}, {1.0, 0.0}};
  sc.poses = simulate_bicycle_horizon(Pose{}, sc.controls, sc.dt, 0.26);
  sc.imu.sigma_p = 1.0;
  sc.imu.sigma_v = 1.0;
  sc.imu.sigma_b = 1.0;
  sc.imu.sigma_prior = 1.0;

  const int n = 27;
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(n, n);
  expected.topLeftCorner(9, 9) = Eigen::MatrixXd::Identity(9, 9);
  const double dt = sc.dt;
  for (int h = 0; h < 2; ++h) {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(9, n);
    const int p0 = 9 * h, v0 = 9 * h + 3, b0 = 9 * h + 6;
    const int p1 = 9 * (h + 1), v1 = 9 * (h + 1) + 3, b1 = 9 * (h + 1) + 6;
    for (int i = 0; i < 3; ++i) {
      rows(i, p1 + i) = 1.0;
      rows(i, p0 + i) = -1.0;
      rows(i, v0 + i) = -dt;
      rows(i, b0 + i) = 0.5 * dt * dt;
      rows(3 + i, v1 + i) = 1.0;
      rows(3 + i, v0 + i) = -1.0;
      rows(3 + i, b0 + i) = dt;
      rows(6 + i, b1 + i) = 1.0;
      rows(6 + i, b0 + i) = -1.0;
    }
    expected += rows.transpose() * rows;
  }
  const Eigen::MatrixXd omega = build_base_information(sc);
  CHECK((omega - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("base information: block-tridiagonal in 9x9 blocks, exact zeros") {
  const Scenario sc = straight_scenario(6, 5);
  const Eigen::MatrixXd omega = build_base_information(sc);
  const int blocks = 7;
  for (int i = 0; i < blocks; ++i)
    for (int j = 0; j < blocks; ++j) {
      if (std::abs(i - j) < 2) continue;
      CHECK(omega.block(9 * i, 9 * j, 9, 9).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("base information: full prior block override") {
  Scenario sc;
  sc.poses = {Pose{}};
  Eigen::Matrix<double, 9, 9> prior = Eigen::Matrix<double, 9, 9>::Identity();
  prior(0, 0) = 42.0;
  prior(3, 3) = 7.0;
  sc.imu.prior_information = prior;
  const Eigen::MatrixXd omega = build_base_information(sc);
  CHECK((omega - prior).norm() <= 1e-14);
}

TEST_CASE("base information: rejects bad noise config") {
  Scenario sc;
  sc.poses = {Pose{}};
  sc.imu.sigma_p = 0.0;
  sc.controls = {};
  CHECK_THROWS_AS(build_base_information(sc), std::invalid_argument);
}

TEST_CASE("landmark factors: never visible gives the empty sentinel") {
  const Scenario sc = straight_scenario(4, 3);
  Landmark lm;
  lm.p = Eigen::Vector3d(-5.0, 0.0, 0.0);
  const auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
  const auto f = build_landmark_factors(sc, lm, mask);
  CHECK(f.n_obs == 0);
  CHECK(f.F.rows() == 0);
  CHECK(f.E.rows() == 0);
}

TEST_CASE("landmark factors: shapes and block structure") {
  const Scenario sc = straight_scenario(5, 20, 11);
  for (const Landmark& lm : sc.landmarks) {
    const auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
    const auto f = build_landmark_factors(sc, lm, mask);
    REQUIRE(f.F.rows() == 3 * f.n_obs);
    REQUIRE(f.E.rows() == 3 * f.n_obs);
    REQUIRE(f.E.cols() == 3);
    REQUIRE(f.F.cols() == 9 * (sc.horizon() + 1));
    // Every 3-row block touches only the position columns of its frame and
    // has rank <= 2 (cross-product structure).
    int block = 0;
    for (std::size_t h = 0; h < mask.size(); ++h) {
      if (!mask[h]) continue;
      Eigen::MatrixXd rows = f.F.middleRows(3 * block, 3);
      Eigen::MatrixXd in_frame = rows.middleCols(9 * h, 3);
      rows.middleCols(9 * h, 3).setZero();
      CHECK(rows.cwiseAbs().maxCoeff() == 0.0);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(in_frame);
      CHECK(svd.singularValues()(2) <= 1e-10 * svd.singularValues()(0));
      ++block;
    }
  }
}

TEST_CASE("landmark factors: ground truth satisfies the stacked constraint") {
  // F x* + E p_l must reproduce the constant right-hand side A R(h) t_ext
  // coming from the camera lever arm.
  const Scenario sc = straight_scenario(6, 15, 13);
  for (const Landmark& lm : sc.landmarks) {
    const auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
    const auto f = build_landmark_factors(sc, lm, mask);
    if (f.n_obs == 0) continue;
    Eigen::VectorXd state = Eigen::VectorXd::Zero(9 * (sc.horizon() + 1));
    for (std::size_t h = 0; h < sc.poses.size(); ++h)
      state.segment<3>(9 * h) = sc.poses[h].t;
    Eigen::VectorXd expected_rhs(3 * f.n_obs);
    int block = 0;
    for (std::size_t h = 0; h < mask.size(); ++h) {
      if (!mask[h]) continue;
      const Eigen::Matrix3d coeff = f.E.middleRows<3>(3 * block);
      expected_rhs.segment<3>(3 * block) = coeff * (sc.poses[h].R * sc.camera.t_ext);
      ++block;
    }
    const Eigen::VectorXd residual = f.F * state + f.E * lm.p - expected_rhs;
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("schur increment: zero factor gives zero increment") {
  LandmarkFactors f;
  f.n_obs = 2;
  f.F = Eigen::MatrixXd::Zero(6, 18);
  f.E = Eigen::MatrixXd::Zero(6, 3);
  const auto inc = schur_increment(f, 18);
  CHECK(inc.delta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(inc.G.rows() == 0);
  CHECK(inc.trace == 0.0);
}

TEST_CASE("schur increment: random full-rank factors, eigendecomposition oracle") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    LandmarkFactors f;
    f.n_obs = 2;
    f.F = Eigen::MatrixXd(6, 18);
    f.E = Eigen::MatrixXd(6, 3);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 18; ++j) f.F(i, j) = rng.normal();
      for (int j = 0; j < 3; ++j) f.E(i, j) = rng.normal();
    }
    const auto inc = schur_increment(f, 18);

    // Oracle: explicit formula with a dense inverse of E^T E.
    const Eigen::Matrix3d ete = f.E.transpose() * f.E;
    const Eigen::MatrixXd oracle =
        f.F.transpose() * f.F -
        f.F.transpose() * f.E * ete.inverse() * f.E.transpose() * f.F;
    CHECK((inc.delta - oracle).norm() <= 1e-10 * (1.0 + oracle.norm()));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inc.delta);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().cwiseAbs().maxCoeff());
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 1e-9 * es.eigenvalues().maxCoeff()) ++rank;
    CHECK(rank <= 3);
    CHECK(inc.G.rows() <= 3);
    CHECK((inc.G.transpose() * inc.G - inc.delta).norm() <= 1e-10 * (1.0 + inc.delta.norm()));
  }
}

TEST_CASE("schur increment: a single observation carries no information") {
  // One bearing of an unknown 3-D point is fully explained by moving the
  // point along the ray; the marginalized increment vanishes.
  const Scenario sc = straight_scenario(3, 1, 17);
  Landmark lm;
  lm.p = Eigen::Vector3d(1.5, 0.3, 0.2);
  auto mask = visibility_mask(sc.poses, sc.camera, lm.p);
  bool first_found = false;  // keep exactly one visible frame
  for (std::size_t h = 0; h < mask.size(); ++h) {
    if (mask[h] && !first_found) {
      first_found = true;
    } else {
      mask[h] = false;
    }
  }
  REQUIRE(first_found);
  const auto f = build_landmark_factors(sc, lm, mask);
  REQUIRE(f.n_obs == 1);
  const auto inc = schur_increment(f, 9 * (sc.horizon() + 1));
  CHECK(inc.G.rows() == 0);
  CHECK(inc.delta.norm() <= 1e-8 * (1.0 + f.F.squaredNorm()));
}

TEST_CASE("objective: empty set is exactly zero") {
  SplitMix64 rng(3);
  const auto pr = testsupport::random_instance(rng, 12, 6);
  CHECK(objective_value(pr, FeatureSet{}) == 0.0);
}

TEST_CASE("objective: diagonal arithmetic example") {
  // omega0 = I2, delta1 = diag(1,0): f({0}) = 2 - (1/2 + 1) = 0.5.
  ProblemInstance pr;
  pr.omega0 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd g(1, 2);
  g << 1.0, 0.0;
  pr.increments.push_back(testsupport::increment_from_factor(0, g));
  CHECK(objective_value(pr, FeatureSet{{0}}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("objective: matches the dense eigendecomposition oracle") {
  SplitMix64 rng(31);
  const auto pr = testsupport::random_instance(rng, 12, 6);
  const FeatureSet s{{2, 5}};
  const double expected = testsupport::naive_objective(pr, {2, 5});
  CHECK(objective_value(pr, s) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("objective: rejects invalid feature sets") {
  SplitMix64 rng(3);
  const auto pr = testsupport::random_instance(rng, 9, 4);
  CHECK_THROWS_AS(objective_value(pr, FeatureSet{{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(objective_value(pr, FeatureSet{{4}}), std::invalid_argument);
  CHECK_THROWS_AS(objective_value(pr, FeatureSet{{-1}}), std::invalid_argument);
}

TEST_CASE("SMW gain: empty factor, scalar case, and direct-inversion oracle") {
  CHECK(marginal_gain_smw(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd(0, 2)) == 0.0);

  Eigen::MatrixXd g(1, 2);
  g << 1.0, 0.0;
  CHECK(marginal_gain_smw(Eigen::MatrixXd::Identity(2, 2), g) ==
        doctest::Approx(0.5).epsilon(1e-14));

  SplitMix64 rng(41);
  const auto pr = testsupport::random_instance(rng, 18, 8);
  const Eigen::MatrixXd omega_inv = symmetric_inverse(pr.omega0);
  for (const auto& inc : pr.increments) {
    const double gain = marginal_gain_smw(omega_inv, inc.G);
    const double expected = testsupport::naive_objective(pr, {inc.id});
    CHECK(gain == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("SMW update: empty, diagonal, and accumulated-chain oracle") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  CHECK(apply_smw_update(eye, Eigen::MatrixXd(0, 2)) == eye);

  Eigen::MatrixXd g(1, 2);
  g << 1.0, 0.0;
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0.0, 0.0, 1.0;
  CHECK((apply_smw_update(eye, g) - expected).norm() <= 1e-14);

  SplitMix64 rng(43);
  const auto pr = testsupport::random_instance(rng, 27, 5);
  Eigen::MatrixXd maintained = symmetric_inverse(pr.omega0);
  Eigen::MatrixXd omega = pr.omega0;
  for (const auto& inc : pr.increments) {
    maintained = apply_smw_update(maintained, inc.G);
    omega += inc.delta;
  }
  const Eigen::MatrixXd direct = omega.inverse();
  CHECK((maintained - direct).norm() <= 1e-8 * direct.norm());
}

TEST_CASE("monotonicity and boundedness properties") {
  SplitMix64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pr = testsupport::random_instance(rng, 18, 8);
    const double bound = trace_inverse(pr.omega0);
    for (int rep = 0; rep < 20; ++rep) {
      FeatureSet s;
      for (int id = 0; id < pr.num_features(); ++id)
        if (rng.next_double() < 0.4) s.ids.push_back(id);
      const double fs = objective_value(pr, s);
      CHECK(fs >= 0.0);
      CHECK(fs < bound);
      int extra = static_cast<int>(rng.next_below(pr.num_features()));
      if (std::find(s.ids.begin(), s.ids.end(), extra) != s.ids.end()) continue;
      FeatureSet larger = s;
      larger.ids.push_back(extra);
      const double gain = objective_value(pr, larger) - fs;
      CHECK(gain >= -1e-10);
      if (pr.increments[extra].trace > 1e-9) CHECK(gain > 0.0);
    }
  }
}

TEST_CASE("problem build: increments are PSD with the analytic rank bound") {
  const Scenario sc = straight_scenario(6, 25, 23);
  const auto pr = build_problem(sc);
  REQUIRE(pr.num_features() == 25);
  CHECK(pr.meta.size() == 25);
  for (const auto& inc : pr.increments) {
    if (inc.n_obs == 0) {
      CHECK(inc.G.rows() == 0);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inc.delta);
    const double lmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * lmax);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 1e-9 * lmax) ++rank;
    CHECK(rank <= std::max(0, 3 * inc.n_obs - 3));
    CHECK(inc.G.rows() <= std::max(0, 3 * inc.n_obs - 3));
  }
}

TEST_CASE("problem build: anticipation-depth truncation only removes information") {
  const Scenario sc = straight_scenario(8, 15, 29);
  const auto full = build_problem(sc);
  const auto truncated = build_problem(sc, 3);
  REQUIRE(full.num_features() == truncated.num_features());
  CHECK((full.omega0 - truncated.omega0).norm() == 0.0);
  for (int id = 0; id < full.num_features(); ++id) {
    CHECK(truncated.increments[id].n_obs <= full.increments[id].n_obs);
    // Difference of increments is PSD: deeper visibility never loses rows.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full.increments[id].delta -
                                                      truncated.increments[id].delta);
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-8 * std::max(1.0, full.increments[id].delta.norm()));
  }
}
