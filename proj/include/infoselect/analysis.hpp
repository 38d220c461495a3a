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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infoselect/infomat.hpp"

namespace infoselect {

struct BoundUndefinedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// f over every subset of the ground set, indexed by bitmask. Refuses
/// N > cap_n.
std::vector<double> subset_objective_table(const ProblemInstance& problem, int cap_n);

/// Exhaustive curvature: max over S, R and l in S\R with f_l(S\{l}) > 1e-12
/// of 1 - f_l((S\{l}) u R) / f_l(S\{l}), floored at 0.
double curvature_exhaustive(const ProblemInstance& problem, int cap_n = 8);

/// Exhaustive submodularity ratio: min over R, S with f_R(S) > 1e-12 of
/// sum_{l in R\S} f_l(S) / f_R(S), clamped to >= 0; 1 when no pair qualifies.
double submodularity_ratio_exhaustive(const ProblemInstance& problem, int cap_n = 8);

/// Max element-wise curvature: max over S strictly inside R strictly inside U
/// and l outside R with f_l(S) > 1e-12 of f_l(R) / f_l(S); 1 when no triple
/// qualifies.
double elementwise_curvature_max(const ProblemInstance& problem, int cap_n = 8);

struct SpectralBounds {
  double alpha_bar = 0.0;    // curvature upper bound
  double gamma_lower = 0.0;  // submodularity-ratio lower bound
  double delta_min = 0.0;    // min_l tr(delta_l)
};

/// Spectral bounds alpha_bar = 1 - gamma_lower with
/// gamma_lower = delta * lmin(omega0) / (lmax(omegaU) * (lmax(omegaU) - lmin(omega0))).
/// Throws BoundUndefinedError when delta <= 1e-12 or lmax(omegaU) <= lmin(omega0).
SpectralBounds spectral_bounds(const ProblemInstance& problem);

/// (1/alpha)(1 - e^{-alpha*gamma}); continuous limit gamma as alpha -> 0.
double greedy_factor(double alpha, double gamma);

struct RandomizedFactor {
  double factor = 0.0;
  double c = 1.0;
  int r = 0;
  double eta = 1.0;
};

/// 1 - e^{-1/c} - epsilon^eta / c.
double randomized_factor_value(double c, double epsilon, double eta);

/// Assembles c = max(alpha_max, 1), the per-iteration sample size r and
/// eta = 1 + max{0, r/2N - 1/(2(N-r))}. Rejects r >= N (eta undefined).
RandomizedFactor randomized_factor(double alpha_max, double epsilon, int kappa,
                                   int num_features);

/// Leverage scores tr(omega0^-2 delta_l) for every feature.
std::vector<double> leverage_scores(const ProblemInstance& problem);

struct TaylorCheck {
  double remainder = 0.0;   // rho(O + eps D) - rho(O) + eps tr(O^-2 D)
  double exact_quad = 0.0;  // eps^2 tr(O^-1 D O^-1 D O^-1)
  double quad_bound = 0.0;  // eps^2 ||O^-1||_2^3 ||D||_F^2
};

/// Exact first-order remainder of rho = trace-inverse along a PSD direction.
/// Satisfies 0 <= remainder <= exact_quad <= quad_bound for every eps >= 0.
TaylorCheck taylor_remainder_check(const Eigen::MatrixXd& omega0,
                                   const Eigen::MatrixXd& delta_s, double eps);

struct BoundReport {
  std::optional<double> alpha;      // exhaustive curvature (small N only)
  std::optional<double> gamma;      // exhaustive submodularity ratio
  std::optional<double> alpha_max;  // max element-wise curvature
  bool alpha_max_assumed = false;   // true when alpha_max was user-supplied
  double alpha_bar = 0.0;
  double gamma_lower = 0.0;
  double delta_min = 0.0;
  std::optional<double> greedy_factor_exhaustive;
  double greedy_factor_spectral = 0.0;
  std::optional<double> randomized_guarantee;
  std::optional<double> c;
  std::optional<int> r;
  std::optional<double> eta;
  int kappa = 0;
  double epsilon = 0.5;
  std::string instance_fingerprint;
};

/// Full report for one instance. Exhaustive quantities are included when
/// N <= exhaustive_max; otherwise alpha_max falls back to `assumed_alpha_max`
/// when provided (flagged as assumed). The randomized guarantee is present
/// whenever alpha_max is known and r < N.
BoundReport compute_bound_report(const ProblemInstance& problem, int kappa,
                                 double epsilon, int exhaustive_max,
                                 std::optional<double> assumed_alpha_max,
                                 const std::string& fingerprint);

}  // namespace infoselect
