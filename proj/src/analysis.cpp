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

#include "infoselect/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace infoselect {

namespace {

constexpr double kZeroGain = 1e-12;  // vacuous-constraint threshold in Defs 2-4

int checked_ground_size(const ProblemInstance& pr, int cap_n) {
  const int num = pr.num_features();
  if (num > cap_n)
    throw std::invalid_argument("exhaustive analysis refused: N = " + std::to_string(num) +
                                " exceeds cap " + std::to_string(cap_n));
  return num;
}

}  // namespace

std::vector<double> subset_objective_table(const ProblemInstance& pr, int cap_n) {
  const int num = checked_ground_size(pr, cap_n);
  const double tr0 = trace_inverse(pr.omega0);
  std::vector<double> table(std::size_t{1} << num);
  table[0] = 0.0;
  Eigen::MatrixXd omega(pr.dim(), pr.dim());
  for (std::size_t mask = 1; mask < table.size(); ++mask) {
    omega = pr.omega0;
    for (int l = 0; l < num; ++l)
      if (mask & (std::size_t{1} << l)) omega += pr.increments[l].delta;
    table[mask] = tr0 - trace_inverse(omega);
  }
  return table;
}

double curvature_exhaustive(const ProblemInstance& pr, int cap_n) {
  const int num = checked_ground_size(pr, cap_n);
  const auto f = subset_objective_table(pr, cap_n);
  const std::size_t full = std::size_t{1} << num;
  double alpha = 0.0;
  for (std::size_t s = 0; s < full; ++s) {
    for (int l = 0; l < num; ++l) {
      const std::size_t bit = std::size_t{1} << l;
      if (!(s & bit)) continue;
      const double base = f[s] - f[s & ~bit];  // f_l(S \ {l})
      if (base <= kZeroGain) continue;
      for (std::size_t r = 0; r < full; ++r) {
        if (r & bit) continue;  // need l in S \ R
        const double num_gain = f[s | r] - f[(s & ~bit) | r];
        alpha = std::max(alpha, 1.0 - num_gain / base);
      }
    }
  }
  return alpha;
}

double submodularity_ratio_exhaustive(const ProblemInstance& pr, int cap_n) {
  const int num = checked_ground_size(pr, cap_n);
  const auto f = subset_objective_table(pr, cap_n);
  const std::size_t full = std::size_t{1} << num;
  double gamma = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t s = 0; s < full; ++s) {
    for (std::size_t r = 0; r < full; ++r) {
      const double joint = f[s | r] - f[s];  // f_R(S)
      if (joint <= kZeroGain) continue;
      double singles = 0.0;
      std::size_t rest = r & ~s;
      while (rest) {
        const std::size_t bit = rest & (~rest + 1);
        singles += f[s | bit] - f[s];
        rest &= rest - 1;
      }
      gamma = std::min(gamma, singles / joint);
      any = true;
    }
  }
  if (!any) return 1.0;
  return std::max(0.0, gamma);
}

double elementwise_curvature_max(const ProblemInstance& pr, int cap_n) {
  const int num = checked_ground_size(pr, cap_n);
  const auto f = subset_objective_table(pr, cap_n);
  const std::size_t full = (std::size_t{1} << num) - 1;
  double alpha_max = 0.0;
  bool any = false;
  for (std::size_t r = 1; r < full; ++r) {  // R strictly inside U, nonempty
    // S runs over strict subsets of R (including the empty set).
    std::size_t s = r;
    do {
      s = (s - 1) & r;
      for (int l = 0; l < num; ++l) {
        const std::size_t bit = std::size_t{1} << l;
        if (r & bit) continue;  // need l outside R
        const double base = f[s | bit] - f[s];  // f_l(S)
        if (base <= kZeroGain) continue;
        alpha_max = std::max(alpha_max, (f[r | bit] - f[r]) / base);
        any = true;
      }
    } while (s != 0);
  }
  return any ? alpha_max : 1.0;
}

SpectralBounds spectral_bounds(const ProblemInstance& pr) {
  if (pr.num_features() == 0)
    throw BoundUndefinedError("spectral_bounds: empty ground set");
  double delta_min = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd omega_u = pr.omega0;
  for (const auto& inc : pr.increments) {
    delta_min = std::min(delta_min, inc.trace);
    omega_u += inc.delta;
  }
  if (delta_min <= 1e-12)
    throw BoundUndefinedError(
        "spectral_bounds: min_l tr(delta_l) <= 0, Theorem 1 bound undefined");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es0(pr.omega0, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esu(resymmetrize(omega_u),
                                                     Eigen::EigenvaluesOnly);
  const double lmin0 = es0.eigenvalues().minCoeff();
  const double lmaxu = esu.eigenvalues().maxCoeff();
  if (lmaxu <= lmin0)
    throw BoundUndefinedError("spectral_bounds: lambda_max(omega_U) <= lambda_min(omega_0)");

  SpectralBounds b;
  b.delta_min = delta_min;
  b.gamma_lower = delta_min * lmin0 / (lmaxu * (lmaxu - lmin0));
  b.alpha_bar = 1.0 - b.gamma_lower;
  return b;
}

double greedy_factor(double alpha, double gamma) {
  if (alpha < -1e-9 || alpha > 1.0 + 1e-9 || gamma < -1e-9 || gamma > 1.0 + 1e-9)
    throw std::invalid_argument("greedy_factor: alpha and gamma must lie in [0, 1]");
  alpha = std::clamp(alpha, 0.0, 1.0);
  gamma = std::clamp(gamma, 0.0, 1.0);
  if (alpha < 1e-12) return gamma;  // limit of (1/a)(1 - e^{-a g})
  return (1.0 - std::exp(-alpha * gamma)) / alpha;
}

double randomized_factor_value(double c, double epsilon, double eta) {
  return 1.0 - std::exp(-1.0 / c) - std::pow(epsilon, eta) / c;
}

RandomizedFactor randomized_factor(double alpha_max, double epsilon, int kappa,
                                   int num_features) {
  if (kappa < 1) throw std::invalid_argument("randomized_factor: kappa must be >= 1");
  const double eps_floor = std::exp(-static_cast<double>(kappa));
  if (epsilon < eps_floor * (1.0 - 1e-12) || epsilon > 1.0 + 1e-12)
    throw std::invalid_argument("randomized_factor: epsilon must lie in [e^-kappa, 1]");

  RandomizedFactor out;
  out.c = std::max(alpha_max, 1.0);
  out.r = std::max(1, static_cast<int>(std::ceil(
                          static_cast<double>(num_features) / kappa *
                          std::log(1.0 / epsilon))));
  if (out.r >= num_features)
    throw std::invalid_argument("randomized_factor: r >= N leaves eta undefined");
  const double n = num_features;
  out.eta = 1.0 + std::max(0.0, out.r / (2.0 * n) - 1.0 / (2.0 * (n - out.r)));
  out.factor = randomized_factor_value(out.c, epsilon, out.eta);
  return out;
}

std::vector<double> leverage_scores(const ProblemInstance& pr) {
  const Eigen::MatrixXd omega_inv = symmetric_inverse(pr.omega0);
  std::vector<double> scores;
  scores.reserve(pr.increments.size());
  for (const auto& inc : pr.increments) {
    if (inc.G.rows() == 0) {
      scores.push_back(0.0);
      continue;
    }
    // tr(O^-2 G^T G) = ||O^-1 G^T||_F^2
    scores.push_back((omega_inv * inc.G.transpose()).squaredNorm());
  }
  return scores;
}

TaylorCheck taylor_remainder_check(const Eigen::MatrixXd& omega0,
                                   const Eigen::MatrixXd& delta_s, double eps) {
  if (eps < 0.0) throw std::invalid_argument("taylor_remainder_check: eps must be >= 0");
  TaylorCheck out;
  const Eigen::MatrixXd omega_inv = symmetric_inverse(omega0);
  const double rho0 = trace_inverse(omega0);
  const double rho1 = trace_inverse(omega0 + eps * delta_s);
  const double linear = (omega_inv * omega_inv).cwiseProduct(delta_s).sum();
  out.remainder = rho1 - rho0 + eps * linear;

  const Eigen::MatrixXd prod = omega_inv * delta_s;
  out.exact_quad = eps * eps * (prod * prod * omega_inv).trace();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega0, Eigen::EigenvaluesOnly);
  const double inv_norm = 1.0 / es.eigenvalues().minCoeff();
  out.quad_bound = eps * eps * inv_norm * inv_norm * inv_norm * delta_s.squaredNorm();
  return out;
}

BoundReport compute_bound_report(const ProblemInstance& pr, int kappa, double epsilon,
                                 int exhaustive_max,
                                 std::optional<double> assumed_alpha_max,
                                 const std::string& fingerprint) {
  BoundReport report;
  report.kappa = kappa;
  report.epsilon = epsilon;
  report.instance_fingerprint = fingerprint;

  const SpectralBounds sb = spectral_bounds(pr);
  report.alpha_bar = sb.alpha_bar;
  report.gamma_lower = sb.gamma_lower;
  report.delta_min = sb.delta_min;
  report.greedy_factor_spectral = greedy_factor(sb.alpha_bar, sb.gamma_lower);

  if (pr.num_features() <= exhaustive_max) {
    report.alpha = curvature_exhaustive(pr, exhaustive_max);
    report.gamma = submodularity_ratio_exhaustive(pr, exhaustive_max);
    report.alpha_max = elementwise_curvature_max(pr, exhaustive_max);
    report.greedy_factor_exhaustive =
        greedy_factor(std::min(*report.alpha, 1.0), std::min(*report.gamma, 1.0));
  } else if (assumed_alpha_max) {
    report.alpha_max = *assumed_alpha_max;
    report.alpha_max_assumed = true;
  }

  if (report.alpha_max && kappa >= 1) {
    try {
      const RandomizedFactor rf =
          randomized_factor(*report.alpha_max, epsilon, kappa, pr.num_features());
      report.randomized_guarantee = rf.factor;
      report.c = rf.c;
      report.r = rf.r;
      report.eta = rf.eta;
    } catch (const std::invalid_argument&) {
      // r >= N (or epsilon out of range for this kappa): leave the Theorem 2
      // fields unset rather than reporting an undefined eta.
    }
  }
  return report;
}

}  // namespace infoselect
