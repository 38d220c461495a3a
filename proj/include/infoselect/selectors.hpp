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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "infoselect/infomat.hpp"

namespace infoselect {

struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SelectionResult {
  FeatureSet selected;        // selection order preserved
  std::vector<double> gains;  // per-iteration marginal gains
  double objective = 0.0;     // f(selected)
  double elapsed_s = 0.0;     // wall clock around the selection itself
  std::string method;
  std::optional<std::uint64_t> seed;
  int kappa = 0;              // requested budget
};

/// Greedy with full objective re-evaluation for every remaining candidate at
/// every iteration. Ties broken by smallest id.
SelectionResult simple_greedy(const ProblemInstance& problem, int kappa);

/// Greedy maintaining omega_S^-1 with SMW gains and updates. Selects the
/// same set as simple_greedy (identical tie-breaking).
SelectionResult fast_lowrank_greedy(const ProblemInstance& problem, int kappa);

/// Per-iteration sample size ceil((N/kappa) * ln(1/epsilon)), before clamping
/// to the remaining pool.
int randomized_sample_size(int num_features, int kappa, double epsilon);

/// Greedy over a uniformly sampled candidate subset per iteration.
/// epsilon must lie in [e^-kappa, 1]; epsilon = e^-kappa scans every
/// remaining candidate and reproduces simple_greedy exactly.
SelectionResult randomized_greedy(const ProblemInstance& problem, int kappa,
                                  double epsilon, std::uint64_t seed);

/// Top-kappa features by leverage score tr(omega0^-2 delta_l), computed once.
/// The reported objective is the true f of the chosen set.
SelectionResult linearized_select(const ProblemInstance& problem, int kappa);

enum class BaselineKind { kRandom, kGrid, kQuality };

/// random: seeded uniform kappa-subset. grid: round-robin over the 15x12
/// first-frame bearing grid (quality-descending within cells), seeded-random
/// fill from landmarks unseen at frame 0. quality: top-kappa by quality.
SelectionResult baseline_select(const ProblemInstance& problem, int kappa,
                                BaselineKind kind, std::uint64_t seed);

/// Evaluates f on every kappa-subset; maximizer, lexicographically smallest
/// among ties. Throws CapExceededError when C(N, kappa) exceeds the cap.
SelectionResult exhaustive_optimal(const ProblemInstance& problem, int kappa,
                                   std::uint64_t max_combinations = 5000000);

}  // namespace infoselect
