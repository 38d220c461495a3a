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

#include <algorithm>
#include <cmath>
#include <set>

#include "infoselect/analysis.hpp"
#include "infoselect/selectors.hpp"
#include "infoselect/serialization.hpp"
#include "test_support.hpp"

using namespace infoselect;

namespace {

// Disjoint-diagonal ground set: omega0 = I3, traces 1, 2, 3 on ids 0, 1, 2.
ProblemInstance disjoint_diagonal() {
  return testsupport::modular_diagonal_instance({1.0, 2.0, 3.0});
}

void check_result_invariants(const ProblemInstance& pr, const SelectionResult& res) {
  std::set<int> unique(res.selected.ids.begin(), res.selected.ids.end());
  CHECK(unique.size() == res.selected.ids.size());
  CHECK(static_cast<int>(res.selected.ids.size()) ==
        std::min(res.kappa, pr.num_features()));
  REQUIRE(res.gains.size() == res.selected.ids.size());
  double sum = 0.0;
  for (double g : res.gains) {
    CHECK(g >= -1e-10);
    sum += g;
  }
  const double reference = objective_value(pr, res.selected);
  CHECK(res.objective == doctest::Approx(reference).epsilon(1e-8));
  CHECK(sum == doctest::Approx(res.objective).epsilon(1e-8));
}

}  // namespace

TEST_CASE("simple greedy: kappa = 0 returns the empty set") {
  const auto pr = disjoint_diagonal();
  const auto res = simple_greedy(pr, 0);
  CHECK(res.selected.ids.empty());
  CHECK(res.objective == 0.0);
}

TEST_CASE("simple greedy: modular diagonal case picks traces 3 then 2") {
  const auto pr = disjoint_diagonal();
  const auto res = simple_greedy(pr, 2);
  REQUIRE(res.selected.ids == std::vector<int>{2, 1});
  CHECK(res.gains[0] == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
  CHECK(res.gains[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(res.objective == doctest::Approx(3.0 / 4.0 + 2.0 / 3.0).epsilon(1e-12));
  check_result_invariants(pr, res);
}

TEST_CASE("simple greedy: negative kappa rejected, kappa > N clamps") {
  const auto pr = disjoint_diagonal();
  CHECK_THROWS_AS(simple_greedy(pr, -1), std::invalid_argument);
  const auto res = simple_greedy(pr, 10);
  CHECK(res.selected.ids.size() == 3);
}

TEST_CASE("simple greedy matches the exhaustive optimum on a 10-candidate instance") {
  // Small enough for exhaustive search; the greedy trajectory reproduces the
  // optimum for every budget.
  ScenarioConfig cfg;
  cfg.num_landmarks = 10;
  cfg.horizon = 5;
  const Scenario sc = generate_scenario(4, cfg);
  const auto pr = build_problem(sc);
  for (int kappa = 1; kappa <= 10; ++kappa) {
    const auto greedy = simple_greedy(pr, kappa);
    const auto optimal = exhaustive_optimal(pr, kappa);
    CHECK(greedy.objective == doctest::Approx(optimal.objective).epsilon(1e-9));
  }
}

TEST_CASE("fast low-rank greedy: full budget selects everything") {
  SplitMix64 rng(2);
  const auto pr = testsupport::random_instance(rng, 18, 7);
  const auto res = fast_lowrank_greedy(pr, 7);
  CHECK(res.selected.ids.size() == 7);
  FeatureSet all;
  for (int i = 0; i < 7; ++i) all.ids.push_back(i);
  CHECK(res.objective == doctest::Approx(objective_value(pr, all)).epsilon(1e-10));
  check_result_invariants(pr, res);
}

TEST_CASE("fast low-rank greedy selects identical sets to simple greedy") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pr = testsupport::random_instance(rng, 27, 12);
    const auto simple = simple_greedy(pr, 6);
    const auto lowrank = fast_lowrank_greedy(pr, 6);
    CHECK(simple.selected.ids == lowrank.selected.ids);
    CHECK(lowrank.objective == doctest::Approx(simple.objective).epsilon(1e-8));
    check_result_invariants(pr, lowrank);
  }
}

TEST_CASE("randomized greedy: sample size formula") {
  // N=150, kappa=10, eps=0.5 -> ceil(15 ln 2) = 11.
  CHECK(randomized_sample_size(150, 10, 0.5) == 11);
  CHECK(randomized_sample_size(10, 3, 0.5) == 3);
  // eps = e^-kappa scans everything.
  CHECK(randomized_sample_size(150, 10, std::exp(-10.0)) >= 150);
}

TEST_CASE("randomized greedy: epsilon = e^-kappa reproduces simple greedy exactly") {
  SplitMix64 rng(5);
  const auto pr = testsupport::random_instance(rng, 18, 9);
  const int kappa = 4;
  const auto randomized = randomized_greedy(pr, kappa, std::exp(-kappa), 123);
  const auto simple = simple_greedy(pr, kappa);
  CHECK(randomized.selected.ids == simple.selected.ids);
  CHECK(randomized.objective == simple.objective);  // identical arithmetic path
  check_result_invariants(pr, randomized);
}

TEST_CASE("randomized greedy: epsilon range enforced") {
  SplitMix64 rng(5);
  const auto pr = testsupport::random_instance(rng, 9, 5);
  CHECK_THROWS_AS(randomized_greedy(pr, 3, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(randomized_greedy(pr, 3, std::exp(-3.0) / 2.0, 1), std::invalid_argument);
  CHECK_NOTHROW(randomized_greedy(pr, 3, 1.0, 1));
  CHECK_NOTHROW(randomized_greedy(pr, 3, std::exp(-3.0), 1));
}

TEST_CASE("randomized greedy: deterministic per seed, varies across seeds") {
  SplitMix64 rng(15);
  const auto pr = testsupport::random_instance(rng, 18, 12);
  const auto a = randomized_greedy(pr, 4, 0.9, 7);
  const auto b = randomized_greedy(pr, 4, 0.9, 7);
  CHECK(a.selected.ids == b.selected.ids);
  bool any_difference = false;
  for (std::uint64_t seed = 0; seed < 20 && !any_difference; ++seed)
    any_difference = randomized_greedy(pr, 4, 0.9, seed).selected.ids != a.selected.ids;
  CHECK(any_difference);
}

TEST_CASE("randomized greedy: kappa=1, epsilon=1 is one uniform draw") {
  // Statistical oracle: each feature selected with frequency 1/N within 3
  // binomial standard deviations over 10000 seeds.
  SplitMix64 rng(25);
  const int num_features = 8;
  const auto pr = testsupport::random_instance(rng, 9, num_features);
  std::vector<int> counts(num_features, 0);
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto res = randomized_greedy(pr, 1, 1.0, static_cast<std::uint64_t>(seed));
    REQUIRE(res.selected.ids.size() == 1);
    counts[res.selected.ids[0]]++;
  }
  const double p = 1.0 / num_features;
  const double sigma = std::sqrt(trials * p * (1.0 - p));
  for (int count : counts)
    CHECK(std::abs(count - trials * p) <= 3.0 * sigma);
}

TEST_CASE("linearized: identity base ranks by trace") {
  const auto pr = disjoint_diagonal();
  const auto res = linearized_select(pr, 2);
  CHECK(res.selected.ids == std::vector<int>{2, 1});
  check_result_invariants(pr, res);
}

TEST_CASE("linearized: full budget returns everything") {
  SplitMix64 rng(33);
  const auto pr = testsupport::random_instance(rng, 12, 6);
  const auto res = linearized_select(pr, 6);
  std::vector<int> sorted = res.selected.ids;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("linearized: attains the brute-force maximum of the modular surrogate") {
  SplitMix64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pr = testsupport::random_instance(rng, 12, 8);
    const auto scores = leverage_scores(pr);
    const auto res = linearized_select(pr, 3);
    std::vector<int> chosen = res.selected.ids;
    std::sort(chosen.begin(), chosen.end());
    double achieved = 0.0;
    for (int id : chosen) achieved += scores[id];
    double best = -1.0;
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        for (int c = b + 1; c < 8; ++c)
          best = std::max(best, scores[a] + scores[b] + scores[c]);
    CHECK(achieved == best);
  }
}

TEST_CASE("baselines: quality picks the highest scores") {
  ScenarioConfig cfg;
  cfg.num_landmarks = 12;
  cfg.horizon = 4;
  const Scenario sc = generate_scenario(8, cfg);
  const auto pr = build_problem(sc);
  const auto res = baseline_select(pr, 2, BaselineKind::kQuality, 0);
  std::vector<int> order(12);
  for (int i = 0; i < 12; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pr.meta[a].quality > pr.meta[b].quality; });
  CHECK(res.selected.ids == std::vector<int>(order.begin(), order.begin() + 2));
  check_result_invariants(pr, res);
}

TEST_CASE("baselines: random with kappa = N selects all features") {
  SplitMix64 rng(45);
  const auto pr = testsupport::random_instance(rng, 9, 6);
  const auto res = baseline_select(pr, 6, BaselineKind::kRandom, 3);
  std::vector<int> sorted = res.selected.ids;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(baseline_select(pr, 4, BaselineKind::kRandom, 3).selected.ids ==
        baseline_select(pr, 4, BaselineKind::kRandom, 3).selected.ids);
}

TEST_CASE("baselines: grid visits one landmark per cell") {
  // One landmark placed at the center bearing of each of the 180 cells.
  ScenarioConfig base_cfg;
  base_cfg.num_landmarks = 1;
  base_cfg.horizon = 2;
  base_cfg.constant_control = {0.2, 0.0};
  Scenario sc = generate_scenario(2, base_cfg);
  const CameraModel& cam = sc.camera;
  const Eigen::Matrix3d r_cam = sc.poses[0].R * cam.R_ext;
  const Eigen::Vector3d t_cam = sc.poses[0].t + sc.poses[0].R * cam.t_ext;
  sc.landmarks.clear();
  int id = 0;
  for (int row = 0; row < 12; ++row) {
    for (int col = 0; col < 15; ++col) {
      const double ah = -cam.half_fov_h + (col + 0.5) / 15.0 * 2.0 * cam.half_fov_h;
      const double av = -cam.half_fov_v + (row + 0.5) / 12.0 * 2.0 * cam.half_fov_v;
      const double depth = 2.0;
      const Eigen::Vector3d in_cam(depth * std::tan(ah), depth * std::tan(av), depth);
      Landmark lm;
      lm.id = id;
      lm.p = t_cam + r_cam * in_cam;
      lm.quality = 0.5;
      sc.landmarks.push_back(lm);
      ++id;
    }
  }
  const auto pr = build_problem(sc);
  for (int i = 0; i < pr.num_features(); ++i) {
    REQUIRE(pr.meta[i].visible_at_first_frame);
    CHECK(pr.meta[i].grid_cell == i);  // row-major placement matches the bucketing
  }
  const auto res = baseline_select(pr, 180, BaselineKind::kGrid, 1);
  std::vector<int> sorted = res.selected.ids;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 180; ++i) CHECK(sorted[i] == i);
  // A partial budget takes the first cells in row-major order, one each.
  const auto partial = baseline_select(pr, 29, BaselineKind::kGrid, 1);
  CHECK(partial.selected.ids == std::vector<int>(sorted.begin(), sorted.begin() + 29));
}

TEST_CASE("baselines: grid and quality require metadata") {
  SplitMix64 rng(45);
  const auto pr = testsupport::random_instance(rng, 9, 5);
  CHECK_THROWS_AS(baseline_select(pr, 2, BaselineKind::kGrid, 0), std::invalid_argument);
  CHECK_THROWS_AS(baseline_select(pr, 2, BaselineKind::kQuality, 0), std::invalid_argument);
}

TEST_CASE("exhaustive: kappa = 0, modular case, and the cap") {
  const auto pr = disjoint_diagonal();
  CHECK(exhaustive_optimal(pr, 0).selected.ids.empty());
  const auto res = exhaustive_optimal(pr, 2);
  CHECK(res.selected.ids == std::vector<int>{1, 2});
  CHECK_THROWS_AS(exhaustive_optimal(pr, 1, 2), CapExceededError);
}

TEST_CASE("selector ordering: optimal >= greedy >= baselines") {
  for (int trial = 0; trial < 5; ++trial) {
    ScenarioConfig cfg;
    cfg.num_landmarks = 9;
    cfg.horizon = 3;
    const Scenario sc = generate_scenario(60 + trial, cfg);
    const auto pr = build_problem(sc);
    const int kappa = 3;
    const double opt = exhaustive_optimal(pr, kappa).objective;
    const double greedy = simple_greedy(pr, kappa).objective;
    CHECK(opt >= greedy - 1e-9);
    for (auto kind : {BaselineKind::kRandom, BaselineKind::kGrid, BaselineKind::kQuality}) {
      const double baseline =
          baseline_select(pr, kappa, kind, static_cast<std::uint64_t>(trial)).objective;
      CHECK(greedy >= baseline - 1e-9);
    }
  }
}

TEST_CASE("theorem-1 guarantee holds against the exhaustive optimum") {
  SplitMix64 rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pr = testsupport::random_instance(rng, 12, 6);
    const auto bounds = spectral_bounds(pr);
    const double factor = greedy_factor(bounds.alpha_bar, bounds.gamma_lower);
    for (int kappa : {1, 3, 5}) {
      const double greedy = simple_greedy(pr, kappa).objective;
      const double opt = exhaustive_optimal(pr, kappa).objective;
      CHECK(greedy >= factor * opt - 1e-9);
    }
  }
}

TEST_CASE("determinism: serialized results are byte-identical apart from timing") {
  SplitMix64 rng(85);
  const auto pr = testsupport::random_instance(rng, 18, 10);
  auto canonical = [](SelectionResult res) {
    res.elapsed_s = 0.0;
    return selection_to_json(res).dump();
  };
  CHECK(canonical(simple_greedy(pr, 4)) == canonical(simple_greedy(pr, 4)));
  CHECK(canonical(fast_lowrank_greedy(pr, 4)) == canonical(fast_lowrank_greedy(pr, 4)));
  CHECK(canonical(randomized_greedy(pr, 4, 0.5, 9)) ==
        canonical(randomized_greedy(pr, 4, 0.5, 9)));
  CHECK(canonical(linearized_select(pr, 4)) == canonical(linearized_select(pr, 4)));
  CHECK(canonical(baseline_select(pr, 4, BaselineKind::kRandom, 9)) ==
        canonical(baseline_select(pr, 4, BaselineKind::kRandom, 9)));
  CHECK(canonical(exhaustive_optimal(pr, 3)) == canonical(exhaustive_optimal(pr, 3)));
}

TEST_CASE("per-iteration greedy gains are nonnegative but not monotone in general") {
  SplitMix64 rng(95);
  bool saw_increasing_step = false;
  for (int trial = 0; trial < 30 && !saw_increasing_step; ++trial) {
    const auto pr = testsupport::random_instance(rng, 18, 10, 3, 0.8);
    const auto res = simple_greedy(pr, 8);
    for (std::size_t i = 0; i < res.gains.size(); ++i) {
      CHECK(res.gains[i] >= -1e-10);
      if (i > 0 && res.gains[i] > res.gains[i - 1] + 1e-12) saw_increasing_step = true;
    }
  }
  // The objective is not submodular, so increasing steps do occur.
  CHECK(saw_increasing_step);
}
