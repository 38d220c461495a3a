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

#include "infoselect/selectors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "infoselect/analysis.hpp"
#include "infoselect/rng.hpp"

namespace infoselect {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_kappa(int kappa) {
  if (kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
}

// Marginal gains and final objective along a fixed selection order, for
// selectors whose algorithm does not produce them as a byproduct.
void fill_chain_gains(const ProblemInstance& pr, SelectionResult* res) {
  Eigen::MatrixXd omega = pr.omega0;
  double tr_prev = trace_inverse(omega);
  const double tr0 = tr_prev;
  res->gains.clear();
  res->gains.reserve(res->selected.ids.size());
  for (int id : res->selected.ids) {
    omega += pr.increments[id].delta;
    const double tr = trace_inverse(omega);
    res->gains.push_back(tr_prev - tr);
    tr_prev = tr;
  }
  res->objective = tr0 - tr_prev;
}

std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n - k + i) / i stays integral; bail out early past the cap.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (c > (2 * cap) / num) return 2 * cap;  // saturate, enough to compare
    c = c * num / static_cast<std::uint64_t>(i);
    if (c > 2 * cap) return 2 * cap;
  }
  return c;
}

}  // namespace

SelectionResult simple_greedy(const ProblemInstance& pr, int kappa) {
  check_kappa(kappa);
  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  SelectionResult res;
  res.method = "simple";
  res.kappa = kappa;

  const auto start = Clock::now();
  std::vector<char> used(num, 0);
  Eigen::MatrixXd omega_s = pr.omega0;
  const double tr0 = trace_inverse(omega_s);
  double tr_s = tr0;
  for (int it = 0; it < budget; ++it) {
    int best = -1;
    double best_tr = std::numeric_limits<double>::infinity();
    for (int id = 0; id < num; ++id) {
      if (used[id]) continue;
      const double tr_cand = trace_inverse(omega_s + pr.increments[id].delta);
      if (tr_cand < best_tr) {  // strict: ties go to the smallest id
        best_tr = tr_cand;
        best = id;
      }
    }
    res.selected.ids.push_back(best);
    res.gains.push_back(tr_s - best_tr);
    used[best] = 1;
    omega_s += pr.increments[best].delta;
    tr_s = best_tr;
  }
  res.elapsed_s = seconds_since(start);
  res.objective = tr0 - tr_s;
  return res;
}

SelectionResult fast_lowrank_greedy(const ProblemInstance& pr, int kappa) {
  check_kappa(kappa);
  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  SelectionResult res;
  res.method = "lowrank";
  res.kappa = kappa;

  const auto start = Clock::now();
  std::vector<char> used(num, 0);
  Eigen::MatrixXd omega_inv = symmetric_inverse(pr.omega0);
  for (int it = 0; it < budget; ++it) {
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int id = 0; id < num; ++id) {
      if (used[id]) continue;
      const double gain = marginal_gain_smw(omega_inv, pr.increments[id].G);
      if (gain > best_gain) {
        best_gain = gain;
        best = id;
      }
    }
    res.selected.ids.push_back(best);
    res.gains.push_back(best_gain);
    used[best] = 1;
    omega_inv = apply_smw_update(omega_inv, pr.increments[best].G);
  }
  res.elapsed_s = seconds_since(start);
  res.objective = objective_value(pr, res.selected);
  return res;
}

int randomized_sample_size(int num_features, int kappa, double epsilon) {
  return static_cast<int>(
      std::ceil(static_cast<double>(num_features) / kappa * std::log(1.0 / epsilon)));
}

SelectionResult randomized_greedy(const ProblemInstance& pr, int kappa,
                                  double epsilon, std::uint64_t seed) {
  check_kappa(kappa);
  SelectionResult res;
  res.method = "randomized";
  res.kappa = kappa;
  res.seed = seed;
  if (kappa == 0) return res;

  const double eps_floor = std::exp(-static_cast<double>(kappa));
  if (epsilon < eps_floor * (1.0 - 1e-12) || epsilon > 1.0 + 1e-12)
    throw std::invalid_argument("randomized_greedy: epsilon must lie in [e^-kappa, 1]");

  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  const int sample_base = std::max(1, randomized_sample_size(num, kappa, epsilon));

  const auto start = Clock::now();
  SplitMix64 rng(seed);
  std::vector<char> used(num, 0);
  Eigen::MatrixXd omega_s = pr.omega0;
  const double tr0 = trace_inverse(omega_s);
  double tr_s = tr0;
  std::vector<int> pool;
  pool.reserve(num);
  std::vector<int> sample;
  for (int it = 0; it < budget; ++it) {
    pool.clear();
    for (int id = 0; id < num; ++id)
      if (!used[id]) pool.push_back(id);
    const int r = std::min<int>(sample_base, static_cast<int>(pool.size()));
    const auto positions = rng.sample_indices(static_cast<int>(pool.size()), r);
    sample.clear();
    for (int pos : positions) sample.push_back(pool[pos]);
    std::sort(sample.begin(), sample.end());

    int best = -1;
    double best_tr = std::numeric_limits<double>::infinity();
    for (int id : sample) {
      const double tr_cand = trace_inverse(omega_s + pr.increments[id].delta);
      if (tr_cand < best_tr) {
        best_tr = tr_cand;
        best = id;
      }
    }
    res.selected.ids.push_back(best);
    res.gains.push_back(tr_s - best_tr);
    used[best] = 1;
    omega_s += pr.increments[best].delta;
    tr_s = best_tr;
  }
  res.elapsed_s = seconds_since(start);
  res.objective = tr0 - tr_s;
  return res;
}

SelectionResult linearized_select(const ProblemInstance& pr, int kappa) {
  check_kappa(kappa);
  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  SelectionResult res;
  res.method = "linearized";
  res.kappa = kappa;

  const auto start = Clock::now();
  const std::vector<double> scores = leverage_scores(pr);
  std::vector<int> order(num);
  for (int i = 0; i < num; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  res.selected.ids.assign(order.begin(), order.begin() + budget);
  res.elapsed_s = seconds_since(start);

  fill_chain_gains(pr, &res);
  return res;
}

SelectionResult baseline_select(const ProblemInstance& pr, int kappa,
                                BaselineKind kind, std::uint64_t seed) {
  check_kappa(kappa);
  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  SelectionResult res;
  res.kappa = kappa;

  const auto start = Clock::now();
  switch (kind) {
    case BaselineKind::kRandom: {
      res.method = "random";
      res.seed = seed;
      SplitMix64 rng(seed);
      res.selected.ids = rng.sample_indices(num, budget);
      break;
    }
    case BaselineKind::kQuality: {
      res.method = "quality";
      if (pr.meta.size() != static_cast<std::size_t>(num))
        throw std::invalid_argument("quality baseline requires landmark metadata");
      std::vector<int> order(num);
      for (int i = 0; i < num; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pr.meta[a].quality != pr.meta[b].quality)
          return pr.meta[a].quality > pr.meta[b].quality;
        return a < b;
      });
      res.selected.ids.assign(order.begin(), order.begin() + budget);
      break;
    }
    case BaselineKind::kGrid: {
      res.method = "grid";
      res.seed = seed;
      if (pr.meta.size() != static_cast<std::size_t>(num))
        throw std::invalid_argument("grid baseline requires first-frame metadata");
      std::map<int, std::vector<int>> cells;
      std::vector<int> unseen;
      for (int i = 0; i < num; ++i) {
        if (pr.meta[i].visible_at_first_frame && pr.meta[i].grid_cell >= 0)
          cells[pr.meta[i].grid_cell].push_back(i);
        else
          unseen.push_back(i);
      }
      for (auto& [cell, ids] : cells) {
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
          if (pr.meta[a].quality != pr.meta[b].quality)
            return pr.meta[a].quality > pr.meta[b].quality;
          return a < b;
        });
      }
      // Round-robin one feature per nonempty cell, cells in row-major order,
      // until the budget or the buckets run out.
      std::size_t pass = 0;
      while (static_cast<int>(res.selected.ids.size()) < budget) {
        bool took_any = false;
        for (auto& [cell, ids] : cells) {
          if (pass < ids.size()) {
            res.selected.ids.push_back(ids[pass]);
            took_any = true;
            if (static_cast<int>(res.selected.ids.size()) == budget) break;
          }
        }
        if (!took_any) break;
        ++pass;
      }
      // Landmarks invisible at frame 0 fall back to seeded-random order.
      if (static_cast<int>(res.selected.ids.size()) < budget && !unseen.empty()) {
        SplitMix64 rng(seed);
        const auto perm =
            rng.sample_indices(static_cast<int>(unseen.size()),
                               static_cast<int>(unseen.size()));
        for (int pos : perm) {
          if (static_cast<int>(res.selected.ids.size()) == budget) break;
          res.selected.ids.push_back(unseen[pos]);
        }
      }
      break;
    }
  }
  res.elapsed_s = seconds_since(start);

  fill_chain_gains(pr, &res);
  return res;
}

SelectionResult exhaustive_optimal(const ProblemInstance& pr, int kappa,
                                   std::uint64_t max_combinations) {
  check_kappa(kappa);
  const int num = pr.num_features();
  const int budget = std::min(kappa, num);
  SelectionResult res;
  res.method = "optimal";
  res.kappa = kappa;
  if (budget == 0) return res;

  if (binomial_capped(num, budget, max_combinations) > max_combinations)
    throw CapExceededError("exhaustive_optimal: C(N, kappa) exceeds the cap of " +
                           std::to_string(max_combinations));

  const auto start = Clock::now();
  std::vector<int> combo(budget);
  for (int i = 0; i < budget; ++i) combo[i] = i;
  std::vector<int> best_combo;
  double best_tr = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd omega(pr.dim(), pr.dim());
  while (true) {
    omega = pr.omega0;
    for (int id : combo) omega += pr.increments[id].delta;
    const double tr = trace_inverse(omega);
    if (tr < best_tr) {  // strict: lexicographically smallest tie survives
      best_tr = tr;
      best_combo = combo;
    }
    // Next combination in lexicographic order.
    int i = budget - 1;
    while (i >= 0 && combo[i] == num - budget + i) --i;
    if (i < 0) break;
    ++combo[i];
    for (int j = i + 1; j < budget; ++j) combo[j] = combo[j - 1] + 1;
  }
  res.selected.ids = best_combo;
  res.elapsed_s = seconds_since(start);

  fill_chain_gains(pr, &res);
  return res;
}

}  // namespace infoselect
