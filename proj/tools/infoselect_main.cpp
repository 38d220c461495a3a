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

// Experiment harness: scenario generation, single selector runs, sweeps over
// kappa / anticipation depth with optional frame-to-frame carry-over, and
// bound reports. All outputs are machine readable (JSON documents, CSV
// tables). Exit codes: 0 success, 2 usage or config, 3 combination cap
// exceeded, 4 bound inapplicable, 1 internal error.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "infoselect/analysis.hpp"
#include "infoselect/selectors.hpp"
#include "infoselect/serialization.hpp"

namespace {

using infoselect::BaselineKind;
using infoselect::ProblemInstance;
using infoselect::Scenario;
using infoselect::ScenarioConfig;
using infoselect::SelectionResult;
using nlohmann::json;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int max_workers() {
  const char* env = std::getenv("INFOSELECT_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

SelectionResult run_method(const ProblemInstance& problem, const std::string& method,
                           int kappa, double epsilon, std::uint64_t seed) {
  if (method == "simple") return infoselect::simple_greedy(problem, kappa);
  if (method == "lowrank") return infoselect::fast_lowrank_greedy(problem, kappa);
  if (method == "randomized")
    return infoselect::randomized_greedy(problem, kappa, epsilon, seed);
  if (method == "linearized") return infoselect::linearized_select(problem, kappa);
  if (method == "random")
    return infoselect::baseline_select(problem, kappa, BaselineKind::kRandom, seed);
  if (method == "grid")
    return infoselect::baseline_select(problem, kappa, BaselineKind::kGrid, seed);
  if (method == "quality")
    return infoselect::baseline_select(problem, kappa, BaselineKind::kQuality, seed);
  if (method == "optimal") return infoselect::exhaustive_optimal(problem, kappa);
  throw std::invalid_argument("unknown method: " + method);
}

bool method_is_seeded(const std::string& method) {
  return method == "randomized" || method == "random" || method == "grid";
}

std::string fmt(double v, const char* spec = "%.15g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// scenario-gen

struct ScenarioGenArgs {
  std::uint64_t seed = 1;
  int landmarks = 150;
  int frames = 13;
  std::string out;
  std::string controls_file;
  double dt = 0.1;
  double wheelbase = 0.26;
  double speed = 1.0;
  double steer = 0.05;
  double heading_noise = 0.0;
  double z_min = 0.2, z_max = 8.0, fov_h = 0.7, fov_v = 0.55;
  std::vector<double> box_min{0.4, -2.0, -0.4};
  std::vector<double> box_max{5.0, 2.0, 1.2};
  double sigma_p = 0.05, sigma_v = 0.05, sigma_b = 0.005, sigma_prior = 1.0;
  double sigma_bearing = 0.01;
};

ScenarioConfig to_config(const ScenarioGenArgs& a) {
  ScenarioConfig cfg;
  cfg.num_landmarks = a.landmarks;
  cfg.horizon = a.frames;
  cfg.dt = a.dt;
  cfg.wheelbase = a.wheelbase;
  cfg.constant_control = {a.speed, a.steer};
  cfg.camera = infoselect::CameraModel::forward_facing();
  cfg.camera.z_min = a.z_min;
  cfg.camera.z_max = a.z_max;
  cfg.camera.half_fov_h = a.fov_h;
  cfg.camera.half_fov_v = a.fov_v;
  cfg.box_min = Eigen::Vector3d(a.box_min[0], a.box_min[1], a.box_min[2]);
  cfg.box_max = Eigen::Vector3d(a.box_max[0], a.box_max[1], a.box_max[2]);
  cfg.heading_noise_std = a.heading_noise;
  cfg.imu.sigma_p = a.sigma_p;
  cfg.imu.sigma_v = a.sigma_v;
  cfg.imu.sigma_b = a.sigma_b;
  cfg.imu.sigma_prior = a.sigma_prior;
  cfg.imu.sigma_bearing = a.sigma_bearing;
  if (!a.controls_file.empty()) {
    const json doc = json::parse(infoselect::read_text_file(a.controls_file));
    for (const json& c : doc)
      cfg.controls.push_back({c.at("u").get<double>(), c.at("delta").get<double>()});
  }
  return cfg;
}

int cmd_scenario_gen(const ScenarioGenArgs& a) {
  const Scenario sc = infoselect::generate_scenario(a.seed, to_config(a));
  infoselect::write_text_file(a.out, infoselect::scenario_to_json(sc).dump(2) + "\n");
  int triangulable = 0;
  for (const auto& lm : sc.landmarks) {
    const auto mask = infoselect::visibility_mask(sc.poses, sc.camera, lm.p);
    int n_obs = 0;
    for (bool b : mask) n_obs += b ? 1 : 0;
    triangulable += n_obs >= 2 ? 1 : 0;
  }
  std::cout << "landmarks=" << sc.landmarks.size() << " triangulable=" << triangulable
            << " poses=" << sc.poses.size() << " out=" << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string scenario;
  std::string method = "simple";
  int kappa = 10;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string time_scope = "select";
};

int cmd_select(const SelectArgs& a) {
  const Scenario sc =
      infoselect::scenario_from_json(json::parse(infoselect::read_text_file(a.scenario)));
  const auto build_start = Clock::now();
  const ProblemInstance problem = infoselect::build_problem(sc);
  const double build_s = seconds_since(build_start);

  SelectionResult res = run_method(problem, a.method, a.kappa, a.epsilon, a.seed);
  if (a.time_scope == "total") res.elapsed_s += build_s;
  if (!a.out.empty())
    infoselect::write_text_file(a.out, infoselect::selection_to_json(res).dump(2) + "\n");
  std::cout << "method=" << res.method << " kappa=" << a.kappa
            << " selected=" << res.selected.ids.size()
            << " objective=" << fmt(res.objective) << " elapsed_s=" << fmt(res.elapsed_s)
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep / horizon-sweep

struct SweepRow {
  std::string instance;
  std::string method;
  int kappa = 0;
  std::string repeat;
  std::string seed;
  double objective = 0.0;
  double scaled_mse = 0.0;
  double elapsed_s = 0.0;
  bool failed = false;
};

struct ExperimentConfig {
  std::string scenario_path;
  std::optional<json> generate;
  std::vector<std::string> methods;
  std::vector<int> kappas;
  int repeats = 1;
  double epsilon_sample = 0.5;
  std::vector<int> frames_list;
  std::uint64_t seed = 0;
  std::string output;
  bool carry_over = false;
  int window = -1;
  std::string time_scope = "select";
};

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("scenario")) cfg.scenario_path = j.at("scenario").get<std::string>();
  if (j.contains("generate")) cfg.generate = j.at("generate");
  cfg.methods = j.at("methods").get<std::vector<std::string>>();
  cfg.kappas = j.at("kappas").get<std::vector<int>>();
  cfg.repeats = j.value("repeats", 1);
  cfg.epsilon_sample = j.value("epsilon_sample", 0.5);
  if (j.contains("frames_list")) cfg.frames_list = j.at("frames_list").get<std::vector<int>>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.output = j.value("output", std::string{});
  cfg.carry_over = j.value("carry_over", false);
  cfg.window = j.value("window", -1);
  cfg.time_scope = j.value("time_scope", std::string{"select"});

  if (cfg.methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
  if (!std::is_sorted(cfg.kappas.begin(), cfg.kappas.end()))
    throw std::invalid_argument("config: kappas must be sorted ascending");
  if (cfg.kappas.empty()) throw std::invalid_argument("config: kappas must be nonempty");
  if (cfg.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
  if (cfg.scenario_path.empty() && !cfg.generate)
    throw std::invalid_argument("config: need scenario path or generate block");
  if (cfg.carry_over && !cfg.frames_list.empty())
    throw std::invalid_argument("config: carry_over and frames_list are exclusive");
  return cfg;
}

Scenario load_sweep_scenario(const ExperimentConfig& cfg) {
  if (!cfg.scenario_path.empty())
    return infoselect::scenario_from_json(
        json::parse(infoselect::read_text_file(cfg.scenario_path)));
  const json& g = *cfg.generate;
  ScenarioGenArgs a;
  a.seed = g.value("seed", std::uint64_t{1});
  a.landmarks = g.value("landmarks", 150);
  a.frames = g.value("frames", 13);
  a.dt = g.value("dt", 0.1);
  a.wheelbase = g.value("wheelbase", 0.26);
  a.speed = g.value("speed", 1.0);
  a.steer = g.value("steer", 0.05);
  a.z_min = g.value("z_min", 0.2);
  a.z_max = g.value("z_max", 8.0);
  if (g.contains("box_min")) a.box_min = g.at("box_min").get<std::vector<double>>();
  if (g.contains("box_max")) a.box_max = g.at("box_max").get<std::vector<double>>();
  return infoselect::generate_scenario(a.seed, to_config(a));
}

// Poses/controls window [anchor, anchor+window] of a scenario; world and
// sensor configuration are shared.
Scenario slice_scenario(const Scenario& sc, int anchor, int window) {
  Scenario out = sc;
  out.poses.assign(sc.poses.begin() + anchor, sc.poses.begin() + anchor + window + 1);
  out.controls.assign(sc.controls.begin() + anchor, sc.controls.begin() + anchor + window);
  if (static_cast<int>(sc.imu.accel_readings.size()) >= anchor + window)
    out.imu.accel_readings.assign(sc.imu.accel_readings.begin() + anchor,
                                  sc.imu.accel_readings.begin() + anchor + window);
  return out;
}

std::string csv_line(const SweepRow& r) {
  return r.instance + "," + r.method + "," + std::to_string(r.kappa) + "," + r.repeat +
         "," + r.seed + "," + fmt(r.objective) + "," + fmt(r.scaled_mse) + "," +
         fmt(r.elapsed_s, "%.6e") + "\n";
}

void append_aggregate_rows(std::vector<SweepRow>* rows) {
  // Mean and sample-std rows per (instance, method, kappa) for seeded methods
  // run with two or more repeats.
  struct Key {
    std::string instance, method;
    int kappa;
    bool operator<(const Key& o) const {
      return std::tie(instance, method, kappa) < std::tie(o.instance, o.method, o.kappa);
    }
  };
  std::map<Key, std::vector<const SweepRow*>> groups;
  for (const SweepRow& r : *rows)
    if (method_is_seeded(r.method) && !r.failed)
      groups[{r.instance, r.method, r.kappa}].push_back(&r);

  std::vector<SweepRow> aggregates;
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    const double n = static_cast<double>(members.size());
    SweepRow mean{key.instance, key.method, key.kappa, "mean", "", 0, 0, 0, false};
    for (const SweepRow* m : members) {
      mean.objective += m->objective;
      mean.scaled_mse += m->scaled_mse;
      mean.elapsed_s += m->elapsed_s;
    }
    mean.objective /= n;
    mean.scaled_mse /= n;
    mean.elapsed_s /= n;
    SweepRow stddev{key.instance, key.method, key.kappa, "std", "", 0, 0, 0, false};
    for (const SweepRow* m : members) {
      stddev.objective += (m->objective - mean.objective) * (m->objective - mean.objective);
      stddev.scaled_mse += (m->scaled_mse - mean.scaled_mse) * (m->scaled_mse - mean.scaled_mse);
      stddev.elapsed_s += (m->elapsed_s - mean.elapsed_s) * (m->elapsed_s - mean.elapsed_s);
    }
    stddev.objective = std::sqrt(stddev.objective / (n - 1.0));
    stddev.scaled_mse = std::sqrt(stddev.scaled_mse / (n - 1.0));
    stddev.elapsed_s = std::sqrt(stddev.elapsed_s / (n - 1.0));
    aggregates.push_back(mean);
    aggregates.push_back(stddev);
  }
  rows->insert(rows->end(), aggregates.begin(), aggregates.end());
}

struct SweepCell {
  std::string instance;
  const ProblemInstance* problem = nullptr;
  double build_s = 0.0;
  std::string method;
  int kappa = 0;
  int repeat = 0;
};

int run_sweep(const ExperimentConfig& cfg, const std::string& out_override) {
  const Scenario scenario = load_sweep_scenario(cfg);
  const std::string out_path = out_override.empty() ? cfg.output : out_override;
  if (out_path.empty()) throw std::invalid_argument("sweep: no output path");

  std::vector<SweepRow> rows;
  int failures = 0;

  if (cfg.carry_over) {
    // Frame-to-frame mode: previously selected features still visible in the
    // next window are retained and only the residual budget is refilled.
    const int window = cfg.window > 0 ? std::min(cfg.window, scenario.horizon())
                                      : scenario.horizon();
    const int anchors = scenario.horizon() - window + 1;
    for (const std::string& method : cfg.methods) {
      const int reps = method_is_seeded(method) ? cfg.repeats : 1;
      for (int kappa : cfg.kappas) {
        for (int rep = 0; rep < reps; ++rep) {
          const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
          std::vector<int> carried_prev;
          for (int anchor = 0; anchor < anchors; ++anchor) {
            SweepRow row;
            row.instance = std::to_string(anchor);
            row.method = method;
            row.kappa = kappa;
            row.repeat = std::to_string(rep);
            row.seed = method_is_seeded(method) ? std::to_string(seed) : "";
            try {
              const auto build_start = Clock::now();
              const Scenario windowed = slice_scenario(scenario, anchor, window);
              const ProblemInstance problem = infoselect::build_problem(windowed);
              const double build_s = seconds_since(build_start);

              std::vector<char> visible(problem.num_features(), 0);
              for (int i = 0; i < problem.num_features(); ++i)
                visible[i] = problem.increments[i].n_obs >= 1;
              std::vector<int> carried;
              for (int id : carried_prev)
                if (visible[id] && static_cast<int>(carried.size()) < kappa)
                  carried.push_back(id);

              // Reduced ground set: visible, not carried. The carried
              // increments move into the base matrix.
              ProblemInstance reduced;
              reduced.omega0 = problem.omega0;
              reduced.horizon = problem.horizon;
              for (int id : carried) reduced.omega0 += problem.increments[id].delta;
              reduced.omega0 = infoselect::resymmetrize(reduced.omega0);
              std::vector<int> mapping;
              for (int id = 0; id < problem.num_features(); ++id) {
                if (!visible[id]) continue;
                if (std::find(carried.begin(), carried.end(), id) != carried.end()) continue;
                reduced.increments.push_back(problem.increments[id]);
                reduced.increments.back().id = static_cast<int>(mapping.size());
                reduced.meta.push_back(problem.meta[id]);
                mapping.push_back(id);
              }
              const int budget = kappa - static_cast<int>(carried.size());
              SelectionResult res =
                  run_method(reduced, method, budget, cfg.epsilon_sample, seed);

              infoselect::FeatureSet full;
              full.ids = carried;
              for (int local : res.selected.ids) full.ids.push_back(mapping[local]);
              const double f = infoselect::objective_value(problem, full);
              const double tr0 = infoselect::trace_inverse(problem.omega0);
              row.objective = f;
              row.scaled_mse = (tr0 - f) / (problem.horizon + 1);
              row.elapsed_s =
                  cfg.time_scope == "total" ? res.elapsed_s + build_s : res.elapsed_s;
              carried_prev = full.ids;
            } catch (const std::exception& e) {
              row.failed = true;
              ++failures;
              std::cerr << "cell failed (" << row.instance << "," << method << "," << kappa
                        << "," << rep << "): " << e.what() << "\n";
            }
            rows.push_back(row);
          }
        }
      }
    }
  } else {
    // Independent cells over (instance x method x kappa x repeat), where the
    // instance axis is the anticipation depth when frames_list is given.
    struct InstanceSlot {
      std::string name;
      ProblemInstance problem;
      double build_s = 0.0;
      double tr0 = 0.0;
    };
    std::vector<InstanceSlot> instances;
    if (cfg.frames_list.empty()) {
      const auto start = Clock::now();
      InstanceSlot slot;
      slot.name = "0";
      slot.problem = infoselect::build_problem(scenario);
      slot.build_s = seconds_since(start);
      slot.tr0 = infoselect::trace_inverse(slot.problem.omega0);
      instances.push_back(std::move(slot));
    } else {
      for (int depth : cfg.frames_list) {
        if (depth < 0 || depth > scenario.horizon())
          throw std::invalid_argument("frames_list entry outside [0, T]");
        const auto start = Clock::now();
        InstanceSlot slot;
        slot.name = std::to_string(depth);
        slot.problem = infoselect::build_problem(scenario, depth);
        slot.build_s = seconds_since(start);
        slot.tr0 = infoselect::trace_inverse(slot.problem.omega0);
        instances.push_back(std::move(slot));
      }
    }

    struct Cell {
      int instance_idx, kappa, repeat;
      std::string method;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < instances.size(); ++i)
      for (const std::string& method : cfg.methods) {
        const int reps = method_is_seeded(method) ? cfg.repeats : 1;
        for (int kappa : cfg.kappas)
          for (int rep = 0; rep < reps; ++rep)
            cells.push_back({static_cast<int>(i), kappa, rep, method});
      }

    rows.resize(cells.size());
    std::atomic<int> failure_count{0};
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t k = cursor.fetch_add(1);
        if (k >= cells.size()) break;
        const Cell& cell = cells[k];
        const InstanceSlot& slot = instances[cell.instance_idx];
        SweepRow& row = rows[k];
        row.instance = slot.name;
        row.method = cell.method;
        row.kappa = cell.kappa;
        row.repeat = std::to_string(cell.repeat);
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(cell.repeat);
        row.seed = method_is_seeded(cell.method) ? std::to_string(seed) : "";
        try {
          SelectionResult res =
              run_method(slot.problem, cell.method, cell.kappa, cfg.epsilon_sample, seed);
          row.objective = res.objective;
          row.scaled_mse = (slot.tr0 - res.objective) / (slot.problem.horizon + 1);
          row.elapsed_s = cfg.time_scope == "total" ? res.elapsed_s + slot.build_s
                                                    : res.elapsed_s;
        } catch (const std::exception& e) {
          row.failed = true;
          failure_count.fetch_add(1);
          std::cerr << "cell failed (" << row.instance << "," << row.method << ","
                    << row.kappa << "," << row.repeat << "): " << e.what() << "\n";
        }
      }
    };
    const int workers = std::min<int>(max_workers(), static_cast<int>(cells.size()));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
      for (auto& t : threads) t.join();
    }
    failures = failure_count.load();
  }

  append_aggregate_rows(&rows);

  std::string csv = "instance,method,kappa,repeat,seed,objective,scaled_mse,elapsed_s\n";
  for (const SweepRow& r : rows)
    if (!r.failed) csv += csv_line(r);
  infoselect::write_text_file(out_path, csv);
  std::cout << "rows=" << rows.size() << " failures=" << failures << " out=" << out_path
            << "\n";
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string scenario;
  int kappa = 10;
  double epsilon = 0.5;
  int exhaustive_max = 8;
  double assumed_alpha_max = -1.0;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a) {
  const Scenario sc =
      infoselect::scenario_from_json(json::parse(infoselect::read_text_file(a.scenario)));
  const ProblemInstance problem = infoselect::build_problem(sc);
  std::optional<double> assumed;
  if (a.assumed_alpha_max > 0.0) assumed = a.assumed_alpha_max;
  const infoselect::BoundReport report = infoselect::compute_bound_report(
      problem, a.kappa, a.epsilon, a.exhaustive_max, assumed,
      infoselect::instance_fingerprint(problem));
  if (!a.out.empty())
    infoselect::write_text_file(a.out,
                                infoselect::bound_report_to_json(report).dump(2) + "\n");
  std::cout << "alpha_bar=" << fmt(report.alpha_bar)
            << " gamma_lower=" << fmt(report.gamma_lower)
            << " greedy_factor_spectral=" << fmt(report.greedy_factor_spectral);
  if (report.alpha) std::cout << " alpha=" << fmt(*report.alpha);
  if (report.gamma) std::cout << " gamma=" << fmt(*report.gamma);
  if (report.greedy_factor_exhaustive)
    std::cout << " greedy_factor=" << fmt(*report.greedy_factor_exhaustive);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-aware visual-feature selection experiments"};
  app.require_subcommand(1);

  ScenarioGenArgs gen_args;
  CLI::App* gen = app.add_subcommand("scenario-gen", "generate a synthetic scenario");
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--landmarks", gen_args.landmarks);
  gen->add_option("--frames", gen_args.frames, "prediction horizon T");
  gen->add_option("--out", gen_args.out)->required();
  gen->add_option("--controls", gen_args.controls_file, "JSON file with [{u,delta},...]");
  gen->add_option("--dt", gen_args.dt);
  gen->add_option("--wheelbase", gen_args.wheelbase);
  gen->add_option("--speed", gen_args.speed);
  gen->add_option("--steer", gen_args.steer);
  gen->add_option("--heading-noise", gen_args.heading_noise);
  gen->add_option("--z-min", gen_args.z_min);
  gen->add_option("--z-max", gen_args.z_max);
  gen->add_option("--fov-h", gen_args.fov_h);
  gen->add_option("--fov-v", gen_args.fov_v);
  gen->add_option("--box-min", gen_args.box_min)->expected(3);
  gen->add_option("--box-max", gen_args.box_max)->expected(3);
  gen->add_option("--sigma-p", gen_args.sigma_p);
  gen->add_option("--sigma-v", gen_args.sigma_v);
  gen->add_option("--sigma-b", gen_args.sigma_b);
  gen->add_option("--sigma-prior", gen_args.sigma_prior);
  gen->add_option("--sigma-bearing", gen_args.sigma_bearing);

  SelectArgs sel_args;
  CLI::App* sel = app.add_subcommand("select", "run one selector on a scenario");
  sel->add_option("--scenario", sel_args.scenario)->required();
  sel->add_option("--method", sel_args.method)
      ->check(CLI::IsMember({"simple", "lowrank", "randomized", "linearized", "random",
                             "grid", "quality", "optimal"}));
  sel->add_option("--kappa", sel_args.kappa)->required();
  sel->add_option("--epsilon", sel_args.epsilon, "randomized-greedy sampling parameter");
  sel->add_option("--seed", sel_args.seed);
  sel->add_option("--out", sel_args.out);
  sel->add_option("--time-scope", sel_args.time_scope)
      ->check(CLI::IsMember({"select", "total"}));

  std::string sweep_config, sweep_out, frames_list_arg;
  bool sweep_carry = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run a selector sweep from a config");
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--out", sweep_out, "override config output path");
  sweep->add_flag("--carry-over", sweep_carry, "retain still-visible selections");

  std::string hs_config, hs_out, hs_frames;
  CLI::App* hsweep =
      app.add_subcommand("horizon-sweep", "sweep the anticipation depth (frames list)");
  hsweep->add_option("--config", hs_config)->required();
  hsweep->add_option("--out", hs_out);
  hsweep->add_option("--frames-list", hs_frames, "comma-separated depths, overrides config");

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "compute a bound report");
  bounds->add_option("--scenario", bounds_args.scenario)->required();
  bounds->add_option("--kappa", bounds_args.kappa)->required();
  bounds->add_option("--epsilon", bounds_args.epsilon);
  bounds->add_option("--exhaustive-max", bounds_args.exhaustive_max);
  bounds->add_option("--alpha-max", bounds_args.assumed_alpha_max,
                     "assumed alpha_max when N exceeds --exhaustive-max");
  bounds->add_option("--out", bounds_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_scenario_gen(gen_args);
    if (sel->parsed()) return cmd_select(sel_args);
    if (bounds->parsed()) return cmd_bounds(bounds_args);
    if (sweep->parsed()) {
      ExperimentConfig cfg =
          parse_experiment_config(json::parse(infoselect::read_text_file(sweep_config)));
      if (sweep_carry) cfg.carry_over = true;
      return run_sweep(cfg, sweep_out);
    }
    if (hsweep->parsed()) {
      ExperimentConfig cfg =
          parse_experiment_config(json::parse(infoselect::read_text_file(hs_config)));
      if (!hs_frames.empty()) {
        cfg.frames_list.clear();
        std::stringstream ss(hs_frames);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.frames_list.push_back(std::stoi(tok));
      }
      if (cfg.frames_list.empty())
        throw std::invalid_argument("horizon-sweep: needs a frames list");
      return run_sweep(cfg, hs_out);
    }
  } catch (const infoselect::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const infoselect::CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const infoselect::BoundUndefinedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
