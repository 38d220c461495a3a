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

#include "infoselect/serialization.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

namespace infoselect {

namespace {

using nlohmann::json;

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(i, c));
  return arr;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix array has wrong length");
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(k++).get<double>();
  return m;
}

// Factored form of a dense PSD increment, used when loading instances that
// store `delta` instead of `G`.
Eigen::MatrixXd factor_psd(const Eigen::MatrixXd& delta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(resymmetrize(delta));
  const auto& vals = es.eigenvalues();
  const double vmax = vals.size() > 0 ? vals.maxCoeff() : 0.0;
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i)
    if (vals(i) > 1e-12 * std::max(vmax, 1e-300)) keep.push_back(i);
  Eigen::MatrixXd g(keep.size(), delta.rows());
  for (std::size_t k = 0; k < keep.size(); ++k)
    g.row(k) = std::sqrt(vals(keep[k])) * es.eigenvectors().col(keep[k]).transpose();
  return g;
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json j;
  j["seed"] = sc.seed;
  j["dt"] = sc.dt;
  j["wheelbase"] = sc.wheelbase;
  j["camera"] = {{"half_fov_h", sc.camera.half_fov_h},
                 {"half_fov_v", sc.camera.half_fov_v},
                 {"z_min", sc.camera.z_min},
                 {"z_max", sc.camera.z_max},
                 {"t_ext", vec3_to_json(sc.camera.t_ext)},
                 {"R_ext", matrix_to_json(sc.camera.R_ext)}};
  j["poses"] = json::array();
  for (const Pose& p : sc.poses)
    j["poses"].push_back({{"t", vec3_to_json(p.t)}, {"psi", p.psi}});
  j["controls"] = json::array();
  for (const ControlInput& c : sc.controls)
    j["controls"].push_back({{"u", c.u}, {"delta", c.delta}});
  j["landmarks"] = json::array();
  for (const Landmark& lm : sc.landmarks)
    j["landmarks"].push_back(
        {{"id", lm.id}, {"p", vec3_to_json(lm.p)}, {"quality", lm.quality}});
  json imu;
  imu["sigma_p"] = sc.imu.sigma_p;
  imu["sigma_v"] = sc.imu.sigma_v;
  imu["sigma_b"] = sc.imu.sigma_b;
  imu["sigma_prior"] = sc.imu.sigma_prior;
  imu["sigma_bearing"] = sc.imu.sigma_bearing;
  imu["gravity"] = vec3_to_json(sc.imu.gravity);
  imu["accel_readings"] = json::array();
  for (const auto& a : sc.imu.accel_readings) imu["accel_readings"].push_back(vec3_to_json(a));
  if (sc.imu.prior_information)
    imu["prior_information"] = matrix_to_json(*sc.imu.prior_information);
  j["imu"] = imu;
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario sc;
  sc.seed = j.at("seed").get<std::uint64_t>();
  sc.dt = j.at("dt").get<double>();
  sc.wheelbase = j.at("wheelbase").get<double>();
  const json& cam = j.at("camera");
  sc.camera.half_fov_h = cam.at("half_fov_h").get<double>();
  sc.camera.half_fov_v = cam.at("half_fov_v").get<double>();
  sc.camera.z_min = cam.at("z_min").get<double>();
  sc.camera.z_max = cam.at("z_max").get<double>();
  sc.camera.t_ext = vec3_from_json(cam.at("t_ext"));
  sc.camera.R_ext = matrix_from_json(cam.at("R_ext"), 3, 3);
  for (const json& p : j.at("poses"))
    sc.poses.push_back(planar_pose(vec3_from_json(p.at("t")), p.at("psi").get<double>()));
  for (const json& c : j.at("controls"))
    sc.controls.push_back({c.at("u").get<double>(), c.at("delta").get<double>()});
  for (const json& lm : j.at("landmarks"))
    sc.landmarks.push_back({lm.at("id").get<int>(), vec3_from_json(lm.at("p")),
                            lm.at("quality").get<double>()});
  const json& imu = j.at("imu");
  sc.imu.sigma_p = imu.at("sigma_p").get<double>();
  sc.imu.sigma_v = imu.at("sigma_v").get<double>();
  sc.imu.sigma_b = imu.at("sigma_b").get<double>();
  sc.imu.sigma_prior = imu.at("sigma_prior").get<double>();
  sc.imu.sigma_bearing = imu.at("sigma_bearing").get<double>();
  sc.imu.gravity = vec3_from_json(imu.at("gravity"));
  for (const json& a : imu.at("accel_readings"))
    sc.imu.accel_readings.push_back(vec3_from_json(a));
  if (imu.contains("prior_information"))
    sc.imu.prior_information = matrix_from_json(imu.at("prior_information"), 9, 9);
  return sc;
}

json problem_to_json(const ProblemInstance& pr) {
  json j;
  j["n"] = pr.dim();
  j["T"] = pr.horizon;
  j["omega0"] = matrix_to_json(pr.omega0);
  j["increments"] = json::array();
  for (const auto& inc : pr.increments) {
    json e;
    e["id"] = inc.id;
    e["n_obs"] = inc.n_obs;
    e["G"] = {{"rows", inc.G.rows()}, {"data", matrix_to_json(inc.G)}};
    j["increments"].push_back(e);
  }
  if (!pr.meta.empty()) {
    j["meta"] = json::array();
    for (const auto& m : pr.meta)
      j["meta"].push_back({{"quality", m.quality},
                           {"visible0", m.visible_at_first_frame},
                           {"first_bearing", vec3_to_json(m.first_bearing)},
                           {"grid_cell", m.grid_cell}});
  }
  return j;
}

ProblemInstance problem_from_json(const json& j) {
  ProblemInstance pr;
  const Eigen::Index n = j.at("n").get<Eigen::Index>();
  pr.horizon = j.at("T").get<int>();
  pr.omega0 = resymmetrize(matrix_from_json(j.at("omega0"), n, n));
  for (const json& e : j.at("increments")) {
    LandmarkIncrement inc;
    inc.id = e.at("id").get<int>();
    inc.n_obs = e.value("n_obs", 0);
    if (e.contains("G")) {
      const Eigen::Index rows = e.at("G").at("rows").get<Eigen::Index>();
      inc.G = matrix_from_json(e.at("G").at("data"), rows, n);
      inc.delta = resymmetrize(inc.G.transpose() * inc.G);
    } else {
      inc.delta = resymmetrize(matrix_from_json(e.at("delta"), n, n));
      inc.G = factor_psd(inc.delta);
    }
    inc.trace = inc.delta.trace();
    pr.increments.push_back(std::move(inc));
  }
  if (j.contains("meta")) {
    for (const json& m : j.at("meta")) {
      LandmarkMeta meta;
      meta.quality = m.at("quality").get<double>();
      meta.visible_at_first_frame = m.at("visible0").get<bool>();
      meta.first_bearing = vec3_from_json(m.at("first_bearing"));
      meta.grid_cell = m.at("grid_cell").get<int>();
      pr.meta.push_back(meta);
    }
  }
  return pr;
}

json selection_to_json(const SelectionResult& res) {
  json j;
  j["method"] = res.method;
  j["kappa"] = res.kappa;
  if (res.seed)
    j["seed"] = *res.seed;
  else
    j["seed"] = nullptr;
  j["selected"] = res.selected.ids;
  j["gains"] = res.gains;
  j["objective"] = res.objective;
  j["elapsed_s"] = res.elapsed_s;
  return j;
}

SelectionResult selection_from_json(const json& j) {
  SelectionResult res;
  res.method = j.at("method").get<std::string>();
  res.kappa = j.at("kappa").get<int>();
  if (!j.at("seed").is_null()) res.seed = j.at("seed").get<std::uint64_t>();
  res.selected.ids = j.at("selected").get<std::vector<int>>();
  res.gains = j.at("gains").get<std::vector<double>>();
  res.objective = j.at("objective").get<double>();
  res.elapsed_s = j.at("elapsed_s").get<double>();
  return res;
}

json bound_report_to_json(const BoundReport& r) {
  json j;
  if (r.alpha) j["alpha"] = *r.alpha;
  if (r.gamma) j["gamma"] = *r.gamma;
  if (r.alpha_max) {
    j["alpha_max"] = *r.alpha_max;
    j["alpha_max_assumed"] = r.alpha_max_assumed;
  }
  j["alpha_bar"] = r.alpha_bar;
  j["gamma_lower"] = r.gamma_lower;
  j["delta_min"] = r.delta_min;
  if (r.greedy_factor_exhaustive) j["greedy_factor"] = *r.greedy_factor_exhaustive;
  j["greedy_factor_spectral"] = r.greedy_factor_spectral;
  if (r.randomized_guarantee) j["randomized_factor"] = *r.randomized_guarantee;
  if (r.c) j["c"] = *r.c;
  if (r.r) j["r"] = *r.r;
  if (r.eta) j["eta"] = *r.eta;
  j["kappa"] = r.kappa;
  j["epsilon"] = r.epsilon;
  j["instance_fingerprint"] = r.instance_fingerprint;
  return j;
}

std::string instance_fingerprint(const ProblemInstance& pr) {
  const std::string doc = problem_to_json(pr).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char ch : doc) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace infoselect
