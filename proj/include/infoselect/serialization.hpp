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

#include <string>

#include <json.hpp>

#include "infoselect/analysis.hpp"
#include "infoselect/selectors.hpp"

namespace infoselect {

// Scenario document: seed, dt, wheelbase, camera{...}, poses[]{t,psi},
// controls[]{u,delta}, landmarks[]{id,p,quality}, imu{...}. Matrices are
// row-major number arrays, angles radians, lengths meters.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

// Instance document: omega0 dense row-major; increments carry the factored
// form G (the loader also accepts a dense `delta` and refactors it).
nlohmann::json problem_to_json(const ProblemInstance& problem);
ProblemInstance problem_from_json(const nlohmann::json& j);

nlohmann::json selection_to_json(const SelectionResult& result);
SelectionResult selection_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& report);

/// FNV-1a 64-bit hash of the canonical instance serialization, as hex.
std::string instance_fingerprint(const ProblemInstance& problem);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace infoselect
